# ---
# jupyter:
#   jupytext:
#     formats: py:percent
#     text_representation:
#       extension: .py
#       format_name: percent
# ---

# %% [markdown]
# # Framed representations, stability and the gauge group
#
# A point is a right module structure `x` on a graded space V together with a framing
# `p: D -> V`. Matrices use the column convention: `x(b)` for `b` in `e_i A e_j` maps
# V_i to V_j, and a product acts as `x(b.b') = x(b') @ x(b)`.

# %%
import random

from quivermod import FieldSpec, Quiver
from quivermod.fields import Matrix
from quivermod.framed import (FramedRepPoint, enumerate_framed_points, gauge_act, is_stable, orbit_equal,
                              random_gauge, rep_from_generators, validate_rep)
from quivermod.graded import DimVector
from quivermod.quivers import build_truncated_preprojective

F3 = FieldSpec.prime(3)
a2 = Quiver.of([1, 2], [("a", 1, 2)])
pi = build_truncated_preprojective(a2, 2, F3)
v = DimVector.of([1, 2], (1, 1))

rep = rep_from_generators(pi, v, {pi.index("a"): Matrix.from_rows(F3, [[1]]),
                                  pi.index("a*"): Matrix.from_rows(F3, [[0]])})
fp = FramedRepPoint(rep, (Matrix.from_rows(F3, [[1]]), Matrix.zeros(F3, 1, 0)))
print(validate_rep(rep).ok, is_stable(fp))

# %% [markdown]
# Stability means the image of the framing generates V. Kill the arrow and vertex 2
# is no longer reached.

# %%
dead = rep_from_generators(pi, v, {pi.index("a"): Matrix.from_rows(F3, [[0]]),
                                   pi.index("a*"): Matrix.from_rows(F3, [[0]])})
print(is_stable(FramedRepPoint(dead, fp.framing)))

# %% [markdown]
# The gauge group acts freely on stable points, so `orbit_equal` can recover the
# group element exactly from a pair of points.

# %%
rng = random.Random(0)
g = random_gauge(v, F3, rng)
moved = gauge_act(g, fp)
print(orbit_equal(fp, moved) == g)

# %% [markdown]
# Over a finite field every point can be listed. With d = (1,1) and v = (1,1) there
# are (q-1)^2 (2q+1) stable points, which is 28 for q = 3.

# %%
d = DimVector.of([1, 2], (1, 1))
points = list(enumerate_framed_points(pi, d, v))
print(len(points))
