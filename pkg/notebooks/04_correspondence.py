# ---
# jupyter:
#   jupytext:
#     formats: py:percent
#     text_representation:
#       extension: .py
#       format_name: percent
# ---

# %% [markdown]
# # Quotients of A_D and the correspondence
#
# Fix D. The right module `A_D = D (x) A` has a Grassmannian of graded quotients of
# dimension v. A stable framed point gives such a quotient by extending `p` to
# `A_D -> V` and taking its kernel. Going back, a quotient inherits an action and
# a framing `D -> A_D -> Q`.

# %%
from quivermod import FieldSpec, Quiver
from quivermod.correspondence import (Instance, count_points_both_sides, quotient_points, quotient_to_rep,
                                      rational_spot_check, rep_to_quotient, verify_instance)
from quivermod.graded import DimVector
from quivermod.quivers import build_truncated_preprojective

a2 = Quiver.of([1, 2], [("a", 1, 2)])


def instance(p, d, v, nilpotent=False):
    f = FieldSpec.prime(p) if p else FieldSpec.rationals()
    alg = build_truncated_preprojective(a2, max(sum(v), 1), f)
    return Instance(alg, DimVector.of([1, 2], d), DimVector.of([1, 2], v), nilpotent_only=nilpotent)


inst = instance(3, (1, 1), (1, 1))
print(inst.summary())

# %% [markdown]
# One round trip by hand.

# %%
qp = quotient_points(inst)[3]
fp = quotient_to_rep(qp)
print(fp.describe())
print(rep_to_quotient(fp, inst.module) == qp)

# %% [markdown]
# The Grassmannian side is counted directly. The framed side is counted twice, once
# by sorting stable points into orbits and once by dividing by |G_v(F_q)|.

# %%
for p in (2, 3):
    r = count_points_both_sides(instance(p, (1, 1), (1, 1), nilpotent=True))
    print(p, r.count_gr, r.count_rep_orbits, r.count_rep_free)

# %% [markdown]
# `verify_instance` also round-trips every point on both sides. Over Q nothing can
# be enumerated, so random stable points are checked instead.

# %%
report = verify_instance(inst)
print(report.bijection_ok, len(report.round_trip_failures))
print(rational_spot_check(instance(None, (1, 1), (1, 1)), samples=20, seed=1))
