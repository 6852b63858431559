# ---
# jupyter:
#   jupytext:
#     formats: py:percent
#     text_representation:
#       extension: .py
#       format_name: percent
# ---

# %% [markdown]
# # Path algebras and truncated preprojective algebras
#
# A quiver gives a path algebra. Paths compose left to right, so `a.a*` means
# "first a, then a*". Truncating at length N keeps the algebra finite.

# %%
from quivermod import FieldSpec, Quiver
from quivermod.graded import bigraded_component
from quivermod.quivers import (build_path_algebra_truncated, build_truncated_preprojective, double_quiver,
                               ideal_quotient_map, theta_components)

F3 = FieldSpec.prime(3)
a2 = Quiver.of([1, 2], [("a", 1, 2)])
doubled = double_quiver(a2)
path3 = build_path_algebra_truncated(doubled, 3, F3)
print([b.label for b in path3.basis])

# %% [markdown]
# The relation lives at each vertex: paths starting with an original arrow minus
# paths starting with a starred one. For A2 it is just `a.a*` at vertex 1 and `-a*.a`
# at vertex 2.

# %%
gens = theta_components(doubled, path3)
for vec, label in zip(gens.vectors, gens.labels):
    print(label, {path3.basis[k].label: c for k, c in enumerate(vec) if c})

# %% [markdown]
# The quotient is computed one degree at a time: span all `b.g.b'` in each degree,
# row reduce, keep the basis paths that are not pivots.

# %%
qm = ideal_quotient_map(path3, gens)
print("ideal rank by degree", [qm.rank(k) for k in range(3)])
pi = build_truncated_preprojective(a2, 3, F3)
print([b.label for b in pi.basis])

# %% [markdown]
# A longer example: type A3 has a 10-dimensional preprojective algebra, and the
# bigraded table shows where each piece lives.

# %%
a3 = Quiver.of([1, 2, 3], [("a", 1, 2), ("b", 2, 3)])
pi3 = build_truncated_preprojective(a3, 4, F3)
print("dim", pi3.dim)
for i in pi3.vertices:
    print(i, [len(bigraded_component(pi3, i, j)) for j in pi3.vertices])
