# ---
# jupyter:
#   jupytext:
#     formats: py:percent
#     text_representation:
#       extension: .py
#       format_name: percent
# ---

# %% [markdown]
# # Exact fields and finite-dimensional algebras
#
# Everything in `quivermod` is exact. Scalars over F_p are plain ints in `range(p)`
# and scalars over Q are `Fraction`s. A field is described by a `FieldSpec`, which also
# does the arithmetic.

# %%
from fractions import Fraction

from quivermod import FieldSpec
from quivermod.fields import Matrix, kernel_basis, rank, rref, solve

F5 = FieldSpec.prime(5)
QQ = FieldSpec.rationals()
print(F5, QQ, F5.inv(2), QQ.div(1, 3))

# %% [markdown]
# Matrices are small dense immutable objects. RREF is the one canonical form used
# everywhere else, so it is worth seeing it once.

# %%
m = Matrix.from_rows(F5, [[1, 2, 3], [2, 4, 1], [0, 0, 4]])
red, pivots = rref(m)
print(red)
print("pivots", pivots, "rank", rank(m))
print("kernel rows", kernel_basis(Matrix.from_rows(QQ, [[1, 2, 3], [2, 4, 6]])).to_rows())
print("solve", solve(Matrix.from_rows(QQ, [[2, 1], [1, 3]]), (Fraction(1), Fraction(2))))

# %% [markdown]
# ## Algebras from structure constants
#
# An algebra is a basis, each element living in some `e_i A e_j`, plus a cube of
# structure constants. `AlgebraPresentation.build` fills in the vertex idempotents
# `e<v>` for you. Here is the 2x2 matrix algebra written on two vertices.

# %%
from quivermod import AlgebraPresentation, BasisElement, validate_algebra

m2 = AlgebraPresentation.build(
    [1, 2],
    [BasisElement("E12", 1, 2), BasisElement("E21", 2, 1)],
    {("E12", "E21"): {"e1": 1}, ("E21", "E12"): {"e2": 1}},
    QQ,
)
print([b.label for b in m2.basis])
print(validate_algebra(m2))

# %% [markdown]
# Break it on purpose and the report names the axiom and a witness triple.

# %%
broken = AlgebraPresentation.build(
    [1],
    [BasisElement("x", 1, 1, 1), BasisElement("y", 1, 1, 2), BasisElement("z", 1, 1, 3)],
    {("x", "x"): {"y": 1}, ("x", "y"): {"z": 1}},
    F5,
)
print(validate_algebra(broken))
