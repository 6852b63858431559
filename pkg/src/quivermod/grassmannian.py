"""Points of the Grassmannian of quotient modules, stored by their kernels."""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field as dc_field
from typing import Iterator, Optional, Sequence

from .fields import FieldSpec, Matrix, in_row_space, rref
from .framed import RepPoint, rep_is_nilpotent
from .graded import DimVector, FramedModule, dim_vector_le
from .parallel import BudgetExceeded, run_blocks

DEFAULT_BUDGET = 1 << 24


def gaussian_binomial(n: int, k: int, q: int) -> int:
    """Number of k-dimensional subspaces of F_q^n."""
    if k < 0 or k > n:
        return 0
    num = den = 1
    for i in range(k):
        num *= q ** (n - i) - 1
        den *= q ** (i + 1) - 1
    return num // den


@dataclass(frozen=True)
class GradedSubspace:
    """Per-vertex subspaces given by full-rank RREF row bases."""

    ambient: DimVector
    blocks: tuple

    def __post_init__(self):
        for m, n in zip(self.blocks, self.ambient):
            if m.cols != n:
                raise ValueError("subspace block does not match the ambient dimension")

    @classmethod
    def from_rows(cls, ambient: DimVector, field: FieldSpec, rows_per_vertex: Sequence) -> "GradedSubspace":
        """Canonicalise arbitrary spanning rows into RREF blocks."""
        blocks = []
        for rows, n in zip(rows_per_vertex, ambient):
            m = Matrix.from_rows(field, rows, cols=n)
            red, piv = rref(m)
            blocks.append(Matrix(field, len(piv), n, red.entries[:len(piv) * n]))
        return cls(ambient, tuple(blocks))

    @property
    def dims(self) -> DimVector:
        return DimVector(self.ambient.vertices, tuple(m.rows for m in self.blocks))

    def pivots(self, j: int) -> tuple[int, ...]:
        m = self.blocks[j]
        return tuple(next(c for c in range(m.cols) if m[r, c]) for r in range(m.rows))

    @property
    def key(self) -> tuple:
        return tuple(m.entries for m in self.blocks)


@dataclass(frozen=True)
class QuotientPoint:
    """A quotient ``M -> Q`` of the framed module, identified with its kernel.

    Equality compares kernel blocks only.
    """

    module: FramedModule = dc_field(compare=False, hash=False)
    kernel: GradedSubspace

    @property
    def v(self) -> DimVector:
        return self.module.dims - self.kernel.dims

    def describe(self) -> dict:
        return {"kernel": {str(v): m.to_rows() for v, m in zip(self.module.algebra.vertices, self.kernel.blocks)}}


def is_submodule(s: GradedSubspace, m: FramedModule) -> bool:
    """``S . b`` lies in ``S`` for every basis element ``b``."""
    a = m.algebra
    if s.ambient != m.dims:
        raise ValueError("subspace and module have different dimension vectors")
    vidx = {v: k for k, v in enumerate(a.vertices)}
    pivots = [s.pivots(j) for j in range(len(s.blocks))]
    for b, el in enumerate(a.basis):
        if a.is_idempotent_index(b):
            continue
        i, j = vidx[el.source], vidx[el.target]
        src = s.blocks[i]
        if not src.rows:
            continue
        image = src @ m.action[b].T
        for row in image.iter_rows():
            if any(row) and not in_row_space(s.blocks[j], pivots[j], row):
                return False
    return True


def rref_matrices(n: int, k: int, field: FieldSpec) -> Iterator[Matrix]:
    """All full-rank k x n RREF matrices, by pivot set then free entries."""
    elems = field.elements()
    for pivots in itertools.combinations(range(n), k):
        pset = set(pivots)
        free = [(r, c) for r, pc in enumerate(pivots) for c in range(pc + 1, n) if c not in pset]
        for vals in itertools.product(elems, repeat=len(free)):
            entries = [field.zero] * (k * n)
            for r, pc in enumerate(pivots):
                entries[r * n + pc] = field.one
            for (r, c), x in zip(free, vals):
                entries[r * n + c] = x
            yield Matrix(field, k, n, tuple(entries))


def count_graded_subspaces(ambient: DimVector, sdims: DimVector, q: int) -> int:
    out = 1
    for n, k in zip(ambient, sdims):
        out *= gaussian_binomial(n, k, q)
    return out


def enumerate_graded_subspaces(ambient: DimVector, sdims: DimVector, field: FieldSpec,
                               budget: int = DEFAULT_BUDGET) -> Iterator[GradedSubspace]:
    if not field.is_finite:
        raise ValueError("enumeration needs a finite field")
    if not dim_vector_le(sdims, ambient):
        raise ValueError(f"subspace dimensions {sdims} exceed ambient {ambient}")
    size = count_graded_subspaces(ambient, sdims, field.order)
    if size > budget:
        raise BudgetExceeded(size, budget)
    per_vertex = [list(rref_matrices(n, k, field)) for n, k in zip(ambient, sdims)]
    for combo in itertools.product(*per_vertex):
        yield GradedSubspace(ambient, tuple(combo))


def induced_quotient_rep(qp: QuotientPoint) -> tuple[RepPoint, tuple]:
    """The action on ``Q = M/S`` in the non-pivot coordinates, plus the projection ``M -> Q``."""
    m, s = qp.module, qp.kernel
    a, f = m.algebra, m.field
    proj, sect = [], []
    for j, n in enumerate(m.dims):
        piv = s.pivots(j)
        pset = set(piv)
        free = [c for c in range(n) if c not in pset]
        fpos = {c: t for t, c in enumerate(free)}
        k = len(free)
        pe = [f.zero] * (k * n)
        for c in range(n):
            if c in fpos:
                pe[fpos[c] * n + c] = f.one
        for r, pc in enumerate(piv):
            row = s.blocks[j].row(r)
            for c in free:
                if row[c]:
                    pe[fpos[c] * n + pc] = f.neg(row[c])
        proj.append(Matrix(f, k, n, tuple(pe)))
        se = [f.zero] * (n * k)
        for c, t in fpos.items():
            se[c * k + t] = f.one
        sect.append(Matrix(f, n, k, tuple(se)))
    vidx = {v: t for t, v in enumerate(a.vertices)}
    action = tuple(proj[vidx[el.target]] @ m.action[b] @ sect[vidx[el.source]]
                   for b, el in enumerate(a.basis))
    qdims = DimVector(a.vertices, tuple(p.rows for p in proj))
    return RepPoint(a, qdims, action), tuple(proj)


def _quotient_block(args) -> list:
    m, sdims, nilpotent_only, first = args
    f = m.field
    out = []
    rest = [list(rref_matrices(n, k, f)) for n, k in list(zip(m.dims, sdims))[1:]]
    for tail in itertools.product(*rest):
        s = GradedSubspace(m.dims, (first,) + tail)
        if not is_submodule(s, m):
            continue
        qp = QuotientPoint(m, s)
        if nilpotent_only and not rep_is_nilpotent(induced_quotient_rep(qp)[0]):
            continue
        out.append(qp)
    return out


def enumerate_quotient_points(m: FramedModule, v: DimVector, field: Optional[FieldSpec] = None,
                              nilpotent_only: bool = False, budget: int = DEFAULT_BUDGET,
                              threads: int = 1) -> Iterator[QuotientPoint]:
    """Quotient modules of ``m`` with dimension vector ``v``, by their kernels.

    Work is split by the kernel block at the first vertex; the output order
    is that of :func:`enumerate_graded_subspaces` regardless of ``threads``.
    """
    f = m.field
    if field is not None and field != f:
        raise ValueError(f"module is over {f}, not {field}")
    if not f.is_finite:
        raise ValueError("enumeration needs a finite field")
    if not dim_vector_le(v, m.dims):
        raise ValueError(f"quotient dimension {v} exceeds dim(A_D) = {m.dims}")
    sdims = m.dims - v
    size = count_graded_subspaces(m.dims, sdims, f.order)
    if size > budget:
        raise BudgetExceeded(size, budget)
    firsts = list(rref_matrices(m.dims.entries[0], sdims.entries[0], f))
    blocks = [(m, sdims, nilpotent_only, first) for first in firsts]
    for chunk in run_blocks(_quotient_block, blocks, threads):
        for qp in chunk:
            yield qp if qp.module is m else QuotientPoint(m, qp.kernel)
