"""Vertex-graded spaces, algebras given by structure constants, and A_D.

An :class:`AlgebraPresentation` is a finite-dimensional algebra containing
the commuting idempotents ``e_i`` (one per vertex).  Every basis element
``b`` lives in one bigraded piece ``e_src A e_tgt``, and products are stored
as a dense cube ``mult[b][b'][k]`` with ``b * b' = sum_k mult[b][b'][k] * k``.

Modules are right modules.  A path ``b`` from ``i`` to ``j`` therefore moves
the ``i``-graded piece of a module to the ``j``-graded piece.
"""
from __future__ import annotations

import functools
from dataclasses import dataclass, field as dc_field, replace
from typing import Hashable, Iterable, Iterator, Mapping, Optional, Sequence

from .fields import FieldSpec, Matrix, linear_combination


@dataclass(frozen=True)
class VertexSet:
    labels: tuple

    def __post_init__(self):
        if not self.labels:
            raise ValueError("vertex set must be nonempty")
        if len(set(self.labels)) != len(self.labels):
            raise ValueError(f"duplicate vertex labels in {self.labels}")

    @classmethod
    def of(cls, labels: Iterable[Hashable]) -> "VertexSet":
        return cls(tuple(labels))

    def __iter__(self) -> Iterator:
        return iter(self.labels)

    def __len__(self) -> int:
        return len(self.labels)

    def __contains__(self, v) -> bool:
        return v in self.labels

    def index(self, v) -> int:
        try:
            return self.labels.index(v)
        except ValueError:
            raise KeyError(f"unknown vertex {v!r}") from None


@dataclass(frozen=True)
class DimVector:
    """A dimension vector ``(dim M_i)_{i in I}``."""

    vertices: VertexSet
    entries: tuple

    def __post_init__(self):
        if len(self.entries) != len(self.vertices):
            raise ValueError("dimension vector must have one entry per vertex")
        if any((not isinstance(x, int)) or x < 0 for x in self.entries):
            raise ValueError(f"dimensions must be non-negative integers, got {self.entries}")

    @classmethod
    def of(cls, vertices, values) -> "DimVector":
        if not isinstance(vertices, VertexSet):
            vertices = VertexSet.of(vertices)
        if isinstance(values, Mapping):
            unknown = set(values) - set(vertices.labels)
            if unknown:
                raise KeyError(f"unknown vertices {sorted(map(str, unknown))}")
            values = [values.get(v, 0) for v in vertices]
        return cls(vertices, tuple(int(x) for x in values))

    @classmethod
    def zero(cls, vertices: VertexSet) -> "DimVector":
        return cls(vertices, (0,) * len(vertices))

    def __getitem__(self, v) -> int:
        return self.entries[self.vertices.index(v)]

    def __iter__(self):
        return iter(self.entries)

    def __len__(self) -> int:
        return len(self.entries)

    def items(self):
        return zip(self.vertices.labels, self.entries)

    @property
    def total(self) -> int:
        return sum(self.entries)

    def _check(self, other: "DimVector"):
        if self.vertices != other.vertices:
            raise ValueError("dimension vectors over different vertex sets")

    def __add__(self, other: "DimVector") -> "DimVector":
        self._check(other)
        return DimVector(self.vertices, tuple(a + b for a, b in zip(self.entries, other.entries)))

    def __sub__(self, other: "DimVector") -> "DimVector":
        self._check(other)
        return DimVector(self.vertices, tuple(a - b for a, b in zip(self.entries, other.entries)))

    def __str__(self) -> str:
        return "(" + ",".join(map(str, self.entries)) + ")"


def dim_vector_le(u: DimVector, v: DimVector) -> bool:
    """Componentwise ``u <= v``."""
    u._check(v)
    return all(a <= b for a, b in zip(u.entries, v.entries))


@dataclass(frozen=True)
class GradedSpace:
    dims: DimVector
    field: FieldSpec

    @property
    def total(self) -> int:
        return self.dims.total

    def offsets(self) -> tuple[int, ...]:
        out, acc = [], 0
        for n in self.dims.entries:
            out.append(acc)
            acc += n
        return tuple(out)

    def split(self, vector: Sequence) -> tuple[tuple, ...]:
        """Cut a flat coordinate vector into per-vertex blocks."""
        if len(vector) != self.total:
            raise ValueError("vector length does not match the graded dimension")
        offs = self.offsets()
        return tuple(tuple(vector[o:o + n]) for o, n in zip(offs, self.dims.entries))


@dataclass(frozen=True)
class BasisElement:
    label: str
    source: Hashable
    target: Hashable
    degree: Optional[int] = None


@dataclass(frozen=True, eq=False)
class AlgebraPresentation:
    """A finite-dimensional algebra over the vertex idempotents.

    ``quiver``/``arrows`` are set when the basis comes from paths in a quiver
    (``arrows`` maps edge labels to basis indices); ``base_quiver`` is the
    undoubled quiver of a preprojective construction.
    """

    vertices: VertexSet
    basis: tuple
    mult: tuple
    idempotents: tuple
    field: FieldSpec
    quiver: object = None
    base_quiver: object = None
    arrows: Mapping = dc_field(default_factory=dict)

    @property
    def dim(self) -> int:
        return len(self.basis)

    @property
    def graded_by_length(self) -> bool:
        return all(b.degree is not None for b in self.basis)

    def src(self, b: int):
        return self.basis[b].source

    def tgt(self, b: int):
        return self.basis[b].target

    def index(self, label: str) -> int:
        for k, b in enumerate(self.basis):
            if b.label == label:
                return k
        raise KeyError(f"no basis element labelled {label!r}")

    def idempotent(self, vertex) -> int:
        return self.idempotents[self.vertices.index(vertex)]

    def is_idempotent_index(self, b: int) -> bool:
        return b in self._idempotent_set

    @functools.cached_property
    def _idempotent_set(self) -> frozenset:
        return frozenset(self.idempotents)

    @functools.cached_property
    def sparse_mult(self) -> tuple:
        """``sparse_mult[b][b']`` = tuple of ``(k, c)`` with c != 0."""
        return tuple(tuple(tuple((k, c) for k, c in enumerate(row) if c) for row in plane)
                     for plane in self.mult)

    def unit_vector(self, b: int) -> tuple:
        f = self.field
        return tuple(f.one if k == b else f.zero for k in range(self.dim))

    def multiply(self, u: Sequence, w: Sequence) -> tuple:
        """Product of two algebra elements given as coordinate vectors."""
        f = self.field
        acc = [f.zero] * self.dim
        sm = self.sparse_mult
        for b, cu in enumerate(u):
            if not cu:
                continue
            row = sm[b]
            for b2, cw in enumerate(w):
                if not cw:
                    continue
                c = f.mul(cu, cw)
                for k, s in row[b2]:
                    acc[k] = f.add(acc[k], f.mul(c, s))
        return tuple(acc)

    def component(self, i, j) -> list[int]:
        return bigraded_component(self, i, j)

    def with_metadata(self, **kw) -> "AlgebraPresentation":
        return replace(self, **kw)

    def __repr__(self) -> str:
        return (f"AlgebraPresentation(dim={self.dim}, vertices={list(self.vertices)}, "
                f"field={self.field})")

    @classmethod
    def build(cls, vertices, basis: Sequence[BasisElement], products: Mapping, field: FieldSpec,
              **metadata) -> "AlgebraPresentation":
        """Assemble a presentation, adding one idempotent ``e_<i>`` per vertex.

        ``products`` maps pairs of basis labels to ``{label: coefficient}``;
        products with an idempotent are filled in automatically and missing
        pairs are zero.
        """
        if not isinstance(vertices, VertexSet):
            vertices = VertexSet.of(vertices)
        idem = [BasisElement(f"e{v}", v, v, 0) for v in vertices]
        full = idem + list(basis)
        labels = [b.label for b in full]
        if len(set(labels)) != len(labels):
            raise ValueError(f"duplicate basis labels in {labels}")
        pos = {l: k for k, l in enumerate(labels)}
        n = len(full)
        zero, one = field.zero, field.one
        cube = [[[zero] * n for _ in range(n)] for _ in range(n)]
        for vi, v in enumerate(vertices):
            for k, b in enumerate(full):
                if b.source == v:
                    cube[vi][k][k] = one
                if b.target == v:
                    cube[k][vi][k] = one
        for (l1, l2), combo in products.items():
            if l1 not in pos or l2 not in pos:
                raise KeyError(f"unknown basis label in product {l1} * {l2}")
            row = [zero] * n
            for l3, c in combo.items():
                if l3 not in pos:
                    raise KeyError(f"unknown basis label {l3!r}")
                row[pos[l3]] = field.add(row[pos[l3]], field(c))
            cube[pos[l1]][pos[l2]] = row
        mult = tuple(tuple(tuple(r) for r in plane) for plane in cube)
        return cls(vertices, tuple(full), mult, tuple(range(len(vertices))), field, **metadata)


@dataclass
class ValidationReport:
    failures: list = dc_field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures

    def add(self, axiom: str, witness) -> None:
        self.failures.append((axiom, witness))

    def axioms_failed(self) -> set[str]:
        return {a for a, _ in self.failures}

    def __bool__(self) -> bool:
        return self.ok

    def __str__(self) -> str:
        if self.ok:
            return "valid"
        lines = [f"invalid ({len(self.failures)} failures)"]
        lines += [f"  {a}: {w}" for a, w in self.failures]
        return "\n".join(lines)


def _vec_eq(f: FieldSpec, u: Sequence, w: Sequence) -> bool:
    return all(f.sub(x, y) == 0 for x, y in zip(u, w))


def validate_algebra(a: AlgebraPresentation, max_witnesses: int = 20) -> ValidationReport:
    """Check idempotents, unit, bigrading and associativity from the structure constants.

    Failures are collected (capped per axiom by ``max_witnesses``) rather than raised.
    """
    rep = ValidationReport()
    f, n = a.field, a.dim
    counts: dict[str, int] = {}

    def fail(axiom, witness):
        counts[axiom] = counts.get(axiom, 0) + 1
        if counts[axiom] <= max_witnesses:
            rep.add(axiom, witness)

    for b in a.basis:
        if b.source not in a.vertices or b.target not in a.vertices:
            fail("vertex", b.label)
    if len(a.mult) != n or any(len(pl) != n or any(len(r) != n for r in pl) for pl in a.mult):
        fail("shape", (n,))
        return rep
    if len(a.idempotents) != len(a.vertices):
        fail("idempotent", "one idempotent per vertex required")
        return rep

    labels = list(a.vertices)
    for vi, ei in enumerate(a.idempotents):
        if a.src(ei) != labels[vi] or a.tgt(ei) != labels[vi]:
            fail("idempotent", (labels[vi], "grading"))
    for vi, ei in enumerate(a.idempotents):
        for vj, ej in enumerate(a.idempotents):
            expect = a.unit_vector(ei) if vi == vj else (f.zero,) * n
            if not _vec_eq(f, a.mult[ei][ej], expect):
                fail("idempotent", (labels[vi], labels[vj]))

    unit = [f.zero] * n
    for ei in a.idempotents:
        unit[ei] = f.add(unit[ei], f.one)
    for b in range(n):
        eb = a.unit_vector(b)
        if not _vec_eq(f, a.multiply(unit, eb), eb) or not _vec_eq(f, a.multiply(eb, unit), eb):
            fail("unit", a.basis[b].label)

    graded_ok = True
    for b in range(n):
        es, et = a.idempotent(a.src(b)), a.idempotent(a.tgt(b))
        eb = a.unit_vector(b)
        if not _vec_eq(f, a.mult[es][b], eb) or not _vec_eq(f, a.mult[b][et], eb):
            graded_ok = False
            fail("bigrading", a.basis[b].label)
    for b in range(n):
        for b2 in range(n):
            row = a.sparse_mult[b][b2]
            if not row:
                continue
            if a.tgt(b) != a.src(b2):
                graded_ok = False
                fail("bigrading", (a.basis[b].label, a.basis[b2].label))
                continue
            for k, _ in row:
                if a.src(k) != a.src(b) or a.tgt(k) != a.tgt(b2):
                    graded_ok = False
                    fail("bigrading", (a.basis[b].label, a.basis[b2].label))
                    break

    sm = a.sparse_mult
    for b in range(n):
        for b2 in range(n):
            if graded_ok and a.tgt(b) != a.src(b2):
                continue
            left_first = sm[b][b2]
            for b3 in range(n):
                if graded_ok and a.tgt(b2) != a.src(b3):
                    continue
                lhs = [f.zero] * n
                for k, c in left_first:
                    for k2, c2 in sm[k][b3]:
                        lhs[k2] = f.add(lhs[k2], f.mul(c, c2))
                rhs = [f.zero] * n
                for k, c in sm[b2][b3]:
                    for k2, c2 in sm[b][k]:
                        rhs[k2] = f.add(rhs[k2], f.mul(c, c2))
                if lhs != rhs:
                    fail("associativity", (a.basis[b].label, a.basis[b2].label, a.basis[b3].label))
    return rep


def bigraded_component(a: AlgebraPresentation, i, j) -> list[int]:
    """Indices of the basis elements of ``e_i A e_j``."""
    if i not in a.vertices or j not in a.vertices:
        raise KeyError(f"unknown vertex in component ({i!r}, {j!r})")
    return [k for k, b in enumerate(a.basis) if b.source == i and b.target == j]


def framed_basis_blocks(a: AlgebraPresentation, d: DimVector) -> tuple[tuple, ...]:
    """Basis of ``A_D`` grouped by target vertex.

    Entries are ``((slot_vertex, slot_number), b)`` with ``b`` in ``e_i A``;
    ordered by slot (vertex order, then number) and then by basis index.
    """
    if d.vertices != a.vertices:
        raise ValueError("framing dimension vector is over a different vertex set")
    blocks = {v: [] for v in a.vertices}
    for i, di in d.items():
        for s in range(di):
            for b, el in enumerate(a.basis):
                if el.source == i:
                    blocks[el.target].append(((i, s), b))
    return tuple(tuple(blocks[v]) for v in a.vertices)


def framed_module_dims(a: AlgebraPresentation, d: DimVector) -> DimVector:
    """``dim(A_D)_j = sum_i d_i * |basis of e_i A e_j|`` without building the module."""
    return DimVector(a.vertices, tuple(len(bl) for bl in framed_basis_blocks(a, d)))


@dataclass(frozen=True, eq=False)
class FramedModule:
    """The right module ``A_D = D (x) A`` with its right action.

    ``action[c]`` is the matrix of right multiplication by basis element ``c``,
    mapping the ``src(c)`` block to the ``tgt(c)`` block (columns are inputs).
    ``inclusion[i]`` is the canonical map ``D_i -> (A_D)_i``.
    """

    algebra: AlgebraPresentation
    d: DimVector
    blocks: tuple
    action: tuple
    inclusion: tuple

    @property
    def dims(self) -> DimVector:
        return DimVector(self.algebra.vertices, tuple(len(b) for b in self.blocks))

    @property
    def field(self) -> FieldSpec:
        return self.algebra.field

    def position(self, slot, b) -> tuple[int, int]:
        """``(vertex index, coordinate)`` of basis vector ``(slot, b)``."""
        return self._positions[(slot, b)]

    @functools.cached_property
    def _positions(self) -> dict:
        return {key: (j, k) for j, bl in enumerate(self.blocks) for k, key in enumerate(bl)}

    def basis_labels(self) -> list[list[str]]:
        return [[f"(s{slot[0]}.{slot[1]},{self.algebra.basis[b].label})" for slot, b in bl]
                for bl in self.blocks]


def build_framed_module(a: AlgebraPresentation, d: DimVector, check: bool = True) -> FramedModule:
    f = a.field
    blocks = framed_basis_blocks(a, d)
    vidx = {v: k for k, v in enumerate(a.vertices)}
    pos = {key: (j, k) for j, bl in enumerate(blocks) for k, key in enumerate(bl)}
    action = []
    for c, el in enumerate(a.basis):
        src_block = blocks[vidx[el.source]]
        tgt_block = blocks[vidx[el.target]]
        rows, cols = len(tgt_block), len(src_block)
        entries = [f.zero] * (rows * cols)
        for col, (slot, b) in enumerate(src_block):
            for k, coef in a.sparse_mult[b][c]:
                j, r = pos[(slot, k)]
                if j != vidx[el.target]:
                    raise ValueError(f"product {a.basis[b].label}*{el.label} leaves e_{slot[0]}A e_{el.target}")
                entries[r * cols + col] = f.add(entries[r * cols + col], coef)
        action.append(Matrix(f, rows, cols, tuple(entries)))
    inclusion = []
    for vi, (i, di) in enumerate(d.items()):
        ei = a.idempotents[vi]
        m = len(blocks[vi])
        entries = [f.zero] * (m * di)
        for s in range(di):
            _, r = pos[((i, s), ei)]
            entries[r * di + s] = f.one
        inclusion.append(Matrix(f, m, di, tuple(entries)))
    fm = FramedModule(a, d, blocks, tuple(action), tuple(inclusion))
    if check:
        bad = check_module_axioms(fm)
        if bad:
            raise ValueError(f"A_D violates the module axiom at {bad[:5]}")
    return fm


def check_module_axioms(m: FramedModule) -> list[tuple[str, str]]:
    """Pairs ``(b, b')`` where ``act(b*b') != act(b') @ act(b)``."""
    a, f = m.algebra, m.field
    bad = []
    for b in range(a.dim):
        for b2 in range(a.dim):
            if a.tgt(b) != a.src(b2):
                continue
            rows, cols = m.action[b2].rows, m.action[b].cols
            lhs = linear_combination(f, ((c, m.action[k]) for k, c in a.sparse_mult[b][b2]), rows, cols)
            if lhs != m.action[b2] @ m.action[b]:
                bad.append((a.basis[b].label, a.basis[b2].label))
    return bad
