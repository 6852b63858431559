"""Quivers, truncated path algebras and truncated preprojective algebras.

Paths compose left to right: ``p.q`` is "first p, then q", so ``p.q`` is
nonzero only when ``p`` ends where ``q`` starts.  With right modules this
gives ``v . (p.q) = (v . p) . q``.
"""
from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from typing import Hashable, Iterable, Optional, Sequence

from .fields import FieldSpec, Matrix, reduce_vector, row_space_basis
from .graded import AlgebraPresentation, BasisElement, DimVector, VertexSet

STAR = "*"


@dataclass(frozen=True)
class Edge:
    label: str
    source: Hashable
    target: Hashable


@dataclass(frozen=True)
class Quiver:
    """A finite directed graph.

    ``opposite`` lists ``(a, a*)`` pairs when this quiver is a double quiver.
    """

    vertices: VertexSet
    edges: tuple = ()
    opposite: tuple = ()

    def __post_init__(self):
        labels = [e.label for e in self.edges]
        if len(set(labels)) != len(labels):
            raise ValueError(f"edge labels must be distinct: {labels}")
        for e in self.edges:
            if e.source not in self.vertices or e.target not in self.vertices:
                raise ValueError(f"edge {e.label} has an endpoint outside the vertex set")

    @classmethod
    def of(cls, vertices: Iterable, edges: Iterable[tuple] = ()) -> "Quiver":
        return cls(VertexSet.of(vertices), tuple(Edge(*e) for e in edges))

    def edge(self, label: str) -> Edge:
        for e in self.edges:
            if e.label == label:
                return e
        raise KeyError(f"no edge {label!r}")

    def has_edge_loops(self) -> bool:
        return any(e.source == e.target for e in self.edges)

    def is_double(self) -> bool:
        return bool(self.opposite) or not self.edges


@dataclass(frozen=True)
class Path:
    """A path: a start vertex plus a composable sequence of edges."""

    start: Hashable
    edges: tuple = ()

    def __post_init__(self):
        cur = self.start
        for e in self.edges:
            if e.source != cur:
                raise ValueError(f"edge {e.label} does not start at {cur!r}")
            cur = e.target

    @property
    def length(self) -> int:
        return len(self.edges)

    @property
    def source(self):
        return self.start

    @property
    def target(self):
        return self.edges[-1].target if self.edges else self.start

    @property
    def label(self) -> str:
        if not self.edges:
            return f"e{self.start}"
        return ".".join(e.label for e in self.edges)

    def then(self, other: "Path") -> Optional["Path"]:
        """Concatenation, or None when the paths do not meet."""
        if self.target != other.start:
            return None
        return Path(self.start, self.edges + other.edges)


def enumerate_paths(q: Quiver, max_length: int) -> list[Path]:
    """All paths of length <= max_length, by length then edge order."""
    if max_length < 0:
        return []
    layer = [Path(v) for v in q.vertices]
    out = list(layer)
    edge_rank = {e: k for k, e in enumerate(q.edges)}
    for _ in range(max_length):
        nxt = [Path(p.start, p.edges + (e,)) for p in layer for e in q.edges if e.source == p.target]
        nxt.sort(key=lambda p: tuple(edge_rank[e] for e in p.edges))
        out += nxt
        layer = nxt
    return out


def build_path_algebra_truncated(q: Quiver, n: int, field: FieldSpec) -> AlgebraPresentation:
    """``kQ / kQ_{>=n}``: basis = paths of length < n, product = concatenation or 0."""
    if n < 1:
        raise ValueError("length bound must be at least 1")
    paths = enumerate_paths(q, n - 1)
    index = {p: k for k, p in enumerate(paths)}
    size = len(paths)
    zero, one = field.zero, field.one
    empty = (zero,) * size
    mult = []
    for p in paths:
        plane = []
        for p2 in paths:
            r = p.then(p2)
            if r is None or r not in index:
                plane.append(empty)
            else:
                row = [zero] * size
                row[index[r]] = one
                plane.append(tuple(row))
        mult.append(tuple(plane))
    basis = tuple(BasisElement(p.label, p.source, p.target, p.length) for p in paths)
    arrows = {p.edges[0].label: k for k, p in enumerate(paths) if p.length == 1}
    return AlgebraPresentation(q.vertices, basis, tuple(mult), tuple(range(len(q.vertices))), field,
                               quiver=q, arrows=arrows)


def double_quiver(q: Quiver) -> Quiver:
    """Add ``a*: tgt(a) -> src(a)`` for every edge ``a``; originals come first."""
    labels = {e.label for e in q.edges}
    stars = []
    for e in q.edges:
        s = e.label + STAR
        if s in labels:
            raise ValueError(f"cannot double: label {s!r} already used")
        stars.append(Edge(s, e.target, e.source))
    return Quiver(q.vertices, q.edges + tuple(stars), tuple((e.label, s.label) for e, s in zip(q.edges, stars)))


@dataclass(frozen=True)
class IdealGenerators:
    """Homogeneous elements of an algebra, as coordinate vectors in its basis."""

    vectors: tuple = ()
    labels: tuple = ()

    def __len__(self) -> int:
        return len(self.vectors)


def theta_components(qbar: Quiver, alg: AlgebraPresentation) -> IdealGenerators:
    """The pieces ``e_i theta e_i`` of ``theta = sum_a (a.a* - a*.a)``.

    At vertex ``i`` this is ``sum_{src a = i} a.a* - sum_{tgt a = i} a*.a``.
    """
    f = alg.field
    pairs = qbar.opposite
    if qbar.edges and not pairs:
        raise ValueError("theta needs a double quiver")
    index = {b.label: k for k, b in enumerate(alg.basis)}
    vecs, labels = [], []
    for v in qbar.vertices:
        vec = [f.zero] * alg.dim
        for a, s in pairs:
            e = qbar.edge(a)
            for lab, sign, hit in ((f"{a}.{s}", f.one, e.source == v), (f"{s}.{a}", f.neg(f.one), e.target == v)):
                if not hit:
                    continue
                if lab not in index:
                    raise ValueError("truncation too small to contain theta (need length bound >= 3)")
                vec[index[lab]] = f.add(vec[index[lab]], sign)
        vecs.append(tuple(vec))
        labels.append(f"theta_{v}")
    return IdealGenerators(tuple(vecs), tuple(labels))


@dataclass(frozen=True, eq=False)
class QuotientMap:
    """Degreewise data of ``A -> A/I`` for a homogeneous ideal ``I``."""

    algebra: AlgebraPresentation
    degrees: tuple
    ideal_bases: dict
    ideal_pivots: dict
    kept: tuple

    def rank(self, degree: int) -> int:
        return len(self.ideal_pivots.get(degree, ()))

    def reduce(self, vector: Sequence) -> tuple:
        """Coordinates of the image of ``vector`` in the quotient basis."""
        a, f = self.algebra, self.algebra.field
        out = []
        full = list(vector)
        for deg in self.degrees:
            idx = [k for k, b in enumerate(a.basis) if b.degree == deg]
            local = [full[k] for k in idx]
            if deg in self.ideal_bases:
                local = reduce_vector(f, self.ideal_bases[deg], self.ideal_pivots[deg], local)
            for k, x in zip(idx, local):
                full[k] = x
        pos = set(self.kept)
        return tuple(full[k] for k in range(a.dim) if k in pos)


def ideal_quotient_map(alg: AlgebraPresentation, gens: IdealGenerators) -> QuotientMap:
    """Compute ``I_n = span{b.g.b'}`` degree by degree and pick complementary basis elements."""
    if not alg.graded_by_length:
        raise ValueError("ideal quotients need a length-graded algebra")
    f = alg.field
    degree_of = [b.degree for b in alg.basis]
    degrees = tuple(sorted(set(degree_of)))
    spans: dict[int, list] = {}
    for g in gens.vectors:
        support = {degree_of[k] for k, c in enumerate(g) if c}
        if len(support) > 1:
            raise ValueError("ideal generators must be homogeneous")
        for b in range(alg.dim):
            left = alg.multiply(alg.unit_vector(b), g)
            if not any(left):
                continue
            for b2 in range(alg.dim):
                prod = alg.multiply(left, alg.unit_vector(b2))
                nz = [k for k, c in enumerate(prod) if c]
                if nz:
                    spans.setdefault(degree_of[nz[0]], []).append(prod)
    bases, pivots, dropped = {}, {}, set()
    for deg, vecs in spans.items():
        idx = [k for k in range(alg.dim) if degree_of[k] == deg]
        m = Matrix(f, len(vecs), len(idx), tuple(v[k] for v in vecs for k in idx))
        basis, piv = row_space_basis(m)
        bases[deg], pivots[deg] = basis, piv
        dropped.update(idx[c] for c in piv)
    kept = tuple(k for k in range(alg.dim) if k not in dropped)
    return QuotientMap(alg, degrees, bases, pivots, kept)


def quotient_by_two_sided_ideal(alg: AlgebraPresentation, gens: IdealGenerators) -> AlgebraPresentation:
    """``A/(gens)`` with basis the non-pivot basis elements in each degree."""
    qm = ideal_quotient_map(alg, gens)
    kept = qm.kept
    f = alg.field
    mult = tuple(
        tuple(qm.reduce(alg.mult[b][b2]) for b2 in kept)
        for b in kept
    )
    new_index = {k: t for t, k in enumerate(kept)}
    idem = tuple(new_index[e] for e in alg.idempotents)
    arrows = {lab: new_index[k] for lab, k in alg.arrows.items() if k in new_index}
    return AlgebraPresentation(alg.vertices, tuple(alg.basis[k] for k in kept), mult, idem, f,
                               quiver=alg.quiver, base_quiver=alg.base_quiver, arrows=arrows)


def build_truncated_preprojective(q: Quiver, n: int, field: FieldSpec) -> AlgebraPresentation:
    """``Pi_0 / (Pi_0)_{>=n}`` for the double of ``q``."""
    if q.has_edge_loops():
        raise ValueError("preprojective algebras need a quiver without edge-loops")
    if n < 1:
        raise ValueError("length bound must be at least 1")
    qbar = double_quiver(q)
    path_alg = build_path_algebra_truncated(qbar, n, field).with_metadata(base_quiver=q)
    if n <= 2:
        return path_alg
    return quotient_by_two_sided_ideal(path_alg, theta_components(qbar, path_alg))


def nilpotency_bound(v: DimVector) -> int:
    """Total dimension: nilpotent modules of this size are killed by paths of this length."""
    return v.total
