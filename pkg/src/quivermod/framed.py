"""Framed representation points ``(x, p)``, stability and the gauge action.

Matrices act on column vectors.  ``x(b)`` for ``b`` in ``e_i A e_j`` is a
``v_j x v_i`` matrix and right-module compatibility reads
``x(b.b') = x(b') @ x(b)``.  The framing ``p_i`` is ``v_i x d_i``.
"""
from __future__ import annotations

import functools
import itertools
import random
from dataclasses import dataclass
from typing import Iterable, Iterator, Mapping, Optional, Sequence

from .fields import (FieldSpec, Matrix, SingularMatrixError, hstack, inverse, is_invertible,
                     linear_combination, rank, reduce_vector, row_space_basis, rref, solve)
from .graded import (AlgebraPresentation, DimVector, ValidationReport, framed_basis_blocks)
from .parallel import BudgetExceeded, run_blocks
from .quivers import Quiver

DEFAULT_BUDGET = 1 << 24


@dataclass(frozen=True)
class RepPoint:
    """A right module structure on the graded space with dimensions ``dims``."""

    algebra: AlgebraPresentation
    dims: DimVector
    action: tuple

    @property
    def field(self) -> FieldSpec:
        return self.algebra.field

    def dim(self, vertex) -> int:
        return self.dims[vertex]

    def x(self, label: str) -> Matrix:
        return self.action[self.algebra.index(label)]


@dataclass(frozen=True)
class FramedRepPoint:
    rep: RepPoint
    framing: tuple

    @property
    def algebra(self) -> AlgebraPresentation:
        return self.rep.algebra

    @property
    def dims(self) -> DimVector:
        return self.rep.dims

    @property
    def d(self) -> DimVector:
        return DimVector(self.dims.vertices, tuple(p.cols for p in self.framing))

    def describe(self) -> dict:
        a = self.algebra
        return {
            "x": {a.basis[b].label: m.to_rows() for b, m in enumerate(self.rep.action)
                  if not a.is_idempotent_index(b)},
            "p": {str(v): m.to_rows() for v, m in zip(a.vertices, self.framing)},
        }


@dataclass(frozen=True)
class GaugeElement:
    blocks: tuple

    def __post_init__(self):
        for g in self.blocks:
            if not is_invertible(g):
                raise ValueError("gauge components must be invertible")

    @classmethod
    def identity(cls, field: FieldSpec, v: DimVector) -> "GaugeElement":
        return cls(tuple(Matrix.identity(field, n) for n in v))

    def inverse(self) -> "GaugeElement":
        return GaugeElement(tuple(inverse(g) for g in self.blocks))

    def compose(self, other: "GaugeElement") -> "GaugeElement":
        """``self`` after ``other``."""
        return GaugeElement(tuple(g @ h for g, h in zip(self.blocks, other.blocks)))


def gauge_group_order(v: DimVector, q: int) -> int:
    """``|prod_i GL(v_i, F_q)|``."""
    out = 1
    for n in v:
        for k in range(n):
            out *= q ** n - q ** k
    return out


# ---------------------------------------------------------------------------
# Building actions from generators


@dataclass(frozen=True)
class ActionPlan:
    """How to extend matrices on a generating set to the whole basis.

    ``expressions[b]`` lists ``(coefficient, word)``; a word is a tuple of
    generator indices ``g1..gk`` standing for ``g1.g2...gk`` (the empty word
    stands for the idempotent at ``src(b)``).
    """

    generators: tuple
    expressions: tuple


def _word_closure(a: AlgebraPresentation, gens: Sequence[int]):
    """Greedy spanning words per bigraded piece; None if some basis element is not reached."""
    f = a.field
    words: dict = {}
    for vi, v in enumerate(a.vertices):
        frontier = [((), a.unit_vector(a.idempotents[vi]))]
        chosen = {}
        while frontier:
            nxt = []
            for word, vec in frontier:
                tgt = a.tgt(word[-1]) if word else v
                key = (v, tgt)
                bucket = chosen.setdefault(key, [])
                basis_rows = [w for _, w in bucket]
                if basis_rows:
                    m = Matrix(f, len(basis_rows), a.dim, tuple(x for r in basis_rows for x in r))
                    red, piv = row_space_basis(m)
                    if not any(reduce_vector(f, red, piv, vec)):
                        continue
                bucket.append((word, vec))
                for g in gens:
                    if a.src(g) != tgt:
                        continue
                    w2 = a.multiply(vec, a.unit_vector(g))
                    if any(w2):
                        nxt.append((word + (g,), w2))
            frontier = nxt
        words.update(chosen)
    expressions = []
    for b, el in enumerate(a.basis):
        bucket = words.get((el.source, el.target), [])
        if not bucket:
            return None
        m = Matrix(f, a.dim, len(bucket), tuple(vec[k] for k in range(a.dim) for _, vec in bucket))
        sol = solve(m, a.unit_vector(b))
        if sol is None:
            return None
        expressions.append(tuple((c, bucket[t][0]) for t, c in enumerate(sol) if c))
    return tuple(expressions)


@functools.lru_cache(maxsize=64)
def action_plan(a: AlgebraPresentation) -> ActionPlan:
    """Pick generators spanning ``J / J^2`` (J = non-idempotent span) and express the basis in them."""
    f = a.field
    nonidem = [b for b in range(a.dim) if not a.is_idempotent_index(b)]
    span_rows = [a.unit_vector(e) for e in a.idempotents]
    for b in nonidem:
        for b2 in nonidem:
            prod = a.mult[b][b2]
            if any(prod):
                span_rows.append(prod)
    gens = []
    for b in nonidem:
        m = Matrix(f, len(span_rows), a.dim, tuple(x for r in span_rows for x in r))
        red, piv = row_space_basis(m)
        if any(reduce_vector(f, red, piv, a.unit_vector(b))):
            gens.append(b)
            span_rows.append(a.unit_vector(b))
    expr = _word_closure(a, gens)
    if expr is None:
        gens = nonidem
        expr = _word_closure(a, gens)
    if expr is None:
        raise ValueError("could not express the algebra basis in terms of generators")
    return ActionPlan(tuple(gens), expr)


def word_matrix(a: AlgebraPresentation, gen_mats: Mapping[int, Matrix], word: tuple, start, dims: DimVector) -> Matrix:
    f = a.field
    m = Matrix.identity(f, dims[start])
    for g in word:
        m = gen_mats[g] @ m
    return m


def rep_from_generators(a: AlgebraPresentation, dims: DimVector, gen_mats: Mapping[int, Matrix]) -> RepPoint:
    """Extend generator matrices to a full (not yet validated) action."""
    plan = action_plan(a)
    f = a.field
    cache: dict = {}
    action = []
    for b, el in enumerate(a.basis):
        rows, cols = dims[el.target], dims[el.source]
        terms = []
        for c, word in plan.expressions[b]:
            key = (el.source, word)
            if key not in cache:
                cache[key] = word_matrix(a, gen_mats, word, el.source, dims)
            terms.append((c, cache[key]))
        action.append(linear_combination(f, terms, rows, cols))
    return RepPoint(a, dims, tuple(action))


# ---------------------------------------------------------------------------
# Checks


def validate_rep(r: RepPoint, max_witnesses: int = 20) -> ValidationReport:
    """Check ``x(e_i) = id`` and ``x(b.b') = x(b') @ x(b)`` for all composable basis pairs."""
    a, f, dims = r.algebra, r.field, r.dims
    rep = ValidationReport()
    if len(r.action) != a.dim:
        rep.add("shape", "one matrix per basis element required")
        return rep
    for b, el in enumerate(a.basis):
        if r.action[b].shape != (dims[el.target], dims[el.source]):
            rep.add("shape", el.label)
    if not rep.ok:
        return rep
    for vi, e in enumerate(a.idempotents):
        if r.action[e] != Matrix.identity(f, dims.entries[vi]):
            rep.add("idempotent", a.basis[e].label)
    n = 0
    for b in range(a.dim):
        for b2 in range(a.dim):
            if a.tgt(b) != a.src(b2):
                continue
            rows, cols = dims[a.tgt(b2)], dims[a.src(b)]
            if not rows or not cols:
                continue
            lhs = linear_combination(f, ((c, r.action[k]) for k, c in a.sparse_mult[b][b2]), rows, cols)
            if lhs != r.action[b2] @ r.action[b]:
                n += 1
                if n <= max_witnesses:
                    rep.add("module", (a.basis[b].label, a.basis[b2].label))
    return rep


def _span_rows(f: FieldSpec, vectors: list, n: int):
    m = Matrix(f, len(vectors), n, tuple(x for v in vectors for x in v))
    return row_space_basis(m)


def generated_subspace(fp: FramedRepPoint) -> list[Matrix]:
    """Per-vertex RREF basis (as rows) of the submodule generated by the image of p."""
    a, f, dims = fp.algebra, fp.rep.field, fp.dims
    labels = list(a.vertices)
    vidx = {v: k for k, v in enumerate(labels)}
    current = []
    for vi, p in enumerate(fp.framing):
        current.append(_span_rows(f, [p.column(s) for s in range(p.cols)], dims.entries[vi]))
    nonidem = [b for b in range(a.dim) if not a.is_idempotent_index(b)]
    for _ in range(dims.total + 1):
        vecs = [list(basis.iter_rows()) for basis, _ in current]
        for b in nonidem:
            i, j = vidx[a.src(b)], vidx[a.tgt(b)]
            x = fp.rep.action[b]
            for row in current[i][0].iter_rows():
                vecs[j].append((x @ Matrix(f, len(row), 1, tuple(row))).entries)
        new = [_span_rows(f, vs, dims.entries[k]) for k, vs in enumerate(vecs)]
        if all(n[1] == c[1] for n, c in zip(new, current)):
            break
        current = new
    return [basis for basis, _ in current]


def is_stable(fp: FramedRepPoint) -> bool:
    """True iff the image of the framing generates V as a module."""
    return all(s.rows == n for s, n in zip(generated_subspace(fp), fp.dims))


def gauge_act(g: GaugeElement, fp: FramedRepPoint) -> FramedRepPoint:
    """``(x, p) -> (g_tgt x g_src^-1, g p)``."""
    a = fp.algebra
    dims = fp.dims
    if tuple(m.rows for m in g.blocks) != dims.entries:
        raise ValueError("gauge element has the wrong shape")
    inv = [inverse(m) for m in g.blocks]
    vidx = {v: k for k, v in enumerate(a.vertices)}
    action = tuple(g.blocks[vidx[el.target]] @ fp.rep.action[b] @ inv[vidx[el.source]]
                   for b, el in enumerate(a.basis))
    framing = tuple(gi @ p for gi, p in zip(g.blocks, fp.framing))
    return FramedRepPoint(RepPoint(a, dims, action), framing)


def framing_extension(fp: FramedRepPoint) -> list[Matrix]:
    """The map ``A_D -> V`` sending ``(slot s at i, b)`` to ``x(b) p_i[:, s]``, per target vertex."""
    a, f = fp.algebra, fp.rep.field
    blocks = framed_basis_blocks(a, fp.d)
    vidx = {v: k for k, v in enumerate(a.vertices)}
    out = []
    for j, bl in enumerate(blocks):
        cols = []
        for (i, s), b in bl:
            p = fp.framing[vidx[i]]
            col = p.columns([s])
            cols.append(fp.rep.action[b] @ col)
        out.append(hstack(f, cols, rows=fp.dims.entries[j]))
    return out


def orbit_equal(fp: FramedRepPoint, fp2: FramedRepPoint) -> Optional[GaugeElement]:
    """The unique ``g`` with ``gauge_act(g, fp) == fp2``, or None.

    ``g`` is pinned down on the spanning vectors ``x(b) p(s)`` of V, so it is
    read off from the pivot columns of the generating map.
    """
    if fp.dims != fp2.dims or fp.d != fp2.d:
        raise ValueError("points have different dimension vectors")
    if not is_stable(fp) or not is_stable(fp2):
        raise ValueError("orbit_equal needs stable points")
    f = fp.rep.field
    phi, phi2 = framing_extension(fp), framing_extension(fp2)
    blocks = []
    for m, m2 in zip(phi, phi2):
        _, piv = rref(m)
        if len(piv) != m.rows:
            return None
        try:
            g = m2.columns(piv) @ inverse(m.columns(piv))
        except SingularMatrixError:
            return None
        if not is_invertible(g):
            return None
        blocks.append(g)
    g = GaugeElement(tuple(blocks))
    return g if gauge_act(g, fp) == fp2 else None


# ---------------------------------------------------------------------------
# Equation-level checks on quiver representations


def quiver_maps(r: RepPoint) -> dict:
    """``{edge label: (source, target, matrix)}`` for algebras built from a quiver."""
    a = r.algebra
    if a.quiver is None:
        raise ValueError("algebra carries no quiver")
    out = {}
    for e in a.quiver.edges:
        if e.label in a.arrows:
            out[e.label] = (e.source, e.target, r.action[a.arrows[e.label]])
        else:
            out[e.label] = (e.source, e.target, Matrix.zeros(r.field, r.dims[e.target], r.dims[e.source]))
    return out


def check_preprojective_relation(maps: Mapping, quiver: Quiver, dims: DimVector, field: FieldSpec) -> bool:
    """``sum_{src a=i} x_{a*} x_a - sum_{tgt a=i} x_a x_{a*} = 0`` at every vertex ``i``.

    ``quiver`` is the undoubled quiver and ``maps`` holds ``a`` and ``a*``.
    """
    def mat(label):
        m = maps[label]
        return m[2] if isinstance(m, tuple) else m

    for v in quiver.vertices:
        n = dims[v]
        acc = Matrix.zeros(field, n, n)
        for e in quiver.edges:
            xa, xs = mat(e.label), mat(e.label + "*")
            if e.source == v:
                acc = acc + xs @ xa
            if e.target == v:
                acc = acc - xa @ xs
        if not acc.is_zero():
            return False
    return True


def nilpotency_chain(maps: Iterable[tuple], dims: DimVector, field: FieldSpec, steps: int) -> list[DimVector]:
    """Dimension vectors of ``V^(0) = V``, ``V^(k+1) = sum_a V^(k) x_a`` for ``k < steps``."""
    maps = list(maps)
    vertices = dims.vertices
    vidx = {v: k for k, v in enumerate(vertices)}
    current = [Matrix.identity(field, n) for n in dims]
    out = [dims]
    for _ in range(steps):
        vecs = [[] for _ in vertices]
        for src, tgt, x in maps:
            for row in current[vidx[src]].iter_rows():
                vecs[vidx[tgt]].append((x @ Matrix(field, len(row), 1, tuple(row))).entries)
        current = [_span_rows(field, vs, n)[0] for vs, n in zip(vecs, dims)]
        out.append(DimVector(vertices, tuple(m.rows for m in current)))
    return out


def is_nilpotent(maps: Iterable[tuple], dims: DimVector, field: FieldSpec) -> bool:
    """``V^(N) = 0`` for ``N = dims.total``; ``maps`` yields ``(src, tgt, matrix)``."""
    chain = nilpotency_chain(maps, dims, field, dims.total)
    return chain[-1].total == 0


def rep_is_nilpotent(r: RepPoint) -> bool:
    a = r.algebra
    if a.quiver is not None:
        maps = list(quiver_maps(r).values())
    else:
        maps = [(a.src(b), a.tgt(b), r.action[b]) for b in range(a.dim) if not a.is_idempotent_index(b)]
    return is_nilpotent(maps, r.dims, r.field)


def rep_satisfies_preprojective(r: RepPoint) -> bool:
    a = r.algebra
    if a.base_quiver is None:
        raise ValueError("preprojective filter needs an algebra built from a double quiver")
    return check_preprojective_relation(quiver_maps(r), a.base_quiver, r.dims, r.field)


# ---------------------------------------------------------------------------
# Enumeration

FILTERS = {
    "stable": lambda fp: is_stable(fp),
    "preprojective": lambda fp: rep_satisfies_preprojective(fp.rep),
    "nilpotent": lambda fp: rep_is_nilpotent(fp.rep),
}


def _shapes(a: AlgebraPresentation, d: DimVector, v: DimVector):
    plan = action_plan(a)
    gen_shapes = [(v[a.tgt(g)], v[a.src(g)]) for g in plan.generators]
    p_shapes = [(vi, di) for vi, di in zip(v, d)]
    return plan, gen_shapes, p_shapes


def search_space_size(a: AlgebraPresentation, d: DimVector, v: DimVector) -> int:
    _, gs, ps = _shapes(a, d, v)
    n = sum(r * c for r, c in gs) + sum(r * c for r, c in ps)
    return a.field.order ** n


def _matrices(f: FieldSpec, shapes, values):
    out, pos = [], 0
    for r, c in shapes:
        out.append(Matrix(f, r, c, tuple(values[pos:pos + r * c])))
        pos += r * c
    return out


def _enumerate_block(args) -> list:
    a, d, v, filters, prefix = args
    f = a.field
    plan, gen_shapes, p_shapes = _shapes(a, d, v)
    n_x = sum(r * c for r, c in gen_shapes)
    n_p = sum(r * c for r, c in p_shapes)
    elems = f.elements()
    out = []
    checks = [FILTERS[name] for name in filters]
    for tail in itertools.product(elems, repeat=n_x - len(prefix)):
        xvals = prefix + tail
        mats = _matrices(f, gen_shapes, xvals)
        rep = rep_from_generators(a, v, dict(zip(plan.generators, mats)))
        if not validate_rep(rep, max_witnesses=1).ok:
            continue
        for pvals in itertools.product(elems, repeat=n_p):
            fp = FramedRepPoint(rep, tuple(_matrices(f, p_shapes, pvals)))
            if all(check(fp) for check in checks):
                out.append(fp)
    return out


def enumerate_framed_points(a: AlgebraPresentation, d: DimVector, v: DimVector,
                            field: Optional[FieldSpec] = None, filters: Sequence[str] = ("stable",),
                            budget: int = DEFAULT_BUDGET, threads: int = 1) -> Iterator[FramedRepPoint]:
    """Every ``(x, p)`` over a finite field passing ``validate_rep`` and ``filters``, in lexicographic order.

    Candidates are matrices on the generators of the algebra followed by the
    framing blocks; entries run through ``0..q-1`` row-major.
    """
    f = a.field
    if field is not None and field != f:
        raise ValueError(f"algebra is over {f}, not {field}")
    if not f.is_finite:
        raise ValueError("enumeration needs a finite field")
    unknown = set(filters) - set(FILTERS)
    if unknown:
        raise ValueError(f"unknown filters {sorted(unknown)}")
    size = search_space_size(a, d, v)
    if size > budget:
        raise BudgetExceeded(size, budget)
    _, gen_shapes, _ = _shapes(a, d, v)
    n_x = sum(r * c for r, c in gen_shapes)
    q = f.order
    depth = 0
    if threads > 1:
        while depth < n_x and q ** depth < 4 * threads:
            depth += 1
    blocks = [(a, d, v, tuple(filters), prefix) for prefix in itertools.product(f.elements(), repeat=depth)]
    for chunk in run_blocks(_enumerate_block, blocks, threads):
        for fp in chunk:
            if fp.algebra is not a:
                # results from worker processes carry a copy of the algebra
                fp = FramedRepPoint(RepPoint(a, fp.dims, fp.rep.action), fp.framing)
            yield fp


def random_gauge(v: DimVector, field: FieldSpec, rng: random.Random, height: int = 3) -> GaugeElement:
    blocks = []
    for n in v:
        while True:
            m = Matrix(field, n, n, tuple(field.random(rng, height) for _ in range(n * n)))
            if is_invertible(m):
                blocks.append(m)
                break
    return GaugeElement(tuple(blocks))


def random_framed_point(a: AlgebraPresentation, d: DimVector, v: DimVector, rng: random.Random,
                        height: int = 3, stable: bool = True, max_tries: int = 10000) -> FramedRepPoint:
    """Rejection-sample a valid (and by default stable) framed point."""
    f = a.field
    plan, gen_shapes, p_shapes = _shapes(a, d, v)
    for _ in range(max_tries):
        mats = [Matrix(f, r, c, tuple(f.random(rng, height) for _ in range(r * c))) for r, c in gen_shapes]
        rep = rep_from_generators(a, v, dict(zip(plan.generators, mats)))
        if not validate_rep(rep, max_witnesses=1).ok:
            continue
        p = tuple(Matrix(f, r, c, tuple(f.random(rng, height) for _ in range(r * c))) for r, c in p_shapes)
        fp = FramedRepPoint(rep, p)
        if not stable or is_stable(fp):
            return fp
    raise RuntimeError(f"no suitable point found in {max_tries} samples")
