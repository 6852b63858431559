"""Field-point version of the isomorphism between framed reps and quotient modules.

``rep_to_quotient`` extends the framing ``p: D -> V`` to ``A_D -> V`` and
keeps its kernel; ``quotient_to_rep`` keeps the induced module structure on
the quotient and composes ``D -> A_D -> Q``.  Over a finite field both sides
are enumerated and compared point by point.
"""
from __future__ import annotations

import json
import random
import time
import warnings
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from functools import cached_property
from typing import Callable, Optional, Sequence

from .fields import FieldSpec, Matrix, kernel_basis, rank, row_space_basis
from .framed import (DEFAULT_BUDGET, FramedRepPoint, enumerate_framed_points, framing_extension,
                     gauge_act, gauge_group_order, is_stable, orbit_equal, random_framed_point,
                     random_gauge, rep_is_nilpotent)
from .graded import (AlgebraPresentation, DimVector, FramedModule, build_framed_module, dim_vector_le,
                     framed_module_dims)
from .grassmannian import GradedSubspace, QuotientPoint, enumerate_quotient_points, induced_quotient_rep


class FreenessViolation(RuntimeError):
    """Stable point count is not a multiple of the gauge group order."""


@dataclass
class Instance:
    algebra: AlgebraPresentation
    d: DimVector
    v: DimVector
    nilpotent_only: bool = False
    name: str = ""
    warnings: list = dc_field(default_factory=list)

    def __post_init__(self):
        vs = self.algebra.vertices
        if self.d.vertices != vs or self.v.vertices != vs:
            raise ValueError("d and v must be over the algebra's vertex set")
        top = framed_module_dims(self.algebra, self.d)
        if not dim_vector_le(self.v, top):
            raise ValueError(f"v = {self.v} is not <= dim(A_D) = {top}; no surjection A_D -> V exists")
        if not dim_vector_le(self.d, self.v):
            msg = f"d = {self.d} is not <= v = {self.v}"
            self.warnings.append(msg)
            warnings.warn(msg, stacklevel=3)

    @property
    def field(self) -> FieldSpec:
        return self.algebra.field

    @cached_property
    def module(self) -> FramedModule:
        return build_framed_module(self.algebra, self.d)

    def summary(self) -> dict:
        a = self.algebra
        return {
            "name": self.name,
            "vertices": [str(x) for x in a.vertices],
            "algebra_dim": a.dim,
            "algebra_basis": [b.label for b in a.basis],
            "d": list(self.d.entries),
            "v": list(self.v.entries),
            "dim_A_D": list(framed_module_dims(a, self.d).entries),
            "field": str(self.field),
            "nilpotent_only": self.nilpotent_only,
            "warnings": list(self.warnings),
        }


def _jsonable(x):
    if isinstance(x, Fraction):
        return str(x) if x.denominator != 1 else x.numerator
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    return x


@dataclass
class VerificationReport:
    instance: Instance
    count_gr: Optional[int] = None
    count_rep_orbits: Optional[int] = None
    count_rep_free: Optional[int] = None
    stable_points: Optional[int] = None
    gauge_group_order: Optional[int] = None
    round_trip_failures: list = dc_field(default_factory=list)
    round_trip_checked: bool = False
    spot_checks: Optional[int] = None
    timings: dict = dc_field(default_factory=dict)

    @property
    def counts_agree(self) -> bool:
        counts = {self.count_gr, self.count_rep_orbits, self.count_rep_free}
        return None not in counts and len(counts) == 1

    @property
    def bijection_ok(self) -> bool:
        if self.round_trip_failures:
            return False
        if self.count_gr is None:
            return self.spot_checks is not None
        return self.counts_agree

    def to_dict(self, include_timings: bool = False) -> dict:
        out = {
            "instance": self.instance.summary(),
            "count_gr": self.count_gr,
            "count_rep_orbits": self.count_rep_orbits,
            "count_rep_free": self.count_rep_free,
            "stable_points": self.stable_points,
            "gauge_group_order": self.gauge_group_order,
            "counts_agree": self.counts_agree,
            "round_trip_checked": self.round_trip_checked,
            "round_trip_failures": _jsonable(self.round_trip_failures),
            "spot_checks": self.spot_checks,
            "bijection_ok": self.bijection_ok,
        }
        if include_timings:
            out["timings"] = {k: round(v, 6) for k, v in self.timings.items()}
        return out

    def to_json(self, include_timings: bool = False) -> str:
        return json.dumps(self.to_dict(include_timings), indent=2, sort_keys=True) + "\n"


# ---------------------------------------------------------------------------
# The two maps


def rep_to_quotient(fp: FramedRepPoint, m: FramedModule) -> QuotientPoint:
    """Kernel of the extension ``A_D -> V`` of the framing."""
    if m.algebra is not fp.algebra or m.d != fp.d:
        raise ValueError("framed module does not match the point")
    phis = framing_extension(fp)
    blocks = []
    for phi, n in zip(phis, fp.dims):
        if rank(phi) != n:
            raise ValueError("framing does not generate V (point is unstable)")
        blocks.append(row_space_basis(kernel_basis(phi))[0])
    return QuotientPoint(m, GradedSubspace(m.dims, tuple(blocks)))


def quotient_to_rep(qp: QuotientPoint) -> FramedRepPoint:
    """Induced module structure on the quotient with framing ``D -> A_D -> Q``."""
    rep, proj = induced_quotient_rep(qp)
    framing = tuple(pr @ inc for pr, inc in zip(proj, qp.module.inclusion))
    return FramedRepPoint(rep, framing)


def faulty_quotient_to_rep(qp: QuotientPoint) -> FramedRepPoint:
    """Test hook: ``quotient_to_rep`` with the framing dropped."""
    fp = quotient_to_rep(qp)
    return FramedRepPoint(fp.rep, tuple(Matrix.zeros(p.field, p.rows, p.cols) for p in fp.framing))


# ---------------------------------------------------------------------------
# Enumeration of both sides


def framed_filters(inst: Instance) -> tuple[str, ...]:
    return ("stable", "nilpotent") if inst.nilpotent_only else ("stable",)


def stable_framed_points(inst: Instance, budget: int = DEFAULT_BUDGET, threads: int = 1) -> list[FramedRepPoint]:
    return list(enumerate_framed_points(inst.algebra, inst.d, inst.v, filters=framed_filters(inst),
                                        budget=budget, threads=threads))


def quotient_points(inst: Instance, budget: int = DEFAULT_BUDGET, threads: int = 1) -> list[QuotientPoint]:
    return list(enumerate_quotient_points(inst.module, inst.v, nilpotent_only=inst.nilpotent_only,
                                          budget=budget, threads=threads))


def orbit_classes(points: Sequence[FramedRepPoint], module: Optional[FramedModule] = None,
                  bucketed: bool = True) -> list[list[FramedRepPoint]]:
    """Group stable points into gauge orbits using :func:`orbit_equal`.

    With ``bucketed`` the candidates are first sorted by their kernel, which
    is constant on orbits; each point is then compared by ``orbit_equal``
    only to class representatives in its bucket.
    """
    classes: list[list[FramedRepPoint]] = []
    buckets: dict = {}
    for fp in points:
        key = rep_to_quotient(fp, module).kernel.key if bucketed else None
        reps = buckets.setdefault(key, [])
        for cls in reps:
            if orbit_equal(cls[0], fp) is not None:
                cls.append(fp)
                break
        else:
            cls = [fp]
            reps.append(cls)
            classes.append(cls)
    return classes


def count_points_both_sides(inst: Instance, budget: int = DEFAULT_BUDGET, threads: int = 1,
                            framed: Optional[list] = None, quotients: Optional[list] = None,
                            bucketed: bool = True) -> VerificationReport:
    """Grassmannian count and two independent orbit counts on the framed side."""
    if not inst.field.is_finite:
        raise ValueError("point counts need a finite field")
    report = VerificationReport(inst)
    t0 = time.perf_counter()
    if quotients is None:
        quotients = quotient_points(inst, budget, threads)
    report.count_gr = len(quotients)
    t1 = time.perf_counter()
    if framed is None:
        framed = stable_framed_points(inst, budget, threads)
    report.stable_points = len(framed)
    t2 = time.perf_counter()
    order = gauge_group_order(inst.v, inst.field.order)
    report.gauge_group_order = order
    if len(framed) % order:
        raise FreenessViolation(f"{len(framed)} stable points is not a multiple of |G_v| = {order}")
    report.count_rep_free = len(framed) // order
    report.count_rep_orbits = len(orbit_classes(framed, inst.module, bucketed=bucketed))
    t3 = time.perf_counter()
    report.timings.update(enumerate_gr=t1 - t0, enumerate_rep=t2 - t1, orbits=t3 - t2)
    return report


def verify_roundtrip(inst: Instance, budget: int = DEFAULT_BUDGET, threads: int = 1,
                     framed: Optional[list] = None, quotients: Optional[list] = None,
                     to_quotient: Callable = rep_to_quotient,
                     to_rep: Callable = quotient_to_rep) -> list[dict]:
    """Round-trip every enumerated point on both sides; returns failure witnesses.

    ``to_quotient``/``to_rep`` can be replaced to exercise the failure path.
    """
    m = inst.module
    if quotients is None:
        quotients = quotient_points(inst, budget, threads)
    if framed is None:
        framed = stable_framed_points(inst, budget, threads)
    failures = []
    for qp in quotients:
        try:
            fp = to_rep(qp)
            if not is_stable(fp):
                failures.append({"kind": "quotient_to_rep unstable", "quotient": qp.describe(), "rep": fp.describe()})
                continue
            if inst.nilpotent_only and not rep_is_nilpotent(fp.rep):
                failures.append({"kind": "nilpotency not preserved", "quotient": qp.describe(), "rep": fp.describe()})
            back = to_quotient(fp, m)
            if back != qp:
                failures.append({"kind": "quotient round trip", "quotient": qp.describe(), "back": back.describe()})
        except ValueError as exc:
            failures.append({"kind": "quotient round trip error", "quotient": qp.describe(), "error": str(exc)})
    for fp in framed:
        try:
            qp = to_quotient(fp, m)
            fp2 = to_rep(qp)
            if not is_stable(fp2) or orbit_equal(fp2, fp) is None:
                failures.append({"kind": "rep round trip", "rep": fp.describe(), "back": fp2.describe()})
        except ValueError as exc:
            failures.append({"kind": "rep round trip error", "rep": fp.describe(), "error": str(exc)})
    return failures


def verify_instance(inst: Instance, budget: int = DEFAULT_BUDGET, threads: int = 1,
                    to_quotient: Callable = rep_to_quotient, to_rep: Callable = quotient_to_rep) -> VerificationReport:
    """Counts on both sides plus exhaustive round trips."""
    t0 = time.perf_counter()
    quotients = quotient_points(inst, budget, threads)
    framed = stable_framed_points(inst, budget, threads)
    t1 = time.perf_counter()
    report = count_points_both_sides(inst, budget, threads, framed=framed, quotients=quotients)
    report.round_trip_failures = verify_roundtrip(inst, framed=framed, quotients=quotients,
                                                  to_quotient=to_quotient, to_rep=to_rep)
    report.round_trip_checked = True
    report.timings["enumerate"] = t1 - t0
    report.timings["total"] = time.perf_counter() - t0
    return report


def rational_spot_check(inst: Instance, samples: int = 100, seed: int = 0, height: int = 3,
                        to_quotient: Callable = rep_to_quotient, to_rep: Callable = quotient_to_rep) -> list[dict]:
    """Round-trip random stable points (any field) and random gauge translates of them."""
    rng = random.Random(seed)
    m = inst.module
    failures = []
    for t in range(samples):
        fp = random_framed_point(inst.algebra, inst.d, inst.v, rng, height)
        try:
            qp = to_quotient(fp, m)
            fp2 = to_rep(qp)
            g = orbit_equal(fp2, fp) if is_stable(fp2) else None
            moved = gauge_act(random_gauge(inst.v, inst.field, rng, height), fp)
            if g is None:
                failures.append({"kind": "not in the same orbit", "sample": t, "rep": fp.describe()})
            elif to_quotient(fp2, m) != qp:
                failures.append({"kind": "kernel changed", "sample": t, "rep": fp.describe()})
            elif to_quotient(moved, m) != qp:
                failures.append({"kind": "kernel not gauge invariant", "sample": t, "rep": fp.describe()})
        except ValueError as exc:
            failures.append({"kind": "error", "sample": t, "rep": fp.describe(), "error": str(exc)})
    return failures
