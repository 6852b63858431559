import random

import pytest

from conftest import dv
from quivermod.correspondence import (FreenessViolation, Instance, count_points_both_sides,
                                      faulty_quotient_to_rep, orbit_classes, quotient_points, quotient_to_rep,
                                      rational_spot_check, rep_to_quotient, stable_framed_points, verify_instance,
                                      verify_roundtrip)
from quivermod.fields import FieldSpec, Matrix
from quivermod.framed import (FramedRepPoint, gauge_act, is_stable, orbit_equal, random_framed_point,
                              random_gauge, rep_from_generators)
from quivermod.graded import AlgebraPresentation, BasisElement
from quivermod.grassmannian import GradedSubspace
from quivermod.quivers import Quiver, build_path_algebra_truncated, build_truncated_preprojective

V12 = [1, 2]

pytestmark = pytest.mark.filterwarnings("ignore:d = .* is not <= v")


def point(f, *rows):
    return Matrix.from_rows(f, [list(r) for r in rows])


def edgeless(f, d=2, v=1):
    return Instance(build_path_algebra_truncated(Quiver.of([1]), 1, f), dv([1], d), dv([1], v))


def a2_instance(f, a2, d, v, nilpotent=False, n=None):
    n = n or max(dv(V12, *v).total, 1)
    return Instance(build_truncated_preprojective(a2, n, f), dv(V12, *d), dv(V12, *v), nilpotent_only=nilpotent)


class TestInstance:
    def test_v_exceeds_module(self, F2, a2):
        with pytest.raises(ValueError, match="dim\\(A_D\\)"):
            a2_instance(F2, a2, (1, 0), (1, 2))

    def test_d_not_below_v_warns(self, F2):
        with pytest.warns(UserWarning):
            inst = edgeless(F2, 2, 1)
        assert inst.warnings

    def test_vertex_mismatch(self, F2, a2):
        alg = build_truncated_preprojective(a2, 2, F2)
        with pytest.raises(ValueError):
            Instance(alg, dv([1], 1), dv([1], 1))


class TestMaps:
    def test_vertex_algebra_kernel_is_ker_p(self, F3):
        inst = edgeless(F3)
        rep = rep_from_generators(inst.algebra, inst.v, {})
        fp = FramedRepPoint(rep, (point(F3, [1, 2]),))
        qp = rep_to_quotient(fp, inst.module)
        assert qp.kernel.blocks[0] == point(F3, [1, 1])

    def test_a2_full_quotient(self, F2, a2):
        inst = a2_instance(F2, a2, (1, 0), (1, 1))
        alg = inst.algebra
        rep = rep_from_generators(alg, inst.v, {alg.index("a"): point(F2, [1]), alg.index("a*"): point(F2, [0])})
        fp = FramedRepPoint(rep, (point(F2, [1]), Matrix.zeros(F2, 1, 0)))
        qp = rep_to_quotient(fp, inst.module)
        assert qp.kernel.dims.total == 0

    def test_unstable_rejected(self, F2, a2):
        inst = a2_instance(F2, a2, (1, 0), (1, 1))
        alg = inst.algebra
        rep = rep_from_generators(alg, inst.v, {alg.index("a"): point(F2, [0]), alg.index("a*"): point(F2, [0])})
        with pytest.raises(ValueError, match="unstable"):
            rep_to_quotient(FramedRepPoint(rep, (point(F2, [1]), Matrix.zeros(F2, 1, 0))), inst.module)

    def test_identity_framing(self, F3):
        inst = Instance(build_path_algebra_truncated(Quiver.of(V12), 1, F3), dv(V12, 2, 1), dv(V12, 2, 1))
        qp = quotient_points(inst)[0]
        fp = quotient_to_rep(qp)
        assert fp.framing == (Matrix.identity(F3, 2), Matrix.identity(F3, 1))

    def test_a2_single_point_rep(self, F3, a2):
        inst = a2_instance(F3, a2, (1, 0), (1, 0), n=2)
        (qp,) = quotient_points(inst)
        fp = quotient_to_rep(qp)
        assert fp.framing[0] == point(F3, [1])
        assert fp.rep.x("a").shape == (0, 1) and fp.rep.x("a*").shape == (1, 0)
        assert is_stable(fp)

    @pytest.mark.parametrize("p", [2, 3])
    def test_gauge_invariant_kernel(self, p, a2):
        f = FieldSpec.prime(p)
        inst = a2_instance(f, a2, (1, 1), (1, 1))
        rng = random.Random(p)
        for _ in range(10):
            fp = random_framed_point(inst.algebra, inst.d, inst.v, rng)
            assert rep_to_quotient(fp, inst.module) == rep_to_quotient(
                gauge_act(random_gauge(inst.v, f, rng), fp), inst.module)

    def test_quotient_to_rep_stable(self, F3):
        q = Quiver.of([1, 2, 3], [("a", 1, 2), ("b", 2, 3)])
        inst = Instance(build_truncated_preprojective(q, 3, F3), dv([1, 2, 3], 1, 0, 1), dv([1, 2, 3], 1, 1, 1))
        qps = quotient_points(inst)
        assert qps and all(is_stable(quotient_to_rep(qp)) for qp in qps)


class TestCounts:
    @pytest.mark.parametrize("q", [2, 3, 5])
    def test_edgeless(self, q):
        f = FieldSpec.prime(q)
        with pytest.warns(UserWarning):
            inst = edgeless(f)
        r = count_points_both_sides(inst)
        assert r.stable_points == q * q - 1 and r.gauge_group_order == q - 1
        assert r.count_gr == r.count_rep_orbits == r.count_rep_free == q + 1

    @pytest.mark.parametrize("q", [2, 3])
    def test_a2_d11_v11(self, q, a2):
        # quotients of A_D by hand: x_a in {0, nonzero} times framings, giving 2q + 1 classes
        f = FieldSpec.prime(q)
        r = count_points_both_sides(a2_instance(f, a2, (1, 1), (1, 1)))
        assert r.count_gr == r.count_rep_orbits == r.count_rep_free == 2 * q + 1
        assert r.stable_points == (q - 1) ** 2 * (2 * q + 1)

    def test_unbucketed_agrees(self, F3, a2):
        inst = a2_instance(F3, a2, (1, 1), (1, 1))
        framed = stable_framed_points(inst)
        assert len(orbit_classes(framed, inst.module, bucketed=False)) == len(orbit_classes(framed, inst.module))

    def test_freeness_violation(self, F3, a2):
        inst = a2_instance(F3, a2, (1, 1), (1, 1))
        framed = stable_framed_points(inst)
        with pytest.raises(FreenessViolation):
            count_points_both_sides(inst, framed=framed[:-1])

    def test_rationals_rejected(self, QQ, a2):
        with pytest.raises(ValueError):
            count_points_both_sides(a2_instance(QQ, a2, (1, 0), (1, 1)))

    def test_loop_algebra(self, F2, F3):
        # k[x]/x^2 on one vertex, d = 1: quotients of dimension 1 and 2 are unique
        for f in (F2, F3):
            alg = AlgebraPresentation.build([1], [BasisElement("x", 1, 1, 1)], {}, f)
            for v in (0, 1, 2):
                r = verify_instance(Instance(alg, dv([1], 1), dv([1], v)))
                assert r.count_gr == r.count_rep_orbits == r.count_rep_free == 1
                assert r.bijection_ok


class TestRoundTrip:
    @pytest.mark.parametrize("d,v", [((1, 0), (1, 0)), ((1, 0), (1, 1)), ((1, 1), (1, 1)), ((1, 1), (0, 0))])
    def test_zero_failures(self, F3, a2, d, v):
        r = verify_instance(a2_instance(F3, a2, d, v))
        assert r.round_trip_failures == [] and r.counts_agree and r.bijection_ok

    def test_full_quotient_single_point(self, F2, a2):
        inst = a2_instance(F2, a2, (1, 0), (1, 1))
        r = verify_instance(inst)
        assert r.count_gr == 1 and r.bijection_ok

    def test_fault_injection(self, F2, a2):
        inst = a2_instance(F2, a2, (1, 1), (1, 1))
        failures = verify_roundtrip(inst, to_rep=faulty_quotient_to_rep)
        assert failures and all("kind" in f for f in failures)
        assert not verify_instance(inst, to_rep=faulty_quotient_to_rep).bijection_ok

    def test_rational_spot_check(self, QQ, a2):
        inst = a2_instance(QQ, a2, (1, 1), (1, 1))
        assert rational_spot_check(inst, samples=20, seed=3) == []
        assert rational_spot_check(inst, samples=5, seed=3, to_rep=faulty_quotient_to_rep)

    def test_distinct_orbits_distinct_kernels(self, F3, a2):
        inst = a2_instance(F3, a2, (1, 1), (1, 1))
        framed = stable_framed_points(inst)
        for cls_a in orbit_classes(framed, inst.module):
            for cls_b in orbit_classes(framed, inst.module):
                same = rep_to_quotient(cls_a[0], inst.module) == rep_to_quotient(cls_b[0], inst.module)
                assert same == (orbit_equal(cls_a[0], cls_b[0]) is not None)


def test_report_json_deterministic(F3, a2):
    inst = a2_instance(F3, a2, (1, 1), (1, 1))
    one = verify_instance(inst).to_json()
    two = verify_instance(inst, threads=2).to_json()
    assert one == two and '"timings"' not in one
    assert '"timings"' in verify_instance(inst).to_json(include_timings=True)
