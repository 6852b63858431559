import random
from itertools import product

import pytest
from hypothesis import given, settings, strategies as st

from conftest import dv
from quivermod.fields import FieldSpec, Matrix
from quivermod.framed import (FramedRepPoint, GaugeElement, RepPoint, check_preprojective_relation,
                              enumerate_framed_points, gauge_act, gauge_group_order, is_nilpotent, is_stable,
                              nilpotency_chain, orbit_equal, random_framed_point, random_gauge, rep_from_generators,
                              action_plan, validate_rep)
from quivermod.graded import AlgebraPresentation, BasisElement
from quivermod.parallel import BudgetExceeded
from quivermod.quivers import Quiver, build_path_algebra_truncated, build_truncated_preprojective


def m(f, *rows):
    return Matrix.from_rows(f, [list(r) for r in rows])


def a2_point(f, a2, xa, xs, p1, n=2, p2=None):
    """A_2 truncated preprojective point with v=(1,1), d=(1,0) unless p2 is given."""
    alg = build_truncated_preprojective(a2, n, f)
    rep = rep_from_generators(alg, dv([1, 2], 1, 1), {alg.index("a"): m(f, [xa]), alg.index("a*"): m(f, [xs])})
    p2m = Matrix.zeros(f, 1, 0) if p2 is None else m(f, [p2])
    return FramedRepPoint(rep, (m(f, [p1]), p2m))


class TestValidateRep:
    def test_zero_action_truncation_one(self, F3, a2):
        alg = build_path_algebra_truncated(a2, 1, F3)
        r = rep_from_generators(alg, dv([1, 2], 2, 1), {})
        assert validate_rep(r).ok

    def test_a2_double_n2(self, F2, a2):
        fp = a2_point(F2, a2, 1, 0, 1)
        assert validate_rep(fp.rep).ok

    def test_broken_idempotent(self, F3, a2):
        fp = a2_point(F3, a2, 1, 0, 1)
        action = list(fp.rep.action)
        action[0] = m(F3, [2])
        rep = validate_rep(RepPoint(fp.algebra, fp.dims, tuple(action)))
        assert not rep.ok and ("idempotent", "e1") in rep.failures

    def test_relation_violated_in_quotient(self, F2, a2):
        # in Pi_0 truncated at 3, a.a* = 0, so x_a = x_a* = [1] is not a module
        fp = a2_point(F2, a2, 1, 1, 1, n=3)
        assert "module" in validate_rep(fp.rep).axioms_failed()

    def test_shape_mismatch(self, F2, a2):
        fp = a2_point(F2, a2, 1, 0, 1)
        action = list(fp.rep.action)
        action[2] = Matrix.zeros(F2, 2, 1)
        assert validate_rep(RepPoint(fp.algebra, fp.dims, tuple(action))).axioms_failed() == {"shape"}

    def test_non_basic_matrix_algebra(self, QQ):
        # M_2 as a quiver-free algebra on two vertices: E12.E21 = e1, E21.E12 = e2
        a = AlgebraPresentation.build([1, 2], [BasisElement("E12", 1, 2), BasisElement("E21", 2, 1)],
                                      {("E12", "E21"): {"e1": 1}, ("E21", "E12"): {"e2": 1}}, QQ)
        plan = action_plan(a)
        assert len(plan.generators) == 2
        good = rep_from_generators(a, dv([1, 2], 1, 1), {a.index("E12"): m(QQ, [2]), a.index("E21"): m(QQ, ["1/2"])})
        assert validate_rep(good).ok
        unit = rep_from_generators(a, dv([1, 2], 1, 1), {a.index("E12"): m(QQ, [1]), a.index("E21"): m(QQ, [1])})
        assert validate_rep(unit).ok
        worse = rep_from_generators(a, dv([1, 2], 1, 1), {a.index("E12"): m(QQ, [1]), a.index("E21"): m(QQ, [3])})
        assert not validate_rep(worse).ok


class TestStability:
    def test_surjective_framing(self, F3):
        alg = build_path_algebra_truncated(Quiver.of([1]), 1, F3)
        rep = rep_from_generators(alg, dv([1], 2), {})
        assert is_stable(FramedRepPoint(rep, (m(F3, [1, 0, 2], [0, 1, 1]),)))

    def test_zero_framing(self, F3, a2):
        fp = a2_point(F3, a2, 1, 0, 0)
        assert not is_stable(fp)

    def test_a2_generation(self, F2, a2):
        assert is_stable(a2_point(F2, a2, 1, 0, 1))
        assert not is_stable(a2_point(F2, a2, 0, 0, 1))

    @settings(max_examples=30, deadline=None)
    @given(st.integers(0, 10_000))
    def test_gauge_invariant(self, seed):
        f, rng = FieldSpec.prime(3), random.Random(seed)
        alg = build_truncated_preprojective(Quiver.of([1, 2], [("a", 1, 2)]), 3, f)
        fp = random_framed_point(alg, dv([1, 2], 1, 1), dv([1, 2], 1, 1), rng, stable=False)
        g = random_gauge(fp.dims, f, rng)
        assert is_stable(gauge_act(g, fp)) == is_stable(fp)


class TestGauge:
    def test_identity(self, F3, a2):
        fp = a2_point(F3, a2, 1, 0, 2)
        assert gauge_act(GaugeElement.identity(F3, fp.dims), fp) == fp

    def test_scalar(self, F3, a2):
        fp = a2_point(F3, a2, 1, 0, 1)
        g = GaugeElement((m(F3, [2]), m(F3, [2])))
        out = gauge_act(g, fp)
        assert out.rep == fp.rep
        assert out.framing[0] == m(F3, [2])

    def test_shape_mismatch(self, F3, a2):
        fp = a2_point(F3, a2, 1, 0, 1)
        with pytest.raises(ValueError):
            gauge_act(GaugeElement((m(F3, [1]),)), fp)

    def test_rejects_singular(self, F3):
        with pytest.raises(ValueError):
            GaugeElement((m(F3, [0]),))

    def test_group_order(self):
        assert gauge_group_order(dv([1], 1), 2) == 1
        assert gauge_group_order(dv([1], 2), 2) == 6
        assert gauge_group_order(dv([1, 2], 1, 2), 3) == 2 * 48

    def test_result_is_module(self, F3):
        rng = random.Random(5)
        q = Quiver.of([1, 2, 3], [("a", 1, 2), ("b", 2, 3)])
        alg = build_truncated_preprojective(q, 4, F3)
        for _ in range(10):
            fp = random_framed_point(alg, dv([1, 2, 3], 1, 0, 1), dv([1, 2, 3], 1, 1, 1), rng)
            assert validate_rep(gauge_act(random_gauge(fp.dims, F3, rng), fp).rep).ok


class TestOrbitEqual:
    def test_self_is_identity(self, F3, a2):
        fp = a2_point(F3, a2, 1, 0, 2)
        assert orbit_equal(fp, fp) == GaugeElement.identity(F3, fp.dims)

    def test_recovers_gauge(self, QQ):
        rng = random.Random(1)
        alg = build_truncated_preprojective(Quiver.of([1, 2], [("a", 1, 2)]), 3, QQ)
        for _ in range(15):
            fp = random_framed_point(alg, dv([1, 2], 1, 1), dv([1, 2], 1, 1), rng)
            g = random_gauge(fp.dims, QQ, rng)
            assert orbit_equal(fp, gauge_act(g, fp)) == g

    def test_equivalence_relation(self, F3):
        rng = random.Random(2)
        alg = build_truncated_preprojective(Quiver.of([1, 2], [("a", 1, 2)]), 2, F3)
        fp = random_framed_point(alg, dv([1, 2], 1, 1), dv([1, 2], 1, 1), rng)
        g, h = random_gauge(fp.dims, F3, rng), random_gauge(fp.dims, F3, rng)
        fp2 = gauge_act(g, fp)
        fp3 = gauge_act(h, fp2)
        assert orbit_equal(fp2, fp) == g.inverse()
        assert orbit_equal(fp, fp3) == h.compose(g)

    def test_distinct_orbits(self, F3, a2):
        # x_a = 0 vs x_a = 1 with v = (1,1), d = (1,1): framings at both vertices, not gauge related
        alg = build_truncated_preprojective(a2, 2, F3)
        p = (m(F3, [1]), m(F3, [1]))
        r0 = rep_from_generators(alg, dv([1, 2], 1, 1), {alg.index("a"): m(F3, [0]), alg.index("a*"): m(F3, [0])})
        r1 = rep_from_generators(alg, dv([1, 2], 1, 1), {alg.index("a"): m(F3, [1]), alg.index("a*"): m(F3, [0])})
        assert orbit_equal(FramedRepPoint(r0, p), FramedRepPoint(r1, p)) is None

    def test_unstable_rejected(self, F3, a2):
        with pytest.raises(ValueError):
            orbit_equal(a2_point(F3, a2, 0, 0, 1), a2_point(F3, a2, 0, 0, 1))


class TestRelations:
    def maps(self, f, xa, xs):
        return {"a": (1, 2, m(f, [xa])), "a*": (2, 1, m(f, [xs]))}

    def test_zero(self, F3, a2):
        assert check_preprojective_relation(self.maps(F3, 0, 0), a2, dv([1, 2], 1, 1), F3)

    def test_a_only(self, F3, a2):
        assert check_preprojective_relation(self.maps(F3, 1, 0), a2, dv([1, 2], 1, 1), F3)

    def test_both(self, F3, a2):
        assert not check_preprojective_relation(self.maps(F3, 1, 1), a2, dv([1, 2], 1, 1), F3)

    def test_nilpotent_zero(self, F3):
        assert is_nilpotent(self.maps(F3, 0, 0).values(), dv([1, 2], 1, 1), F3)

    def test_cycle_not_nilpotent(self, F3):
        assert not is_nilpotent(self.maps(F3, 1, 1).values(), dv([1, 2], 1, 1), F3)

    def test_chain(self, F3):
        chain = nilpotency_chain(self.maps(F3, 1, 0).values(), dv([1, 2], 1, 1), F3, 2)
        assert [c.entries for c in chain] == [(1, 1), (0, 1), (0, 0)]
        assert is_nilpotent(self.maps(F3, 1, 0).values(), dv([1, 2], 1, 1), F3)


class TestEnumerate:
    def test_edgeless(self, F2):
        alg = build_path_algebra_truncated(Quiver.of([1]), 1, F2)
        pts = list(enumerate_framed_points(alg, dv([1], 2), dv([1], 1)))
        assert len(pts) == 3

    def test_v_zero(self, F3, a2):
        alg = build_truncated_preprojective(a2, 1, F3)
        pts = list(enumerate_framed_points(alg, dv([1, 2], 1, 1), dv([1, 2], 0, 0)))
        assert len(pts) == 1

    def test_filter_order(self, F2, a2):
        alg = build_path_algebra_truncated(Quiver.of([1, 2], [("a", 1, 2), ("b", 2, 1)]), 3, F2)
        d, v = dv([1, 2], 1, 0), dv([1, 2], 1, 1)
        one = list(enumerate_framed_points(alg, d, v, filters=("stable", "nilpotent")))
        two = list(enumerate_framed_points(alg, d, v, filters=("nilpotent", "stable")))
        assert one == two and one

    def test_field_mismatch(self, F2, F3, a2):
        alg = build_truncated_preprojective(a2, 2, F2)
        with pytest.raises(ValueError):
            list(enumerate_framed_points(alg, dv([1, 2], 1, 0), dv([1, 2], 1, 1), field=F3))

    def test_budget(self, F3, a2):
        alg = build_truncated_preprojective(a2, 3, F3)
        with pytest.raises(BudgetExceeded) as exc:
            list(enumerate_framed_points(alg, dv([1, 2], 1, 1), dv([1, 2], 1, 1), budget=10))
        assert exc.value.size == 3 ** 4

    def test_threads_same_order(self, F2, a2):
        alg = build_truncated_preprojective(a2, 3, F2)
        d, v = dv([1, 2], 1, 1), dv([1, 2], 1, 1)
        # worker processes return copies of the algebra, so compare by content
        par = [fp.describe() for fp in enumerate_framed_points(alg, d, v, threads=2)]
        assert par == [fp.describe() for fp in enumerate_framed_points(alg, d, v)]

    @pytest.mark.parametrize("n", [2, 3])
    def test_relation_and_nilpotency_match_module_check(self, F2, a2, n):
        # modules over Pi_0 truncated at n = dim V are exactly the nilpotent reps satisfying theta
        pre = build_truncated_preprojective(a2, n, F2)
        v = dv([1, 2], 1, 1) if n == 2 else dv([1, 2], 2, 1)
        shapes = {"a": (v[2], v[1]), "a*": (v[1], v[2])}
        elems = F2.elements()
        count_eq = 0
        for xa_vals in product(elems, repeat=v[1] * v[2]):
            for xs_vals in product(elems, repeat=v[1] * v[2]):
                xa = Matrix(F2, *shapes["a"], xa_vals)
                xs = Matrix(F2, *shapes["a*"], xs_vals)
                maps = {"a": (1, 2, xa), "a*": (2, 1, xs)}
                eq = check_preprojective_relation(maps, a2, v, F2) and is_nilpotent(maps.values(), v, F2)
                rep = rep_from_generators(pre, v, {pre.index("a"): xa, pre.index("a*"): xs})
                assert eq == validate_rep(rep).ok
                count_eq += eq
        assert count_eq > 0
