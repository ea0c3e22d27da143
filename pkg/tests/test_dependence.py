from fractions import Fraction

import numpy as np
import pytest
from flint import acb, arb
from hypothesis import given, settings
from hypothesis import strategies as st

from quasielliptic import dependence as dep
from quasielliptic.errors import InvalidMultiplier, ZeroInput
from quasielliptic.lattice import preset
from quasielliptic.precision import tolerance, workprec
from quasielliptic.serre import make_serre_point
from quasielliptic.weierstrass import make_context


def test_rational_examples():
    v = dep.find_multiplicative_relation([2, 4], 2)
    assert (v.kind, v.relation, v.certainty) == (dep.DEPENDENT, (2, -1), dep.EXACT)
    v = dep.find_multiplicative_relation([2, 3], 3)
    assert v.kind == dep.NO_RELATION and v.bound == 3


def test_reciprocal_ball_pair():
    with workprec(160):
        w = acb(0.3, 1.7)
        v = dep.find_multiplicative_relation([w, 1 / w], 1)
    assert (v.kind, v.relation, v.certainty) == (dep.DEPENDENT, (1, 1), dep.HEURISTIC)
    assert v.residual is not None


def test_zero_rejected():
    with pytest.raises(ZeroInput):
        dep.find_multiplicative_relation([0, 2], 2)


def test_two_parameter_examples():
    v = dep.find_relation_two_params([(2, 3), (4, 9)], 2)
    assert (v.kind, v.relation) == (dep.DEPENDENT, (2, -1))
    assert dep.find_relation_two_params([(2, 3), (3, 2)], 3).kind == dep.NO_RELATION
    assert dep.find_relation_two_params([(2, 2)], 5).kind == dep.NO_RELATION


def test_sign_winding_relation():
    v = dep.find_multiplicative_relation([-1, Fraction(1, 2), 2], 2)
    assert v.relation == (0, 1, 1)
    v = dep.find_multiplicative_relation([-1, 5], 2)
    assert v.relation == (2, 0)


small = st.fractions(min_value=Fraction(1, 12), max_value=12, max_denominator=12)


@settings(max_examples=100)
@given(st.lists(st.tuples(small, st.booleans()), min_size=1, max_size=3), st.integers(1, 3))
def test_lll_matches_exhaustive(vals, L):
    values = [x if s else -x for x, s in vals]
    a = dep.find_multiplicative_relation(values, L, method="exhaustive")
    b = dep.find_multiplicative_relation(values, L, method="lll")
    assert a.kind == b.kind and a.relation == b.relation


def test_exact_verdicts_are_reverified():
    rng = np.random.default_rng(9)
    for _ in range(40):
        values = [Fraction(int(rng.integers(1, 13)), int(rng.integers(1, 13))) for _ in range(3)]
        v = dep.find_multiplicative_relation(values, 3)
        if v.dependent:
            prod = Fraction(1)
            for x, e in zip(values, v.relation):
                prod *= x ** e
            assert prod == 1 and v.certainty == dep.EXACT


def test_exact_verdict_stable_across_precision():
    values = [Fraction(4, 9), Fraction(2, 3), Fraction(5)]
    verdicts = {dep.find_multiplicative_relation(values, 3, prec=p).relation for p in (64, 128, 256)}
    assert verdicts == {(1, -2, 0)}


def test_lll_on_balls_finds_planted_relation():
    with workprec(200):
        a, b = acb(1.3, 0.4), acb(-0.7, 2.1)
        c = a**3 * b ** -2
        v = dep.find_multiplicative_relation([a, b, c], 3, prec=160, method="lll")
    assert v.relation == (3, -2, -1)


@pytest.fixture(scope="module")
def square():
    return make_context(preset("square", 256))


def test_condition_iv_proportional_t(square):
    lat = square.lattice
    with workprec(lat.work_prec):
        t1 = acb(0.37, 0.11)
        v = dep.check_condition_iv(lat, [t1, 2 * t1], [], 3)
    assert (v.kind, v.relation) == (dep.DEPENDENT, (0, 0, 2, -1))


def test_condition_iv_half_period(square):
    lat = square.lattice
    with workprec(lat.work_prec):
        sp = make_serre_point(square, lat.omega1 / 2)
    v = dep.check_condition_iv(lat, [], [sp], 3)
    assert v.kind == dep.DEPENDENT and v.relation == (0, 1, 2)
    assert v.residual.contains(0) and v.residual.rad() <= tolerance(lat.prec, dep.DEPENDENCE_GUARD)


def test_condition_iv_no_relation_for_unit_t(square):
    v = dep.check_condition_iv(square.lattice, [1], [], 10)
    assert v.kind == dep.NO_RELATION and v.bound == 10


def test_cm_condition(square):
    lat = square.lattice
    sp = make_serre_point(square, acb(0.21, 0.34))
    v = dep.check_cm_condition(lat, [], [sp], 2)
    assert v.extra["k"] == [1]
    with workprec(lat.work_prec):
        half = make_serre_point(square, lat.omega1 / 2)
    assert dep.check_cm_condition(lat, [], [half], 4).dependent
    base = dep.check_condition_iv(lat, [acb(0.5, 0.25)], [], 2)
    assert dep.check_cm_condition(lat, [acb(0.5, 0.25)], [], 2).kind == base.kind


def test_cm_condition_requires_multiplier():
    lat = preset("rectangular-2")
    ctx = make_context(lat)
    with pytest.raises(InvalidMultiplier):
        dep.check_cm_condition(lat, [], [make_serre_point(ctx, acb(0.2, 0.3))], 2)


def test_zeta_relation_half_period(square):
    lat = square.lattice
    with workprec(lat.work_prec):
        sp = make_serre_point(square, lat.omega1 / 2)
    rep = dep.check_zeta_relation([2], [sp], lat)
    assert rep.holds and rep.periodic and rep.lattice_point == (1, 0)


def test_zeta_relation_generic_point(square):
    sp = make_serre_point(square, acb(0.21, 0.34))
    assert not dep.check_zeta_relation([1], [sp], square.lattice).holds


def test_zeta_relation_complementary_pair(square):
    lat = square.lattice
    with workprec(lat.work_prec):
        u1 = acb(0.21, 0.34)
        sps = [make_serre_point(square, u1), make_serre_point(square, lat.omega1 - u1)]
    rep = dep.check_zeta_relation([1, 1], sps, lat)
    assert rep.lattice_point == (1, 0)
    # zeta(u) + zeta(w - u) = eta(w) follows from oddness and quasi-periodicity
    assert rep.holds and rep.periodic
