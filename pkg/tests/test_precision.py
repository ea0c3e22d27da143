import math
from fractions import Fraction

import pytest
from flint import acb, arb
from hypothesis import given, settings
from hypothesis import strategies as st

from quasielliptic.errors import DivisionByZero, ParseError, PromotionUndefined
from quasielliptic.precision import (
    Ordering,
    TowerMagnitude,
    ball_from_json,
    ball_to_json,
    complex_ball,
    hull,
    parse_complex,
    real_ball,
    residual_ok,
    tower_compare,
    tower_mul_div,
    tower_promote,
    workprec,
)

LN3 = 1.0986122886681098

rationals = st.fractions(min_value=-1000, max_value=1000, max_denominator=1000)


@pytest.mark.parametrize(
    "text,expected",
    [
        ("1.5-2i", (Fraction(3, 2), Fraction(-2))),
        ("0.25i", (Fraction(0), Fraction(1, 4))),
        ("-i", (Fraction(0), Fraction(-1))),
        ("2", (Fraction(2), Fraction(0))),
        ("−0.5+1.25i", (Fraction(-1, 2), Fraction(5, 4))),
        ("2/3", (Fraction(2, 3), Fraction(0))),
        ("1e-3", (Fraction(1, 1000), Fraction(0))),
    ],
)
def test_parse_complex(text, expected):
    assert parse_complex(text) == expected


@pytest.mark.parametrize("text", ["", "abc", "1+", "i2", "1..2"])
def test_parse_complex_rejects(text):
    with pytest.raises(ParseError):
        parse_complex(text)


def test_exact_integer_has_zero_radius():
    assert real_ball(7).rad() == 0
    assert complex_ball((3, -2)).real.rad() == 0


def test_ball_json_roundtrip():
    with workprec(200):
        x = arb.pi() * acb(1, 1)
    js = ball_to_json(x, 128)
    assert js["prec"] == 128
    back = ball_from_json(js)
    with workprec(200):
        assert back.real.contains(arb.pi()) and back.imag.contains(arb.pi())


def test_hull_contains_endpoints():
    h = hull(arb(2), arb(3))
    assert h.contains(2) and h.contains(3) and h.contains(arb("2.5"))
    assert not h.contains(4)


def test_residual_tolerance():
    with workprec(160):
        good = arb(0, arb(2) ** -120)
        bad = arb(0, arb(2) ** -100)
    assert residual_ok(good, 128)
    assert not residual_ok(bad, 128)
    assert not residual_ok(arb(1), 128)


def _exact_ball(q: Fraction, prec: int) -> arb:
    with workprec(prec + 400):
        return arb(q.numerator) / q.denominator


@settings(max_examples=1000)
@given(rationals, rationals, st.sampled_from([53, 128, 300]))
def test_inclusion_exact_inside_ball(a, b, prec):
    with workprec(prec):
        x, y = real_ball(a), real_ball(b)
        results = [(a + b, x + y), (a - b, x - y), (a * b, x * y)]
        if b != 0:
            results.append((a / b, x / y))
    for exact, ball in results:
        assert ball.contains(_exact_ball(exact, prec))


@given(rationals.filter(lambda q: q != 0))
def test_precision_refinement(q):
    with workprec(64):
        lo = (real_ball(q).exp() * arb.pi()).rad()
    with workprec(128):
        hi = (real_ball(q).exp() * arb.pi()).rad()
    assert hi <= lo


# --- tower magnitudes -------------------------------------------------------

def test_promote_examples():
    eight = tower_promote(TowerMagnitude.exact(8), 1)
    assert eight.level == 1 and eight.payload.overlaps(arb(8).log())
    assert abs(float(eight.payload.mid()) - math.log(8)) < 1e-12
    zero = tower_promote(TowerMagnitude.exact(0), 1)
    assert zero.sign == 0
    big = TowerMagnitude.from_log(81 * arb(3).log())
    up = tower_promote(big, 2)
    assert abs(float(up.payload.mid()) - math.log(81 * LN3)) < 1e-12
    assert abs(float(up.payload.mid()) - 4.48849) < 1e-4


def test_promote_undefined_near_one():
    with pytest.raises(PromotionUndefined):
        tower_promote(TowerMagnitude.exact(2), 2)


def test_compare_examples():
    a = TowerMagnitude.from_log(-80 * arb(3).log())
    b = TowerMagnitude.from_log(arb(-81))
    assert tower_compare(a, b) == Ordering.LESS
    x = TowerMagnitude.exact(Fraction(7, 3))
    assert tower_compare(x, x) == Ordering.EQUAL
    l2 = TowerMagnitude.from_loglog(arb(10) ** 6)
    l1 = TowerMagnitude.from_log(arb(10) ** 6)
    assert tower_compare(l2, l1) == Ordering.GREATER


def test_compare_unknown_on_overlap():
    a = TowerMagnitude.from_log(arb(1, 0.5))
    b = TowerMagnitude.from_log(arb(1.2, 0.5))
    assert tower_compare(a, b) == Ordering.UNKNOWN


def test_mul_div_examples():
    q = TowerMagnitude.from_log(81 * arb(3).log())
    sq = tower_mul_div(q, q, "mul")
    assert sq.payload.overlaps(162 * arb(3).log())
    r = tower_mul_div(TowerMagnitude.exact(3), q, "div")
    assert r.payload.overlaps(-80 * arb(3).log())
    with pytest.raises(DivisionByZero):
        tower_mul_div(q, TowerMagnitude.exact(0), "div")


def test_level2_absorption_matches_representable_standin():
    # x = exp(exp(5)), y = exp(3): both representable, so compare directly
    x = TowerMagnitude.from_loglog(arb(5))
    y = TowerMagnitude.from_log(arb(3))
    prod = tower_mul_div(x, y, "mul")
    assert prod.level == 2
    assert prod.payload.overlaps((arb(5).exp() + 3).log())
    quo = tower_mul_div(x, y, "div")
    assert quo.payload.overlaps((arb(5).exp() - 3).log())


@given(st.integers(min_value=3, max_value=10**6), st.integers(min_value=3, max_value=10**6))
def test_tower_consistency_across_levels(m, n):
    a0, b0 = TowerMagnitude.exact(m), TowerMagnitude.exact(n)
    exact = tower_compare(a0, b0)
    for la in (0, 1, 2):
        for lb in (0, 1, 2):
            got = tower_compare(tower_promote(a0, la), tower_promote(b0, lb))
            if got != Ordering.UNKNOWN:
                assert got == exact or (exact == Ordering.EQUAL and m == n)


def test_json_roundtrip_tower():
    t = TowerMagnitude.from_loglog(arb(3).log(), inverted=True)
    back = TowerMagnitude.from_json(t.to_json(128))
    assert back.level == 2 and back.inverted and back.payload.overlaps(arb(3).log())
