from fractions import Fraction

import numpy as np
import pytest
from flint import acb, arb
from hypothesis import given
from hypothesis import strategies as st

from quasielliptic import vandermonde as vdm
from quasielliptic.errors import InvalidInput, NotDistinct, ParseError
from quasielliptic.precision import workprec
from quasielliptic.suites import random_complex_system, random_monic_sequence, random_rational_system

W, V = acb(0.7, 0.2), acb(-0.4, 1.1)


def test_superfactorials():
    assert [vdm.superfactorial_k(t) for t in range(8)] == [1, 1, 1, 2, 12, 288, 34560, 24883200]
    assert vdm.k_multi(2, 3) == 2


def _same(rows, expected):
    for r, e in zip(rows, expected):
        for x, y in zip(r, e):
            assert (x - y).contains(0)


def test_plain_vandermonde_matrix():
    sys = vdm.make_system([(W, 1), (V, 1)])
    _same(vdm.build_matrix(sys), [[1, 1], [W, V]])


def test_confluent_matrix_shapes():
    _same(vdm.build_matrix(vdm.make_system([(W, 2)])), [[1, 0], [W, W]])
    A = acb(3)
    _same(vdm.build_matrix(vdm.make_system([(W, 2)], shift=A)), [[1, A], [W, (A + 1) * W]])


def test_exact_matrix_for_rationals():
    rows = vdm.build_matrix(vdm.make_system([(Fraction(1, 2), 2)], shift=Fraction(3)))
    assert rows == [[1, 3], [Fraction(1, 2), 2]]


def test_closed_form_examples():
    assert (vdm.det_closed_form(vdm.make_system([(W, 1), (V, 1)])) - (V - W)).contains(0)
    assert (vdm.det_closed_form(vdm.make_system([(W, 2)])) - W).contains(0)
    sys = vdm.make_system([(W, 2), (V, 1)])
    expected = W * (V - W) ** 2
    assert (vdm.det_closed_form(sys) - expected).contains(0)
    assert (vdm.det_direct(vdm.build_matrix(sys)) - expected).contains(0)


def test_direct_determinant_examples():
    assert vdm.det_direct([[1, 0, 0], [0, 1, 0], [0, 0, 1]]) == 1
    assert vdm.det_direct([[1, 1], [2, 3]]) == 1
    with pytest.raises(InvalidInput):
        vdm.det_direct([[1, 2]])


def test_exact_and_ball_elimination_agree():
    rng = np.random.default_rng(3)
    for _ in range(20):
        m = [[Fraction(int(x), int(d)) for x, d in zip(row, dens)] for row, dens in
             zip(rng.integers(-9, 10, (5, 5)), rng.integers(1, 7, (5, 5)))]
        exact = vdm.det_direct(m)
        with workprec(128):
            ball = vdm._det_ball([[acb(arb(x.numerator) / x.denominator) for x in r] for r in m])
            assert (ball - (arb(exact.numerator) / exact.denominator)).contains(0)


def test_oracle_equivalence_exact():
    rng = np.random.default_rng(100)
    for _ in range(100):
        sys = random_rational_system(rng)
        assert vdm.det_closed_form(sys) == vdm.det_direct(vdm.build_matrix(sys))


def test_oracle_equivalence_complex():
    rng = np.random.default_rng(200)
    for _ in range(200):
        sys = random_complex_system(rng)
        closed = vdm.det_closed_form(sys)
        direct = vdm.det_direct(vdm.build_matrix(sys))
        assert vdm.dets_agree(closed, direct)
        assert vdm.dets_agree(closed, vdm.det_arb(vdm.build_matrix(sys)))


def test_polynomial_sequence_independence():
    rng = np.random.default_rng(7)
    blocks = [(W, 3), (V, 2)]
    dets = [vdm.det_direct(vdm.build_matrix(vdm.make_system(blocks, 0)))]
    dets.append(vdm.det_direct(vdm.build_matrix(vdm.make_system(blocks, acb(2.5, -1)))))
    dets.append(vdm.det_direct(vdm.build_matrix(vdm.make_system(blocks, 0, random_monic_sequence(rng, 3)))))
    for d in dets[1:]:
        assert vdm.dets_agree(d, dets[0])


@given(st.lists(st.tuples(st.fractions(-3, 3, max_denominator=8), st.integers(1, 3)), min_size=1, max_size=3),
       st.fractions(-3, 3, max_denominator=5).filter(lambda c: c != 0))
def test_homogeneity(blocks, c):
    sys = vdm.make_system(blocks)
    scaled = vdm.make_system([(w * c, t) for w, t in blocks])
    D = sys.D
    assert vdm.det_direct(vdm.build_matrix(scaled)) == c ** (D * (D - 1) // 2) * vdm.det_direct(vdm.build_matrix(sys))


def test_vanishing_on_repeats_and_zero():
    assert vdm.det_closed_form(vdm.make_system([(W, 1), (W, 2)])).contains(0)
    assert vdm.det_direct(vdm.build_matrix(vdm.make_system([(W, 1), (W, 2)]))).contains(0)
    assert vdm.det_direct(vdm.build_matrix(vdm.make_system([(Fraction(0), 2), (Fraction(1), 1)]))) == 0


def test_block_parsing():
    assert vdm.parse_blocks("w=2:t=1,w=1+i:t=2") == [("2", 1), ("1+i", 2)]
    for bad in ("w=2", "x=2:t=1", "w=2:t=a", ""):
        with pytest.raises(ParseError):
            vdm.parse_blocks(bad)


def test_xi_single_term():
    rep = vdm.xi_lower_bound_check([acb(1.5)], [[1]], T=0, A=0)
    assert rep.holds
    assert (rep.max_abs_lower - arb(1.5)).abs_upper() < 1e-30


def test_xi_rejects_zero_coefficients_and_repeats():
    with pytest.raises(InvalidInput):
        vdm.xi_lower_bound_check([acb(2)], [[0]], T=0, A=0)
    with pytest.raises(NotDistinct):
        vdm.xi_lower_bound_check([acb(2), acb(2)], [[1, 1]], T=0, A=0)


def test_xi_random_bound_with_shift():
    rng = np.random.default_rng(17)
    for _ in range(10):
        ws = [acb(*map(float, rng.uniform(-1.5, 1.5, 2))) for _ in range(2)]
        coeffs = [[int(x) for x in rng.integers(-5, 6, 2)] for _ in range(2)]
        if not any(any(r) for r in coeffs):
            coeffs[0][0] = 1
        assert vdm.xi_lower_bound_check(ws, coeffs, T=1, A=10).holds


def test_coinciding_points_give_nontrivial_kernel():
    sol = vdm.xi_nontrivial_solution([Fraction(2), Fraction(2)], T=1)
    assert sol is not None and any(c != 0 for row in sol for c in row)
    for a in range(5):
        xi = sum(sol[t][j] * Fraction(a) ** t * Fraction(2) ** a for t in range(2) for j in range(2))
        assert xi == 0
    assert vdm.xi_nontrivial_solution([Fraction(2), Fraction(3)], T=1) is None
