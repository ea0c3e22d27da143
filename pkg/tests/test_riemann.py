import numpy as np
import pytest
from flint import acb, arb
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import FROZEN, close_to_frozen
from quasielliptic import riemann
from quasielliptic.errors import DomainError, PrecisionUnreachable
from quasielliptic.precision import workprec

CONST = FROZEN["constants"]


@pytest.mark.parametrize("method", ["auto", "euler-maclaurin"])
def test_zeta_three(method):
    z = riemann.zeta_r(3, 128, method)
    assert close_to_frozen(z, CONST["zeta3"])
    assert z.rad() < 2.0 ** -110
    assert z.real < arb(5) / 4


def test_zeta_three_direct_sum():
    z = riemann.zeta_dirichlet(3, 128, terms=4000)
    assert close_to_frozen(z, CONST["zeta3"]) and z.rad() < 1e-7


def test_zeta_even_values():
    with workprec(200):
        assert riemann.zeta_r(2, 128).overlaps(acb(arb.pi() ** 2 / 6))
        assert riemann.zeta_r(4, 128).overlaps(acb(arb.pi() ** 4 / 90))
    assert close_to_frozen(riemann.zeta_r(4, 128), CONST["zeta4"], scale=1e6)
    assert close_to_frozen(riemann.zeta_r(2, 128), CONST["zeta2"], scale=1e6)


def test_zeta_off_axis():
    z = riemann.zeta_r(acb(3, 100), 128)
    assert close_to_frozen(z, CONST["zeta_3_100i"], scale=1e6)


def test_domain():
    with pytest.raises(DomainError):
        riemann.zeta_r(acb(1.5, 2))
    with pytest.raises(DomainError):
        riemann.tail_inequality_check(acb(2.5, 0))


def test_direct_sum_refuses_slow_cases():
    with pytest.raises(PrecisionUnreachable):
        riemann.zeta_dirichlet(2, 128)


@pytest.mark.parametrize("s", [3, 4, 20, acb(3, 100)])
def test_routes_agree(s):
    a = riemann.zeta_euler_maclaurin(s, 128)
    b = riemann.zeta_dirichlet(s, 128, terms=4000)
    with workprec(200):
        assert a.overlaps(b)
        assert a.overlaps(acb(s).zeta())


def test_refinement_nested():
    s = acb(3, 7)
    with workprec(200):
        prev = None
        for n in (50, 100, 200, 400):
            z = riemann.zeta_dirichlet(s, 128, terms=n)
            if prev is not None:
                assert prev.contains(z)
                assert z.rad() < prev.rad()
            prev = z


def test_tail_examples():
    for s in (3, 4, acb(3, 100)):
        rep = riemann.tail_inequality_check(s)
        assert rep.verdict == riemann.PASS
    rep = riemann.tail_inequality_check(3)
    assert abs(float(rep.lhs.mid()) - 0.2020569031595942) < 1e-15
    assert rep.rhs.contains(arb(1) / 4)


@settings(max_examples=50)
@given(st.floats(3, 20), st.floats(-100, 100))
def test_tail_random(sigma, t):
    assert riemann.tail_inequality_check(acb(sigma, t)).verdict == riemann.PASS


def test_printed_form_is_false_at_three():
    # the uncorrected reading |zeta(s)| < 2^(1 - sigma) fails at s = 3
    z = riemann.zeta_r(3)
    assert abs(z).real > arb(1) / 4


def test_seeded_tail_batch():
    rng = np.random.default_rng(0)
    for _ in range(10):
        s = acb(float(rng.uniform(3, 20)), float(rng.uniform(-100, 100)))
        assert riemann.tail_inequality_check(s, 256).verdict == riemann.PASS
