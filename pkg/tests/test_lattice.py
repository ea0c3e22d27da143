from fractions import Fraction

import numpy as np
import pytest
from flint import acb, arb
from hypothesis import given
from hypothesis import strategies as st

from conftest import close_to_frozen
from quasielliptic.errors import AmbiguousReduction, DegenerateLattice, DependentPeriods, ParseError
from quasielliptic.lattice import (
    PRESETS,
    epsilon,
    legendre_pairing,
    legendre_residual,
    make_lattice,
    preset,
    quasi_period,
    random_lattice,
    recover_lattice_point,
    reduce_mod_lattice,
)
from quasielliptic.precision import residual_ok, workprec


def test_make_lattice_square():
    lat = make_lattice(1, (0, 1))
    assert lat.tau.overlaps(acb(0, 1))


def test_make_lattice_normalizes_orientation():
    lat = make_lattice(1, (0, -1))
    assert lat.tau.imag > 0
    assert lat.omega2.overlaps(acb(0, 1))


def test_make_lattice_rejects_real_ratio():
    with pytest.raises(DegenerateLattice):
        make_lattice(1, 2)


def test_make_lattice_accepts_literals():
    lat = make_lattice("1", "0.5+1.25i")
    assert lat.omega2.overlaps(acb(0.5, 1.25))
    with pytest.raises(ParseError):
        make_lattice("1", "nonsense")


@pytest.mark.parametrize("name", ["square", "hexagonal", "rectangular-2", "rational"])
def test_invariants_match_theta_oracle(frozen, name):
    entry = frozen["lattices"][name]
    if name == "rational":
        lat = make_lattice((1, Fraction(1, 4)), (Fraction(-1, 2), Fraction(3, 2)), prec=256)
    else:
        lat = preset(name, 256)
    for key in ("g2", "g3", "eta1", "eta2"):
        assert close_to_frozen(getattr(lat, key), entry[key], scale=1000), key


def test_square_g2_gamma_closed_form(frozen):
    lat = preset("square", 256)
    assert close_to_frozen(lat.g2, frozen["constants"]["square_g2_gamma"], scale=1000)


def test_symmetry_forced_zeros():
    assert preset("square").g3.contains(0)
    assert preset("hexagonal").g2.contains(0)


def test_square_eta1_is_pi():
    lat = preset("square", 200)
    with workprec(300):
        assert lat.eta1.overlaps(acb(arb.pi()))


def test_homogeneity_scaling():
    rng = np.random.default_rng(5)
    lat = random_lattice(rng, 128)
    o1, o2 = lat.source[0], lat.source[1]
    scaled = make_lattice((2 * o1[0], 2 * o1[1]), (2 * o2[0], 2 * o2[1]), 128)
    with workprec(lat.work_prec):
        assert (scaled.g2 * 16 - lat.g2).contains(0)
        assert (scaled.g3 * 64 - lat.g3).contains(0)


@given(st.integers(-5, 5), st.integers(-5, 5), st.integers(-5, 5), st.integers(-5, 5))
def test_eta_linearity(a, b, c, d):
    lat = preset("hexagonal")
    with workprec(lat.work_prec):
        diff = quasi_period(lat, a + c, b + d) - quasi_period(lat, a, b) - quasi_period(lat, c, d)
    assert diff.contains(0)


def test_quasi_period_examples():
    lat = preset("square")
    assert quasi_period(lat, 0, 0).contains(0)
    with workprec(lat.work_prec):
        assert (quasi_period(lat, 2, 3) - 2 * lat.eta1 - 3 * lat.eta2).contains(0)


@pytest.mark.parametrize("prec", [128, 256])
def test_legendre_presets_and_random(prec):
    rng = np.random.default_rng(prec)
    lats = [preset(n, prec) for n in PRESETS] + [random_lattice(rng, prec) for _ in range(20)]
    for lat in lats:
        assert residual_ok(legendre_residual(lat), prec)


def test_epsilon_examples():
    lat = preset("square")
    assert epsilon(lat, 2, 0) == 1
    assert epsilon(lat, 1, 0) == -1
    assert epsilon(lat, 1, 1) == -1


def test_pairing_examples():
    lat = preset("square")
    assert legendre_pairing(lat, (1, 0), (0, 1)) == 1
    assert legendre_pairing(lat, (0, 1), (1, 0)) == -1
    assert legendre_pairing(lat, (0, 1), (-1, 0)) == 1
    with pytest.raises(DependentPeriods):
        legendre_pairing(lat, (1, 2), (2, 4))


@given(st.tuples(st.integers(-10, 10), st.integers(-10, 10)), st.tuples(st.integers(-10, 10), st.integers(-10, 10)))
def test_pairing_is_determinant(p1, p2):
    det = p1[0] * p2[1] - p2[0] * p1[1]
    lat = preset("rectangular-2")
    if det == 0:
        with pytest.raises(DependentPeriods):
            legendre_pairing(lat, p1, p2)
    else:
        assert legendre_pairing(lat, p1, p2) == det


def test_reduce_examples():
    lat = preset("hexagonal")
    with workprec(lat.work_prec):
        z = lat.omega1 + lat.omega2 + lat.omega1 / 10
        z0, a, b = reduce_mod_lattice(lat, z)
        assert (a, b) == (1, 1) and (z0 - lat.omega1 / 10).contains(0)
        z0, a, b = reduce_mod_lattice(lat, lat.omega1 / 2)
        assert (a, b) == (0, 0)
        z0, a, b = reduce_mod_lattice(lat, -lat.omega2 / 4)
        assert (a, b) == (0, -1) and (z0 - 3 * lat.omega2 / 4).contains(0)


def test_reduce_ambiguous_on_edge():
    lat = preset("square")
    with pytest.raises(AmbiguousReduction):
        reduce_mod_lattice(lat, acb(arb(0, 1e-3), arb("0.5")))


def test_recover_lattice_point():
    lat = preset("hexagonal")
    with workprec(lat.work_prec):
        assert recover_lattice_point(lat, 3 * lat.omega1 - 2 * lat.omega2) == (3, -2)
        assert recover_lattice_point(lat, lat.omega1 / 3) is None


def test_cm_multipliers_on_presets():
    sq = preset("square")
    assert sq.cm_multipliers[0].matrix == ((0, 1), (-1, 0))
    hexa = preset("hexagonal")
    assert hexa.cm_multipliers[0].matrix == ((0, 1), (-1, 1))
    assert preset("rectangular-2").cm_multipliers == ()
