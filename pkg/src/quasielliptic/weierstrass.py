"""Certified evaluation of sigma, zeta, wp and wp' for a lattice.

Evaluation reduces ``z`` to the nearest period in the reduced basis, evaluates
the Laurent expansions there (halving and doubling back when needed) and
restores the original point with the exact quasi-periodicity laws::

    zeta(z0 + w)  = zeta(z0) + eta(w)
    sigma(z0 + w) = eps(w) * sigma(z0) * exp(eta(w) * (z0 + w/2))

Any integer choice in the reduction is valid, so the rounding can use float
midpoints without losing rigor.
"""

from __future__ import annotations

from dataclasses import dataclass

from flint import acb, arb

from . import laurent
from .errors import PoleAtLatticePoint
from .lattice import Lattice, _area, epsilon, lattice_coordinates, lattice_power_tail, quasi_period
from .precision import complex_ball, workprec


@dataclass(frozen=True)
class WeierstrassContext:
    lattice: Lattice
    series_order: int
    convergence_radius: arb

    @property
    def prec(self) -> int:
        return self.lattice.prec


@dataclass(frozen=True)
class WeierstrassValues:
    wp: acb | None
    wp_prime: acb | None
    zeta: acb | None
    sigma: acb
    shift: tuple  # (a, b) of the period removed by the reduction


def make_context(lat: Lattice, prec: int | None = None) -> WeierstrassContext:
    if prec is not None:
        lat = lat.at_precision(prec)
    data = lat.series()
    with workprec(data.prec):
        radius = arb(laurent.X_MAX) * data.r0
    return WeierstrassContext(lat, data.order, radius)


def _ctx_for(ctx, prec):
    if isinstance(ctx, Lattice):
        ctx = make_context(ctx)
    if prec is not None and prec > ctx.prec:
        ctx = make_context(ctx.lattice, prec)
    return ctx


def nearest_period(lat: Lattice, z: acb) -> tuple:
    """Integer coordinates ``(a, b)`` of a period close to ``z``."""
    b1, b2 = lat.reduced
    m_f, n_f = lattice_coordinates(b1, b2, z)
    m = round(float(m_f.mid()))
    n = round(float(n_f.mid()))
    (p, q), (r, s) = lat.change
    return m * p + n * r, m * q + n * s


def evaluate(ctx, z, prec: int | None = None, reduce: bool = True, pole_ok: bool = False) -> WeierstrassValues:
    """All four functions at ``z``.

    With ``reduce=False`` the Laurent expansion is reached by halving alone,
    which gives an evaluation path independent of the monodromy laws.
    """
    ctx = _ctx_for(ctx, prec)
    lat = ctx.lattice
    data = lat.series()
    with workprec(data.prec):
        z = complex_ball(z)
        a, b = nearest_period(lat, z) if reduce else (0, 0)
        w = a * lat.omega1 + b * lat.omega2
        z0 = z - w
        try:
            loc = laurent.local_values(data, z0, pole_ok=pole_ok)
        except PoleAtLatticePoint:
            raise PoleAtLatticePoint(f"z is the lattice point {a}*omega1 + {b}*omega2") from None
        if a == 0 and b == 0:
            return WeierstrassValues(loc.wp, loc.wp_prime, loc.zeta, loc.sigma, (0, 0))
        eta = quasi_period(lat, a, b)
        sigma = epsilon(lat, a, b) * loc.sigma * (eta * (z0 + w / 2)).exp()
        zeta = None if loc.zeta is None else loc.zeta + eta
        return WeierstrassValues(loc.wp, loc.wp_prime, zeta, sigma, (a, b))


def sigma(ctx, z, prec: int | None = None, reduce: bool = True) -> acb:
    """Weierstrass sigma function (entire)."""
    return evaluate(ctx, z, prec, reduce, pole_ok=True).sigma


def zeta_w(ctx, z, prec: int | None = None, reduce: bool = True) -> acb:
    """Weierstrass zeta function ``sigma'/sigma``."""
    return evaluate(ctx, z, prec, reduce).zeta


def wp(ctx, z, prec: int | None = None, reduce: bool = True) -> acb:
    return evaluate(ctx, z, prec, reduce).wp


def wp_prime(ctx, z, prec: int | None = None, reduce: bool = True) -> acb:
    return evaluate(ctx, z, prec, reduce).wp_prime


def ode_residual(ctx, z, prec: int | None = None) -> acb:
    """``wp'^2 - 4 wp^3 + g2 wp + g3``."""
    ctx = _ctx_for(ctx, prec)
    v = evaluate(ctx, z)
    lat = ctx.lattice
    with workprec(lat.work_prec):
        p, p1 = v.wp, v.wp_prime
        return p1 * p1 - 4 * p**3 + lat.g2 * p + lat.g3


# ---------------------------------------------------------------------------
# independent oracles (tests only)
# ---------------------------------------------------------------------------

def oracle_values(lat: Lattice, z, prec: int) -> tuple:
    """Arb's theta-function based ``(wp, zeta, sigma)`` rescaled to ``lat``."""
    with workprec(prec):
        z = complex_ball(z)
        o1 = lat.omega1
        tau = lat.omega2 / o1
        u = z / o1
        p = u.elliptic_p(tau) / (o1 * o1)
        zt = u.elliptic_zeta(tau) / o1
        sg = u.elliptic_sigma(tau) * o1
        return p, zt, sg


def sigma_product(lat: Lattice, z, radius_: int = 40, prec: int = 64) -> acb:
    """Truncated canonical product over ``|m|,|n| <= radius_`` (low accuracy).

    The omitted factors satisfy ``|log E| <= |z/w|^3`` for ``|z/w| <= 1/2``,
    so the cubic lattice tail gives the radius added to the log.
    """
    with workprec(prec):
        z = complex_ball(z)
        b1, b2 = lat.reduced
        log_sum = acb(0)
        for m in range(-radius_, radius_ + 1):
            for n in range(-radius_, radius_ + 1):
                if m == 0 and n == 0:
                    continue
                w = m * b1 + n * b2
                r = z / w
                log_sum += (1 - r).log() + r + r * r / 2
        area = _area(b1, b2)
        R = (radius_ + 1) * area / b1.abs_upper().max(b2.abs_upper())
        Rc = arb((b1 + b2).abs_upper()).max(arb((b1 - b2).abs_upper())) / 2
        if not z.abs_upper() <= R / 2:
            raise ValueError("product oracle needs |z| <= R/2")
        tail = lattice_power_tail(3, R, Rc, area) * z.abs_upper() ** 3
        t = arb(tail).abs_upper()
        log_sum += acb(arb(0, t), arb(0, t))
        return z * log_sum.exp()
