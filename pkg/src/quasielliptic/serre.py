"""Serre functions ``f_u``, the quasi-period form ``lambda(u, w)`` and
torsion constructions built from them."""

from __future__ import annotations

from dataclasses import dataclass

from flint import acb, arb

from .errors import NotALatticeRelation, PoleAtLatticePoint
from .lattice import LatticePoint, quasi_period, recover_lattice_point
from .precision import complex_ball, workprec
from .weierstrass import WeierstrassContext, _ctx_for, evaluate, sigma


@dataclass(frozen=True)
class SerrePoint:
    u: acb
    zeta_u: acb
    sigma_u: acb


def make_serre_point(ctx, u, prec: int | None = None) -> SerrePoint:
    """Cache ``zeta(u)`` and ``sigma(u)``; ``u`` must not be a period."""
    ctx = _ctx_for(ctx, prec)
    with workprec(ctx.lattice.work_prec):
        u = complex_ball(u)
    try:
        v = evaluate(ctx, u)
    except PoleAtLatticePoint:
        raise PoleAtLatticePoint("u lies on the lattice") from None
    if v.sigma.contains(0):
        raise PoleAtLatticePoint("sigma(u) is not certifiably nonzero")
    return SerrePoint(u, v.zeta, v.sigma)


def lambda_qp(lat, sp: SerrePoint, a: int, b: int) -> acb:
    """``lambda(u, w) = eta(w) u - w zeta(u)`` for ``w = a*omega1 + b*omega2``."""
    if isinstance(lat, WeierstrassContext):
        lat = lat.lattice
    with workprec(lat.work_prec):
        w = a * lat.omega1 + b * lat.omega2
        return quasi_period(lat, a, b) * sp.u - w * sp.zeta_u


def lambda_at(lat, sp: SerrePoint, w: acb, coords: tuple) -> acb:
    """``lambda(u, w)`` for a period given both as a ball and by coordinates."""
    with workprec(lat.work_prec):
        return quasi_period(lat, *coords) * sp.u - w * sp.zeta_u


def serre_f(ctx, sp: SerrePoint, z, prec: int | None = None, reduce: bool = True) -> acb:
    """``f_u(z) = sigma(z+u) / (sigma(z) sigma(u)) * exp(-zeta(u) z)``.

    A zero at ``z + u`` in the lattice is allowed; a pole at ``z`` is not.
    """
    ctx = _ctx_for(ctx, prec)
    with workprec(ctx.lattice.work_prec):
        z = complex_ball(z)
        s_z = sigma(ctx, z, reduce=reduce)
        if s_z.contains(0):
            raise PoleAtLatticePoint("f_u has a pole at lattice points")
        s_zu = sigma(ctx, z + sp.u, reduce=reduce)
        return s_zu / (s_z * sp.sigma_u) * (-sp.zeta_u * z).exp()


def torsion_t0(ctx, coeffs, points, prec: int | None = None) -> tuple:
    """``t0 = sum k_i zeta(u_i) - eta(w0)`` where ``w0 = sum k_i u_i`` is a period.

    ``points`` may be SerrePoints or raw complex values.
    """
    ctx = _ctx_for(ctx, prec)
    lat = ctx.lattice
    sps = [p if isinstance(p, SerrePoint) else make_serre_point(ctx, p) for p in points]
    if len(sps) != len(coeffs):
        raise ValueError("coefficient and point counts differ")
    with workprec(lat.work_prec):
        total = acb(0)
        for k, sp in zip(coeffs, sps):
            total += int(k) * sp.u
        ab = recover_lattice_point(lat, total)
        if ab is None:
            raise NotALatticeRelation("sum k_i u_i is not certifiably a period")
        t0 = -quasi_period(lat, *ab)
        for k, sp in zip(coeffs, sps):
            t0 += int(k) * sp.zeta_u
        return t0, lat.point(*ab)


def product_function(ctx, coeffs, sps, z, t0=None, reduce: bool = True) -> acb:
    """``exp(t0 z) * prod f_{u_i}(z)^{k_i}`` (``t0 = 0`` when omitted)."""
    with workprec(ctx.lattice.work_prec):
        z = complex_ball(z)
        out = acb(1) if t0 is None else (t0 * z).exp()
        for k, sp in zip(coeffs, sps):
            out *= serre_f(ctx, sp, z, reduce=reduce) ** int(k)
        return out


def lambda_check(lat, coeffs, sps, t0: acb, coords: tuple) -> tuple:
    """``(t0 w + sum k_i lambda(u_i, w)) / (2 pi i)`` and the integer it certifies."""
    with workprec(lat.work_prec):
        w = lat.point(*coords).value
        val = t0 * w
        for k, sp in zip(coeffs, sps):
            val += int(k) * lambda_qp(lat, sp, *coords)
        ratio = val / (2 * arb.pi() * acb(0, 1))
        n = round(float(ratio.real.mid()))
        ok = ratio.real.contains(n) and ratio.imag.contains(0) and ratio.real.rad() < 0.5
        return ratio, (n if ok else None)


__all__ = [
    "SerrePoint",
    "LatticePoint",
    "make_serre_point",
    "lambda_qp",
    "lambda_at",
    "serre_f",
    "torsion_t0",
    "product_function",
    "lambda_check",
]
