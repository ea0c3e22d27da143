"""Laurent expansions of the Weierstrass functions near the origin.

The coefficients ``c_k`` of ``wp(w) = w^-2 + sum_{k>=2} c_k w^(2k-2)`` follow
from ``g2, g3`` by the classical recursion.  Since ``c_k = (2k-1) G_{2k}`` and
``|G_{2k}| <= S4 * r0^(4-2k)`` (``S4`` bounds ``sum' |omega|^-4`` and ``r0``
bounds the shortest period from below), every truncation has an explicit
geometric tail that is folded into the ball radius.  Points farther than
``X_MAX * r0`` from the origin are halved first and doubled back with the
duplication formulas.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from flint import acb, arb

from .errors import PoleAtLatticePoint, PrecisionUnreachable
from .precision import workprec

X_MAX = 0.35
MAX_TERMS = 4000


@dataclass(frozen=True)
class SeriesData:
    g2: acb
    g3: acb
    r0: arb
    s4: arb
    coeffs: tuple  # c_2 .. c_K
    prec: int

    @property
    def order(self) -> int:
        return len(self.coeffs) + 1


@dataclass(frozen=True)
class LocalValues:
    wp: acb | None
    wp_prime: acb | None
    zeta: acb | None
    sigma: acb
    halvings: int


def laurent_coefficients(g2: acb, g3: acb, order: int) -> list:
    """``[c_2, ..., c_order]`` at the current working precision."""
    c = {2: g2 / 20, 3: g3 / 28}
    for k in range(4, order + 1):
        s = acb(0)
        for m in range(2, k - 1):
            s += c[m] * c[k - m]
        c[k] = s * 3 / ((2 * k + 1) * (k - 3))
    return [c[k] for k in range(2, order + 1)]


def _choose_order(s4r04: float, prec: int) -> int:
    # relative tail ~ S4 r0^4 (2K)^2 x^(2K)
    target = prec * math.log(2) + math.log(max(s4r04, 1.0))
    for k in range(4, MAX_TERMS):
        if 2 * k * -math.log(X_MAX) - 2 * math.log(2 * k + 2) >= target:
            return k
    raise PrecisionUnreachable("series order exceeds the term limit")


def series_data(g2: acb, g3: acb, r0: arb, s4: arb, prec: int) -> SeriesData:
    with workprec(prec):
        s4r04 = float((s4 * r0**4).abs_upper().mid())
        order = _choose_order(s4r04, prec)
        coeffs = tuple(laurent_coefficients(g2, g3, order))
    return SeriesData(g2, g3, r0, s4, coeffs, prec)


def _tail(order: int, x: arb, degree: int) -> arb:
    """Upper bound for ``sum_{k>order} (2k)^degree * x^(2k)``."""
    y = x * x
    ratio = arb(order + 2) ** degree / arb(order + 1) ** degree * y
    if not ratio < 1:
        raise PrecisionUnreachable("series tail does not converge")
    first = arb(2 * (order + 1)) ** degree * y ** (order + 1)
    return (first / (1 - ratio)).abs_upper()


def _widen(v: acb, err: arb) -> acb:
    e = arb(err).abs_upper()
    return v + acb(arb(0, e), arb(0, e))


def _series_at(data: SeriesData, w: acb, pole_ok: bool):
    """All four functions by direct summation, ``|w| <= X_MAX * r0``."""
    K = data.order
    r0 = data.r0.abs_lower()
    x = w.abs_upper() / r0
    y = w * w
    s4 = data.s4
    # Horner in y for the four coefficient sequences
    p_sum = acb(0)
    pp_sum = acb(0)
    z_sum = acb(0)
    l_sum = acb(0)
    for idx in range(len(data.coeffs) - 1, -1, -1):
        k = idx + 2
        ck = data.coeffs[idx]
        p_sum = p_sum * y + ck
        pp_sum = pp_sum * y + ck * (2 * k - 2)
        z_sum = z_sum * y + ck / (2 * k - 1)
        l_sum = l_sum * y + ck / ((2 * k - 1) * (2 * k))
    # series in y start at y^1 (wp), y^0 (wp' / w), y^1 (zeta / w), y^2 (log sigma)
    log_sig = -(l_sum * y * y)
    log_sig = _widen(log_sig, s4 * r0**4 * _tail(K, x, 0))
    sigma = w * log_sig.exp()
    if w.contains(0):
        if not pole_ok:
            raise PoleAtLatticePoint("argument is a lattice point")
        return None, None, None, sigma
    wp_ = 1 / y + p_sum * y
    wp_ = _widen(wp_, s4 * r0**2 * _tail(K, x, 1) / (x * x))
    wpp = -2 / (w * y) + pp_sum * w
    wpp = _widen(wpp, s4 * r0 * _tail(K, x, 2) / (x * x * x))
    zeta = 1 / w - z_sum * w * y
    zeta = _widen(zeta, s4 * r0**3 * _tail(K, x, 0) / x)
    return wp_, wpp, zeta, sigma


def halvings_needed(w_abs_upper: arb, r0_lower: arb) -> int:
    h = 0
    limit = arb(X_MAX) * r0_lower
    a = w_abs_upper
    while not a <= limit:
        a = a / 2
        h += 1
        if h > 200:
            raise PrecisionUnreachable("argument too large for halving")
    return h


def local_values(data: SeriesData, w: acb, pole_ok: bool = False) -> LocalValues:
    """Evaluate at ``w`` without any lattice reduction."""
    with workprec(data.prec):
        w = acb(w)
        if w.contains(0):
            h = 0
            if not w.abs_upper() <= arb(X_MAX) * data.r0.abs_lower():
                raise PrecisionUnreachable("ball around a lattice point is too wide")
        else:
            h = halvings_needed(w.abs_upper(), data.r0.abs_lower())
        wl = w / 2**h if h else w
        P, P1, Z, S = _series_at(data, wl, pole_ok)
        if P is None:
            return LocalValues(None, None, None, S, 0)
        g2 = data.g2
        for _ in range(h):
            P2 = 6 * P * P - g2 / 2
            r = P2 / P1
            S = -P1 * S**4
            Z = 2 * Z + r / 2
            P, P1 = -2 * P + r * r / 4, -P1 + 3 * P * r - r**3 / 4
        return LocalValues(P, P1, Z, S, h)
