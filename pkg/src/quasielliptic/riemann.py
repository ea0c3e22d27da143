"""Riemann zeta in the half-plane ``Re s >= 2`` and the tail inequality
``|zeta(s) - 1| < 2^(1 - sigma)`` for ``Re s >= 3``."""

from __future__ import annotations

import math
from dataclasses import dataclass

from flint import acb, arb, fmpq

from .errors import DomainError, PrecisionUnreachable
from .precision import GUARD_BITS, abs_ball, ball_to_json, complex_ball, workprec

MIN_SIGMA = 2
TAIL_MIN_SIGMA = 3
MAX_DIRICHLET_TERMS = 1 << 16
PASS, FAIL, UNKNOWN = "Pass", "Fail", "Unknown"


def _real_part_lower(s: acb) -> float:
    return float(s.real.lower())


def _check_domain(s: acb, sigma_min: int) -> None:
    if not s.real >= sigma_min:
        raise DomainError(f"Re(s) >= {sigma_min} is not certified")


def dirichlet_terms(sigma_lower: float, prec: int) -> int:
    """Smallest ``N`` with ``N^(1-sigma)/(sigma-1) <= 2^-prec``."""
    s1 = sigma_lower - 1
    logn = (prec * math.log(2) - math.log(s1)) / s1
    return max(2, math.ceil(math.exp(min(logn, 700))))


def zeta_dirichlet(s, prec: int = 128, terms: int | None = None) -> acb:
    """``sum_{n<=N} n^-s`` plus the integral tail bound ``N^(1-sigma)/(sigma-1)``."""
    wp = prec + GUARD_BITS
    with workprec(wp):
        s = complex_ball(s)
        _check_domain(s, MIN_SIGMA)
        sig = s.real.lower()
        if terms is None:
            terms = dirichlet_terms(_real_part_lower(s), prec + 4)
            if terms > MAX_DIRICHLET_TERMS:
                raise PrecisionUnreachable(f"direct sum needs {terms} terms; use the Euler-Maclaurin route")
        total = acb(0)
        for n in range(1, terms + 1):
            total += acb(n) ** (-s)
        tail = arb(terms) ** (1 - sig) / (sig - 1)
        t = arb(tail).abs_upper()
        return total + acb(arb(0, t), arb(0, t))


def _rising(s: acb, k: int) -> acb:
    out = acb(1)
    for j in range(k):
        out *= s + j
    return out


def zeta_euler_maclaurin(s, prec: int = 128, terms: int | None = None, order: int | None = None) -> acb:
    """Euler-Maclaurin summation with a rigorous remainder bound.

    ``|R| <= 4 |(s)_{2M}| / (2 pi)^(2M) * N^(1 - sigma - 2M) / (sigma + 2M - 1)``.
    """
    wp = prec + GUARD_BITS
    with workprec(wp):
        s = complex_ball(s)
        _check_domain(s, MIN_SIGMA)
        sig = s.real.lower()
        # the remainder bound needs N well beyond |s + 2M|
        n_terms = terms or max(16, prec // 4, 2 * int(abs(float(s.imag.mid()))) + 1)
        m = order or max(4, prec // 8)
        total = acb(0)
        for n in range(1, n_terms):
            total += acb(n) ** (-s)
        big_n = acb(n_terms)
        total += big_n ** (1 - s) / (s - 1) + big_n ** (-s) / 2
        for j in range(1, m + 1):
            b = fmpq.bernoulli(2 * j)
            coef = arb(b.p) / arb(b.q) / arb.fac_ui(2 * j)
            total += coef * _rising(s, 2 * j - 1) * big_n ** (-s - 2 * j + 1)
        rem = 4 * _rising(s, 2 * m).abs_upper() / (2 * arb.pi()) ** (2 * m)
        rem *= arb(n_terms) ** (1 - sig - 2 * m) / (sig + 2 * m - 1)
        r = arb(rem).abs_upper()
        return total + acb(arb(0, r), arb(0, r))


def zeta_r(s, prec: int = 128, method: str = "auto") -> acb:
    """Riemann zeta for ``Re s >= 2``."""
    if method == "dirichlet":
        return zeta_dirichlet(s, prec)
    if method == "euler-maclaurin":
        return zeta_euler_maclaurin(s, prec)
    if method != "auto":
        raise ValueError(f"unknown method {method!r}")
    try:
        return zeta_dirichlet(s, prec)
    except PrecisionUnreachable:
        return zeta_euler_maclaurin(s, prec)


@dataclass(frozen=True)
class TailReport:
    s: acb
    zeta: acb
    lhs: arb  # |zeta(s) - 1|
    rhs: arb  # 2^(1 - sigma)
    verdict: str
    prec: int

    def to_json(self) -> dict:
        return {
            "s": ball_to_json(self.s, self.prec),
            "zeta": ball_to_json(self.zeta, self.prec),
            "lhs": ball_to_json(self.lhs, self.prec),
            "rhs": ball_to_json(self.rhs, self.prec),
            "verdict": self.verdict,
        }


def tail_inequality_check(s, prec: int = 128, method: str = "auto") -> TailReport:
    """Certify ``|zeta(s) - 1| < 2^(1 - sigma)`` for ``sigma >= 3``."""
    wp = prec + GUARD_BITS
    with workprec(wp):
        s = complex_ball(s)
        _check_domain(s, TAIL_MIN_SIGMA)
        z = zeta_r(s, prec, method)
        d = z - 1
        lhs = abs_ball(d)
        rhs = arb(2) ** (1 - s.real)
        verdict = PASS if lhs < rhs else (FAIL if lhs >= rhs else UNKNOWN)
    return TailReport(s, z, lhs, rhs, verdict, prec)
