"""Two quantitative lemmas as checkable calculators.

* A one-logarithm lower bound ``|beta - log alpha| >= exp(-2^26 D^3 log A log B)``
  for rational ``alpha``, ``beta``; the bound is kept in log space.
* A root-distance bound ``|theta - alpha|^l <= D^(3D-2) H^(2D) |F(theta)|``
  where ``alpha`` is the root of ``F`` nearest ``theta`` and ``l`` its
  multiplicity.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from flint import acb, arb, fmpz_poly

from .errors import InvalidInput, ParseError, TieUnresolved, ZeroDenominator
from .precision import (
    GUARD_BITS,
    Ordering,
    TowerMagnitude,
    abs_ball,
    ball_to_json,
    complex_ball,
    exact_complex,
    is_exact_number,
    parse_complex,
    tower_compare,
    workprec,
)

PASS, FAIL, UNKNOWN = "Pass", "Fail", "Unknown"
BAKER_CONSTANT = 2**26
MAX_TIE_RETRIES = 4


# ---------------------------------------------------------------------------
# heights and the one-logarithm bound
# ---------------------------------------------------------------------------

def log_height_rational(p: int, q: int = 1, prec: int = 128) -> arb:
    """``log max(|p|, |q|)`` after reducing ``p/q`` to lowest terms."""
    if q == 0:
        raise ZeroDenominator("height of p/0")
    g = math.gcd(p, q) or 1
    top = max(abs(p // g), abs(q // g))
    with workprec(prec):
        return arb(top).log()


def _height(x: Fraction, prec: int) -> arb:
    return log_height_rational(x.numerator, x.denominator, prec)


@dataclass(frozen=True)
class BakerReport:
    alpha: Fraction
    beta: Fraction
    degree: int
    log_a: arb
    log_b: arb
    bound: TowerMagnitude  # level 1: log of the bound
    distance: arb  # |beta - log alpha|
    verdict: str
    prec: int

    def to_json(self) -> dict:
        return {
            "alpha": str(self.alpha),
            "beta": str(self.beta),
            "D": self.degree,
            "log_A": ball_to_json(self.log_a, self.prec),
            "log_B": ball_to_json(self.log_b, self.prec),
            "log_bound": ball_to_json(self.bound.payload, self.prec),
            "distance": ball_to_json(self.distance, self.prec),
            "verdict": self.verdict,
        }


def _as_fraction(x) -> Fraction:
    if isinstance(x, str):
        re, im = parse_complex(x)
        if im:
            raise InvalidInput("only rational inputs are supported")
        return re
    if isinstance(x, (int, Fraction)):
        return Fraction(x)
    raise InvalidInput(f"expected a rational, got {type(x).__name__}")


def baker_lower_bound(alpha, beta, degree: int = 1, prec: int = 128) -> BakerReport:
    """Evaluate the bound and certify ``|beta - log alpha| >= bound``.

    ``log alpha`` is the principal branch, so negative ``alpha`` gives
    ``log|alpha| + i pi``.
    """
    alpha, beta = _as_fraction(alpha), _as_fraction(beta)
    if alpha == 0 or beta == 0:
        raise InvalidInput("alpha and beta must be nonzero")
    if degree < 1:
        raise InvalidInput("D must be >= 1")
    wp = prec + GUARD_BITS
    with workprec(wp):
        a = arb(alpha.numerator) / alpha.denominator
        b = arb(beta.numerator) / beta.denominator
        log_alpha = acb(a).log()
        log_a = arb(1).max(_height(alpha, wp)).max(log_alpha.abs_upper())
        big_b = arb(1).exp().max(_height(beta, wp)).max(degree * log_a)
        log_b = big_b.log()
        log_bound = -BAKER_CONSTANT * degree**3 * log_a * log_b
        bound = TowerMagnitude.from_log(log_bound)
        dist = abs_ball(acb(b) - log_alpha)
        if not dist > 0:
            verdict = UNKNOWN
        else:
            order = tower_compare(bound, TowerMagnitude.from_log(dist.log()), wp)
            verdict = {Ordering.LESS: PASS, Ordering.EQUAL: PASS, Ordering.GREATER: FAIL}.get(order, UNKNOWN)
    return BakerReport(alpha, beta, degree, log_a, log_b, bound, dist, verdict, prec)


# ---------------------------------------------------------------------------
# integer polynomials and the root-distance bound
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class IntPolynomial:
    coefficients: tuple  # ascending degree

    def __post_init__(self):
        if not self.coefficients or self.coefficients[-1] == 0:
            raise InvalidInput("leading coefficient must be nonzero")

    @classmethod
    def parse(cls, text: str) -> "IntPolynomial":
        parts = [p.strip().replace("−", "-") for p in text.split(",")]
        try:
            coeffs = [int(p) for p in parts]
        except ValueError as exc:
            raise ParseError(f"malformed integer coefficients: {text!r}") from exc
        while len(coeffs) > 1 and coeffs[-1] == 0:
            coeffs.pop()
        if all(c == 0 for c in coeffs):
            raise InvalidInput("F must be nonzero")
        return cls(tuple(coeffs))

    @property
    def degree(self) -> int:
        return len(self.coefficients) - 1

    @property
    def height(self) -> int:
        return max(abs(c) for c in self.coefficients)

    def flint(self) -> fmpz_poly:
        return fmpz_poly(list(self.coefficients))

    def eval_exact(self, x: Fraction, y: Fraction = Fraction(0)) -> tuple:
        re, im = Fraction(0), Fraction(0)
        for c in reversed(self.coefficients):
            re, im = re * x - im * y + c, re * y + im * x
        return re, im

    def eval_ball(self, z: acb) -> acb:
        out = acb(0)
        for c in reversed(self.coefficients):
            out = out * z + c
        return out


def squarefree_decomposition(f: fmpz_poly) -> list:
    """Yun's algorithm: ``[(g_j, j)]`` with ``f = c * prod g_j^j``, ``g_j`` square-free."""
    if f.degree() < 1:
        return []
    out = []
    df = f.derivative()
    a = f.gcd(df)
    b = f // a
    c = df // a
    d = c - b.derivative()
    j = 1
    while b.degree() > 0:
        a = b.gcd(d)
        b = b // a
        c = d // a
        if a.degree() > 0:
            out.append((a, j))
        d = c - b.derivative()
        j += 1
    return out


def roots_with_multiplicity(f: fmpz_poly, prec: int) -> list:
    """Certified isolating balls for every root, tagged with its multiplicity."""
    out = []
    with workprec(prec):
        for g, mult in squarefree_decomposition(f):
            for root, m in g.complex_roots():
                if m != 1:
                    raise AssertionError("square-free factor has a repeated root")
                out.append((root, mult))
    return out


@dataclass(frozen=True)
class FeldmanReport:
    root: acb
    multiplicity: int
    lhs: arb
    rhs: arb
    verdict: str
    prec: int

    def to_json(self) -> dict:
        return {
            "root": ball_to_json(self.root, self.prec),
            "multiplicity": self.multiplicity,
            "lhs": ball_to_json(self.lhs, self.prec),
            "rhs": ball_to_json(self.rhs, self.prec),
            "verdict": self.verdict,
        }


def _nearest(roots, theta: acb):
    """Index of the certified nearest root; ``None`` when rivals of another multiplicity tie."""
    dists = [(r - theta).abs_upper() for r, _ in roots]
    lows = [(r - theta).abs_lower() for r, _ in roots]
    best = min(range(len(roots)), key=lambda j: float(arb(dists[j]).mid()))
    rivals = [j for j in range(len(roots)) if j != best and not lows[j] > dists[best]]
    if any(roots[j][1] != roots[best][1] for j in rivals):
        return None
    return best


def feldman_check(poly, theta, prec: int = 128) -> FeldmanReport:
    """Certify ``|theta - alpha|^l <= D^(3D-2) H^(2D) |F(theta)|``."""
    if isinstance(poly, str):
        poly = IntPolynomial.parse(poly)
    elif not isinstance(poly, IntPolynomial):
        poly = IntPolynomial(tuple(int(c) for c in poly))
    if poly.degree < 1:
        raise InvalidInput("F must have degree >= 1")
    if isinstance(theta, str):
        theta = parse_complex(theta)
    D, H = poly.degree, poly.height
    exact_theta = exact_complex(theta) if is_exact_number(theta) or isinstance(theta, tuple) else None
    f = poly.flint()
    wp = prec + GUARD_BITS
    for _ in range(MAX_TIE_RETRIES):
        with workprec(wp):
            th = complex_ball(theta)
            roots = roots_with_multiplicity(f, wp)
            j = _nearest(roots, th)
            if j is None:
                wp *= 2
                continue
            root, mult = roots[j]
            const = arb(D) ** (3 * D - 2) * arb(H) ** (2 * D)
            if exact_theta is not None and poly.eval_exact(*exact_theta) == (0, 0):
                # theta is a root: both sides vanish exactly
                lhs, rhs = arb(0), arb(0)
                root = th
            else:
                lhs = abs_ball(th - root) ** mult
                rhs = const * abs_ball(poly.eval_ball(th))
            if lhs <= rhs:
                verdict = PASS
            elif lhs > rhs:
                verdict = FAIL
            else:
                verdict = UNKNOWN
            return FeldmanReport(root, mult, lhs, rhs, verdict, prec)
    raise TieUnresolved("roots of different multiplicity are equidistant at every tried precision")
