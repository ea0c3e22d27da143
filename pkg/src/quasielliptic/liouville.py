"""Explicit Liouville tuples built on ``q_0 = 1``, ``q_{k+1} = 3^(q_k^4)``.

For ``x_i = sum_l eps_l^(i) (4(l-1))^(n-i) / q_l`` the distance
``q_k x_i - p_k^(i)`` is a series dominated by its first nonzero term.  All
quantities are kept as tower magnitudes: ``q_3`` has a 155-digit exponent and
``q_4`` is only reachable through ``log log``.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from fractions import Fraction

from flint import arb

from .errors import DepthExceeded, DepthUnrepresentable, InvalidShape, ParseError
from .precision import (
    real_ball,
    Ordering,
    TowerMagnitude,
    ball_to_json,
    tower_compare,
    tower_mul_div,
    workprec,
)

BASE = 3
MAX_K = 2  # deepest verifiable index
LOG_TAIL_GUARD = 8

PASS, FAIL, UNKNOWN = "Pass", "Fail", "Unknown"


@dataclass(frozen=True)
class TowerInt:
    """``3**exponent``; ``literal`` marks ``q_0 = 1``."""

    exponent: int
    literal: bool = False

    @property
    def value(self) -> int:
        if self.exponent.bit_length() > 64:
            raise DepthUnrepresentable("integer too large to expand")
        return BASE**self.exponent

    def log(self) -> arb:
        return self.exponent * arb(BASE).log()

    def magnitude(self) -> TowerMagnitude:
        if self.exponent.bit_length() <= 16:
            return TowerMagnitude.exact(self.value)
        return TowerMagnitude.from_log(self.log())

    def to_json(self) -> dict:
        return {"base": BASE, "exponent": str(self.exponent)}


def _exponent(k: int) -> int:
    e = 0
    for _ in range(k):
        e = BASE ** (4 * e)  # exponent of q_{j+1} is q_j^4 = 3^(4 e_j)
    return e


def qk_sequence(k: int) -> TowerInt:
    """``q_k`` for ``0 <= k <= 3``."""
    if k < 0:
        raise ValueError("k must be >= 0")
    if k >= 4:
        raise DepthUnrepresentable("q_4 has no exactly representable exponent")
    return TowerInt(_exponent(k), literal=(k == 0))


def q_magnitude(ell: int, prec: int) -> TowerMagnitude:
    """``q_ell`` as a tower magnitude; ``q_4`` lands at level 2."""
    if ell <= 3:
        with workprec(prec):
            return qk_sequence(ell).magnitude()
    if ell == 4:
        e3 = _exponent(3)
        with workprec(prec):
            # log q_4 = q_3^4 ln 3 = 3^(4 e3) ln 3
            loglog = 4 * e3 * arb(BASE).log() + arb(BASE).log().log()
        return TowerMagnitude.from_loglog(loglog)
    raise DepthUnrepresentable("q_l for l > 4 is out of range")


def weight(n: int, i: int, ell: int) -> int:
    """``(4(l-1))^(n-i)`` with ``0^0 = 1``."""
    return (4 * (ell - 1)) ** (n - i)


@dataclass(frozen=True)
class LiouvilleTuple:
    n: int
    signs: tuple  # signs[i-1][l-1] in {-1, +1}
    depth: int
    partial_sums: tuple  # partial_sums[k][i-1] = S_k^(i), k <= min(depth, 2)

    def p(self, k: int, i: int) -> int:
        if k >= len(self.partial_sums):
            raise DepthExceeded(f"partial sums stored up to k={len(self.partial_sums) - 1}")
        val = qk_sequence(k).value * self.partial_sums[k][i - 1]
        if val.denominator != 1:
            raise AssertionError("p_k is not an integer")
        return int(val)

    @property
    def sign_string(self) -> str:
        return "".join("+" if s > 0 else "-" for row in self.signs for s in row)


def parse_signs(text: str, n: int, depth: int | None = None) -> tuple:
    """Row-major ``"++-+"`` to an ``n x depth`` sign matrix."""
    text = text.replace("−", "-").strip()
    if not text or any(c not in "+-" for c in text):
        raise ParseError("signs must be a string over {+,-}")
    if depth is None:
        if len(text) % n:
            raise InvalidShape(f"{len(text)} signs do not split into {n} rows")
        depth = len(text) // n
    if len(text) != n * depth:
        raise InvalidShape(f"expected {n * depth} signs, got {len(text)}")
    return tuple(tuple(1 if c == "+" else -1 for c in text[r * depth:(r + 1) * depth]) for r in range(n))


def random_signs(n: int, depth: int, seed: int) -> str:
    rng = random.Random(seed)
    return "".join(rng.choice("+-") for _ in range(n * depth))


def build_tuple(n: int, signs, depth: int) -> LiouvilleTuple:
    if n < 1:
        raise InvalidShape("n must be >= 1")
    if depth < 2:
        raise InvalidShape("depth must be >= 2")
    if isinstance(signs, str):
        signs = parse_signs(signs, n, depth)
    signs = tuple(tuple(int(s) for s in row) for row in signs)
    if len(signs) != n or any(len(row) != depth for row in signs):
        raise InvalidShape(f"signs must have shape {n} x {depth}")
    if any(s not in (-1, 1) for row in signs for s in row):
        raise InvalidShape("signs must be +1 or -1")
    sums = []
    for k in range(min(depth, MAX_K) + 1):
        row = []
        for i in range(1, n + 1):
            s = Fraction(0)
            for ell in range(1, k + 1):
                s += Fraction(signs[i - 1][ell - 1] * weight(n, i, ell), qk_sequence(ell).value)
            row.append(s)
        sums.append(tuple(row))
    return LiouvilleTuple(n, signs, depth, tuple(sums))


# ---------------------------------------------------------------------------
# distances
# ---------------------------------------------------------------------------

def working_precision(k: int, prec: int = 128) -> int:
    """Enough bits to resolve O(1) differences between logs of size ``q_k^4``."""
    big = _exponent(k + 1) if k + 1 <= 3 else _exponent(3)
    return prec + big.bit_length() + 32


@dataclass(frozen=True)
class DistanceInterval:
    """Certified ``log ||q_k x_i||`` together with its ingredients."""

    k: int
    i: int
    dominant: TowerMagnitude
    tail: TowerMagnitude
    log_distance: arb
    ratio_upper: arb  # bound on tail / dominant
    nearest_is_p: bool
    sandwich: bool
    prec: int

    @property
    def magnitude(self) -> TowerMagnitude:
        return TowerMagnitude.from_log(self.log_distance)

    def to_json(self) -> dict:
        return {
            "k": self.k,
            "i": self.i,
            "log_distance": ball_to_json(self.log_distance, self.prec),
            "dominant": self.dominant.to_json(self.prec),
            "tail_bound": self.tail.to_json(self.prec),
            "nearest_is_p": self.nearest_is_p,
            "sandwich": self.sandwich,
        }


def _ratio_test(n: int, i: int, prec: int) -> bool:
    """Consecutive tail terms shrink by 1/2 from ``l = 2`` on.

    Term ratio is ``(l/(l-1))^(n-i) q_l / q_{l+1} <= 2^(n-i) q_l^(1 - q_l^3 ...)``;
    it suffices that ``(n-i+1) ln 2 <= q_2^4 ln 3 - ln q_2``.
    """
    with workprec(prec):
        lhs = (n - i + 1) * arb(2).log()
        q2 = qk_sequence(2)
        rhs = q2.value**4 * arb(BASE).log() - q2.log()
        return bool(lhs < rhs)


def nearest_int_distance(tup: LiouvilleTuple, k: int, i: int, prec: int = 128) -> DistanceInterval:
    """Certified interval for ``||q_k x_i||`` (``k <= 2``, ``k <= depth - 1``)."""
    if k > MAX_K or k > tup.depth - 1 or k < 0:
        raise DepthExceeded(f"k={k} exceeds the verifiable depth")
    if not 1 <= i <= tup.n:
        raise InvalidShape("component index out of range")
    n = tup.n
    wp = working_precision(k, prec)
    if not _ratio_test(n, i, wp):
        raise AssertionError("tail ratio test failed")
    with workprec(wp):
        first = k + 1
        while weight(n, i, first) == 0:
            first += 1
        qk = q_magnitude(k, wp)
        dom = tower_mul_div(
            tower_mul_div(TowerMagnitude.exact(weight(n, i, first)), qk, "mul", wp),
            q_magnitude(first, wp), "div", wp,
        )
        tail = tower_mul_div(
            tower_mul_div(TowerMagnitude.exact(2 * weight(n, i, first + 1)), qk, "mul", wp),
            q_magnitude(first + 1, wp), "div", wp,
        )
        rho = tower_mul_div(tail, dom, "div", wp)
        if rho.level == 2:
            # rho = exp(-exp(LL)); certify it is below 2^-(wp + guard)
            cutoff = arb((wp + LOG_TAIL_GUARD) * math.log(2) + 1).log()
            if not (rho.inverted and rho.payload > cutoff):
                raise AssertionError("level-2 tail is not negligible")
            rho_up = arb(2) ** (-(wp + LOG_TAIL_GUARD))
        else:
            lg = rho.log_abs()
            rho_up = arb(lg.exp().abs_upper())
        if not rho_up < arb(1) / 2:
            raise AssertionError("tail does not dominate")
        spread = arb((-rho_up).log1p().abs_upper())
        log_d = dom.log_abs() + arb(0, spread)
        nearest = bool(log_d < -arb(2).log())
        # sandwich: d in [dom/2, 2 dom]
        sandwich = bool(spread < arb(2).log())
    return DistanceInterval(k, i, dom, tail, log_d, rho_up, nearest, sandwich, wp)


# ---------------------------------------------------------------------------
# chain verification
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Inequality:
    name: str
    lhs: TowerMagnitude
    rhs: TowerMagnitude
    strict: bool
    verdict: str
    margin: arb | None = None  # log(rhs) - log(lhs) when both are level 1

    def to_json(self, prec: int) -> dict:
        out = {
            "name": self.name,
            "lhs": self.lhs.to_json(prec),
            "rhs": self.rhs.to_json(prec),
            "strict": self.strict,
            "verdict": self.verdict,
        }
        if self.margin is not None:
            out["log_margin"] = ball_to_json(self.margin, prec)
        return out


@dataclass(frozen=True)
class ChainRecord:
    k: int
    q_k: TowerInt
    p_k: tuple
    distances: tuple
    inequalities: tuple
    prec: int

    @property
    def passed(self) -> bool:
        return all(q.verdict == PASS for q in self.inequalities)

    @property
    def verdict(self) -> str:
        if self.passed:
            return PASS
        if any(q.verdict == FAIL for q in self.inequalities):
            return FAIL
        return UNKNOWN

    def to_json(self) -> dict:
        return {
            "k": self.k,
            "q_k": self.q_k.to_json(),
            "p_k": [str(p) for p in self.p_k],
            "distances": [d.to_json() for d in self.distances],
            "inequalities": [q.to_json(self.prec) for q in self.inequalities],
            "verdict": self.verdict,
        }


def _verdict(order: Ordering, strict: bool) -> str:
    if order == Ordering.LESS:
        return PASS
    if order == Ordering.EQUAL:
        return FAIL if strict else PASS
    if order == Ordering.GREATER:
        return FAIL
    return UNKNOWN


def _compare(name, lhs, rhs, strict, prec) -> Inequality:
    order = tower_compare(lhs, rhs, prec)
    margin = None
    if lhs.level == 1 and rhs.level == 1:
        with workprec(prec):
            margin = rhs.payload - lhs.payload
    return Inequality(name, lhs, rhs, strict, _verdict(order, strict), margin)


def verify_chain(tup: LiouvilleTuple, k: int, prec: int = 128) -> ChainRecord:
    """Certify ``0 < k^(n-1)||q_k x_n|| <= ... <= ||q_k x_1|| < exp(-q_k^4)``."""
    if k not in (1, 2):
        raise DepthExceeded("the chain is verified for k in {1, 2}")
    if k > tup.depth - 1:
        raise DepthExceeded(f"k={k} needs depth >= {k + 1}")
    n = tup.n
    wp = working_precision(k, prec)
    dists = [nearest_int_distance(tup, k, i, prec) for i in range(1, n + 1)]
    ineqs = []
    with workprec(wp):
        weighted = {}
        for i in range(1, n + 1):
            w = TowerMagnitude.exact(k ** (n - i))
            weighted[i] = tower_mul_div(w, dists[i - 1].magnitude, "mul", wp)
        ineqs.append(_compare(f"0 < k^{n - 1}||q_k x_{n}||", TowerMagnitude.exact(0), weighted[n], True, wp))
        for i in range(n, 1, -1):
            ineqs.append(
                _compare(f"k^{n - i}||q_k x_{i}|| <= k^{n - i + 1}||q_k x_{i - 1}||", weighted[i], weighted[i - 1], False, wp)
            )
        qk = qk_sequence(k)
        psi = TowerMagnitude.from_log(-arb(qk.value) ** 4)
        ineqs.append(_compare("||q_k x_1|| < exp(-q_k^4)", weighted[1], psi, True, wp))
    p_k = tuple(tup.p(k, i) for i in range(1, n + 1))
    return ChainRecord(k, qk_sequence(k), p_k, tuple(dists), tuple(ineqs), wp)


# ---------------------------------------------------------------------------
# certificates
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class LiouvilleCertificate:
    tuple_: LiouvilleTuple
    records: tuple = field(default_factory=tuple)

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.records)

    def to_json(self) -> dict:
        return {
            "n": self.tuple_.n,
            "signs": self.tuple_.sign_string,
            "depth": self.tuple_.depth,
            "records": [r.to_json() for r in self.records],
            "verdict": PASS if self.passed else FAIL,
        }


def certify(n: int, signs, depth: int, kmax: int = 2, prec: int = 128) -> LiouvilleCertificate:
    if kmax > MAX_K:
        raise DepthExceeded("kmax must be <= 2")
    tup = build_tuple(n, signs, depth)
    records = tuple(verify_chain(tup, k, prec) for k in range(1, kmax + 1))
    return LiouvilleCertificate(tup, records)


def check_certificate(data: dict, prec: int = 128) -> tuple:
    """Recompute a certificate and compare it with ``data``.

    Returns ``(ok, problems)``; any mismatch in ``p_k`` or in a verdict is
    a problem.
    """
    try:
        n = int(data["n"])
        depth = int(data["depth"])
        signs = data["signs"]
        records = data["records"]
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"malformed certificate: {exc}") from exc
    tup = build_tuple(n, signs, depth)
    problems = []
    for rec in records:
        k = int(rec["k"])
        fresh = verify_chain(tup, k, prec)
        claimed_p = [str(p) for p in rec.get("p_k", [])]
        if claimed_p != [str(p) for p in fresh.p_k]:
            problems.append(f"k={k}: p_k mismatch")
        claimed = [q.get("verdict") for q in rec.get("inequalities", [])]
        actual = [q.verdict for q in fresh.inequalities]
        if claimed != actual:
            problems.append(f"k={k}: inequality verdicts differ")
        if not fresh.passed:
            problems.append(f"k={k}: chain does not pass")
    if not records:
        problems.append("certificate has no records")
    return (not problems), problems


# ---------------------------------------------------------------------------
# the algebraic-independence criterion with q^-k on the right
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class DurandReport:
    distances: tuple
    verdicts: tuple  # one per inequality
    verdict: str


def _distance_ball(x, q: int) -> arb:
    y = q * x
    if not y.rad() < 0.5:
        return arb(1) / 4 + arb(0, arb(1) / 4)
    # for a ball narrower than 1/2 the nearest integer is one of m - 1, m, m + 1
    m = (y.mid() + arb(1) / 2).floor()
    return abs(y - m).min(abs(y - m - 1)).min(abs(y - m + 1))


def verify_durand(xs, q: int, k: int, n: int | None = None, prec: int = 256) -> DurandReport:
    """Check ``0 < k^(n-1)||q x_n|| <= ... <= ||q x_1|| <= q^-k``.

    ``xs`` are real balls or rationals.  Positivity that cannot be certified
    counts as a failure, since the inequality is strict.
    """
    n = n or len(xs)
    if len(xs) != n:
        raise InvalidShape("need one value per component")
    if q < 1:
        raise ValueError("q must be >= 1")
    with workprec(prec):
        balls = [real_ball(x) for x in xs]
        d = [_distance_ball(x, q) for x in balls]
        verdicts = []
        last = k ** (n - 1) * d[n - 1]
        verdicts.append(PASS if last > 0 else FAIL)
        for i in range(n, 1, -1):
            lhs = k ** (n - i) * d[i - 1]
            rhs = k ** (n - i + 1) * d[i - 2]
            verdicts.append(PASS if lhs <= rhs else (FAIL if lhs > rhs else UNKNOWN))
        bound = arb(q) ** (-k)
        verdicts.append(PASS if d[0] <= bound else (FAIL if d[0] > bound else UNKNOWN))
    overall = PASS if all(v == PASS for v in verdicts) else (FAIL if FAIL in verdicts else UNKNOWN)
    return DurandReport(tuple(d), tuple(verdicts), overall)


def tuple_value(tup: LiouvilleTuple, i: int, prec: int = 256) -> arb:
    """Ball for ``x_i`` from the exact partial sum through ``q_2`` plus the tail."""
    with workprec(prec):
        s = tup.partial_sums[min(tup.depth, MAX_K)][i - 1]
        centre = arb(s.numerator) / s.denominator
        # |sum_{l>=3}| <= 2 c_3 / q_3, far below 2^-prec
        return centre + arb(0, arb(2) ** (-(prec + 8)))
