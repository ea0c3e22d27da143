"""Ball arithmetic substrate and tower magnitudes.

Real and complex balls are Arb's ``arb``/``acb`` types from python-flint: a
binary floating-point midpoint plus a radius, with every operation returning a
ball that contains the exact result.  Arb keeps its working precision in a
process-wide context, so all public functions here and elsewhere in the
package take ``prec`` explicitly and run under :func:`workprec`, which sets
and restores that context.  Results are therefore a function of
``(inputs, prec)`` only.

:class:`TowerMagnitude` stores numbers far outside any floating-point range
(``3**(3**324)`` and its reciprocals) as an exact rational, a ball holding
``log|x|``, or a ball holding ``log(+-log|x|)``.
"""

from __future__ import annotations

import enum
import math
import re
from contextlib import contextmanager
from dataclasses import dataclass
from decimal import ROUND_CEILING, ROUND_HALF_EVEN, Decimal, localcontext
from fractions import Fraction

from flint import acb, arb, ctx, fmpq, fmpz

from .errors import DivisionByZero, ParseError, PromotionUndefined

BallReal = arb
BallComplex = acb

GUARD_BITS = 16
MIN_PREC = 16


@contextmanager
def workprec(prec: int):
    """Run a block with Arb's working precision set to ``prec`` bits."""
    prec = int(prec)
    if prec < MIN_PREC:
        raise ValueError(f"precision must be >= {MIN_PREC} bits, got {prec}")
    old = ctx.prec
    ctx.prec = prec
    try:
        yield prec
    finally:
        ctx.prec = old


# ---------------------------------------------------------------------------
# exact conversions and parsing
# ---------------------------------------------------------------------------

_NUM = r"(?:\d+(?:\.\d*)?|\.\d+)(?:[eE][+-]?\d+)?"
_COMPLEX_RE = re.compile(
    rf"^\s*(?P<re>[+-]?{_NUM})?\s*(?:(?P<isign>[+-])\s*(?P<im>{_NUM})?\s*[ij]"
    rf"|(?P<im_only_sign>[+-]?)(?P<im_only>{_NUM})?[ij])?\s*$"
)


def to_fraction(x) -> Fraction:
    """Exact rational value of an int, Fraction, float, fmpq or decimal string."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, fmpz)):
        return Fraction(int(x))
    if isinstance(x, fmpq):
        return Fraction(int(x.p), int(x.q))
    if isinstance(x, float):
        return Fraction(x)
    if isinstance(x, str):
        try:
            return Fraction(x.strip())
        except ValueError as exc:
            raise ParseError(f"not a rational literal: {x!r}") from exc
    raise TypeError(f"cannot convert {type(x).__name__} to an exact rational")


def parse_complex(text: str) -> tuple[Fraction, Fraction]:
    """Parse ``[-]a[.b][(+|-)c[.d]i]`` (also ``0.25i``, ``-i``) exactly.

    >>> parse_complex("1.5-2i")
    (Fraction(3, 2), Fraction(-2, 1))
    """
    s = text.strip().replace(" ", "").replace("−", "-")
    if not s:
        raise ParseError("empty complex literal")
    if "/" in s and not s.endswith(("i", "j")):
        try:
            return Fraction(s), Fraction(0)
        except ValueError as exc:
            raise ParseError(f"malformed rational literal: {text!r}") from exc
    m = _COMPLEX_RE.match(s)
    if not m:
        raise ParseError(f"malformed complex literal: {text!r}")
    re_part = m.group("re")
    if m.group("isign") is not None:
        im = Fraction(m.group("im") or "1")
        if m.group("isign") == "-":
            im = -im
        return Fraction(re_part or "0"), im
    if m.group("im_only") is not None or (s.endswith(("i", "j")) and re_part is None):
        im = Fraction(m.group("im_only") or "1")
        if m.group("im_only_sign") == "-":
            im = -im
        return Fraction(0), im
    if s.endswith(("i", "j")):
        # "2i" is matched as re="2" followed by a bare unit; treat as imaginary
        im = Fraction(re_part)
        return Fraction(0), im
    return Fraction(re_part), Fraction(0)


def is_exact_number(x) -> bool:
    if isinstance(x, (int, Fraction, fmpz, fmpq)) and not isinstance(x, bool):
        return True
    if isinstance(x, tuple) and len(x) == 2:
        return all(is_exact_number(v) for v in x)
    if isinstance(x, str):
        try:
            parse_complex(x)
            return True
        except ParseError:
            return False
    return False


def exact_complex(x) -> tuple[Fraction, Fraction]:
    """Exact (re, im) of a rational, a pair of rationals or a complex literal."""
    if isinstance(x, str):
        return parse_complex(x)
    if isinstance(x, tuple):
        return to_fraction(x[0]), to_fraction(x[1])
    if isinstance(x, complex):
        return Fraction(x.real), Fraction(x.imag)
    return to_fraction(x), Fraction(0)


def _fraction_to_arb(q: Fraction) -> arb:
    if q.denominator == 1:
        return arb(fmpz(q.numerator))
    return arb(fmpq(q.numerator, q.denominator))


def real_ball(x) -> arb:
    """Coerce to an ``arb`` at the current working precision."""
    if isinstance(x, arb):
        return x
    if isinstance(x, acb):
        if not x.imag.is_zero():
            raise ValueError("expected a real ball")
        return x.real
    if isinstance(x, float):
        return arb(x)
    return _fraction_to_arb(to_fraction(x))


def complex_ball(x) -> acb:
    """Coerce numbers, rational pairs, complex literals or balls to ``acb``."""
    if isinstance(x, acb):
        return x
    if isinstance(x, arb):
        return acb(x)
    if isinstance(x, complex):
        return acb(x.real, x.imag)
    if isinstance(x, float):
        return acb(x)
    re_, im_ = exact_complex(x)
    return acb(_fraction_to_arb(re_), _fraction_to_arb(im_))


def arb_mid_fraction(x: arb) -> Fraction:
    man, exp = x.mid().man_exp()
    man, exp = int(man), int(exp)
    return Fraction(man * 2**exp) if exp >= 0 else Fraction(man, 2 ** (-exp))


def arb_rad_fraction(x: arb) -> Fraction:
    man, exp = x.rad().man_exp()
    man, exp = int(man), int(exp)
    return Fraction(man * 2**exp) if exp >= 0 else Fraction(man, 2 ** (-exp))


# ---------------------------------------------------------------------------
# ball helpers
# ---------------------------------------------------------------------------

def radius(x) -> arb:
    """Upper bound for the radius of a real or complex ball (as an arb)."""
    if isinstance(x, acb):
        return arb(x.real.rad()) + arb(x.imag.rad())
    return arb(x.rad())


def hull(lo, hi) -> arb:
    """Real ball containing ``[lo, hi]`` (lower and upper bounds as balls)."""
    lo, hi = arb(lo), arb(hi)
    return lo + (hi - lo) * arb(0.5, 0.5)


def abs_ball(z) -> arb:
    """Real ball containing ``|z|`` for a complex ball."""
    z = acb(z)
    return hull(z.abs_lower(), z.abs_upper())


def add_error(x, err):
    """Widen ``x`` by a nonnegative error bound ``err`` (arb or number)."""
    e = real_ball(err).abs_upper()
    if isinstance(x, acb):
        return x + acb(arb(0, e), arb(0, e))
    return x + arb(0, e)


def contains_zero(x) -> bool:
    return bool(x.contains(0))


def certainly_nonzero(x) -> bool:
    return not x.contains(0)


def tolerance(prec: int, guard: int = GUARD_BITS) -> arb:
    return arb(2) ** (-(prec - guard))


def residual_ok(res, prec: int, guard: int = GUARD_BITS) -> bool:
    """Project-wide residual test: contains 0 with radius <= 2^-(prec-guard)."""
    if not contains_zero(res):
        return False
    return bool(radius(res) <= tolerance(prec, guard))


def relative_residual(lhs, rhs):
    """``(lhs - rhs) / max(1, |rhs|)``: the residual checked by the suites."""
    scale = rhs.abs_upper() if isinstance(rhs, (acb, arb)) else arb(abs(rhs))
    if scale > 1:
        return (lhs - rhs) / scale
    return lhs - rhs


def log2_radius(x) -> float:
    """log2 of the radius (``-inf`` for exact balls); for reporting only."""
    r = radius(x)
    if r.is_zero():
        return -math.inf
    man, exp = r.abs_upper().mid().man_exp()
    return int(exp) + math.log2(int(man))


# ---------------------------------------------------------------------------
# JSON serialization: {"mid": decimal-string, "rad": decimal-string, "prec": int}
# ---------------------------------------------------------------------------

def _decimal_digits(prec: int) -> int:
    return int(math.ceil(prec * math.log10(2))) + 3


def _fraction_to_decimal(q: Fraction, digits: int, rounding=ROUND_HALF_EVEN) -> Decimal:
    with localcontext() as dctx:
        dctx.prec = digits
        dctx.rounding = rounding
        return Decimal(q.numerator) / Decimal(q.denominator)


def _decimal_str(d: Decimal) -> str:
    with localcontext() as dctx:
        dctx.prec = max(len(d.as_tuple().digits), 1)
        d = d.normalize()
    s = format(d, "f") if abs(d.adjusted()) < 30 else format(d, "E")
    return "0" if s in ("-0", "0E+0") else s


def _real_json_parts(x: arb, prec: int) -> tuple[str, Fraction]:
    mid = arb_mid_fraction(x)
    if mid == 0:
        return "0", Fraction(0)
    d = _fraction_to_decimal(mid, _decimal_digits(prec))
    err = abs(Fraction(d) - mid)
    return _decimal_str(d), err


def _rad_str(r: Fraction) -> str:
    if r == 0:
        return "0"
    return _decimal_str(_fraction_to_decimal(r, 6, ROUND_CEILING))


def ball_to_json(x, prec: int) -> dict:
    """Serialize a ball; the decimal rounding of ``mid`` is folded into ``rad``."""
    if isinstance(x, acb):
        re_s, re_err = _real_json_parts(x.real, prec)
        im_s, im_err = _real_json_parts(x.imag, prec)
        rad = (arb_rad_fraction(x.real) + re_err) + (arb_rad_fraction(x.imag) + im_err)
        if im_s == "0":
            mid = re_s
        else:
            sign = "" if im_s.startswith("-") else "+"
            mid = f"{re_s}{sign}{im_s}i"
        return {"mid": mid, "rad": _rad_str(rad), "prec": int(prec)}
    x = real_ball(x)
    mid, err = _real_json_parts(x, prec)
    return {"mid": mid, "rad": _rad_str(arb_rad_fraction(x) + err), "prec": int(prec)}


def ball_from_json(obj: dict, complex_: bool = True):
    prec = int(obj.get("prec", ctx.prec))
    rad = Fraction(obj["rad"])
    with workprec(max(prec, MIN_PREC) + 8):
        re_, im_ = parse_complex(obj["mid"])
        r = _fraction_to_arb(rad)
        if complex_:
            return acb(_fraction_to_arb(re_) + arb(0, r), _fraction_to_arb(im_) + arb(0, r))
        if im_ != 0:
            raise ParseError("expected a real ball")
        return _fraction_to_arb(re_) + arb(0, r)


# ---------------------------------------------------------------------------
# tower magnitudes
# ---------------------------------------------------------------------------

class Ordering(enum.Enum):
    LESS = "Less"
    GREATER = "Greater"
    EQUAL = "Equal"
    UNKNOWN = "Unknown"

    def flipped(self) -> "Ordering":
        return {Ordering.LESS: Ordering.GREATER, Ordering.GREATER: Ordering.LESS}.get(self, self)


@dataclass(frozen=True)
class TowerMagnitude:
    """A signed real stored at nesting level 0, 1 or 2.

    level 0: ``payload`` is the exact rational value.
    level 1: ``payload`` is a ball containing ``log|x|``.
    level 2: ``payload`` is a ball containing ``log(log|x|)`` for ``|x| > e``;
    with ``inverted=True`` it contains ``log(-log|x|)`` for ``|x| < 1/e``.
    """

    sign: int
    level: int
    payload: object = None
    inverted: bool = False

    def __post_init__(self):
        if self.sign not in (-1, 0, 1):
            raise ValueError("sign must be -1, 0 or +1")
        if self.level not in (0, 1, 2):
            raise ValueError("level must be 0, 1 or 2")
        if self.level == 0 and self.sign != 0:
            q = Fraction(self.payload)
            if (q > 0) - (q < 0) != self.sign:
                raise ValueError("sign disagrees with exact payload")

    # constructors -----------------------------------------------------------
    @classmethod
    def exact(cls, value) -> "TowerMagnitude":
        q = to_fraction(value)
        return cls((q > 0) - (q < 0), 0, q)

    @classmethod
    def from_log(cls, log_abs: arb, sign: int = 1) -> "TowerMagnitude":
        return cls(sign, 1, log_abs)

    @classmethod
    def from_loglog(cls, loglog: arb, sign: int = 1, inverted: bool = False) -> "TowerMagnitude":
        return cls(sign, 2, loglog, inverted)

    @classmethod
    def from_ball(cls, x: arb) -> "TowerMagnitude":
        """Level-1 magnitude of a ball whose sign is certified."""
        if x > 0:
            return cls(1, 1, x.log())
        if x < 0:
            return cls(-1, 1, (-x).log())
        raise ValueError("ball sign is not certified")

    @property
    def is_zero(self) -> bool:
        return self.sign == 0

    def log_abs(self) -> arb | None:
        """Ball for ``log|x|`` at the current precision, ``None`` if it overflows."""
        if self.sign == 0:
            raise ValueError("log of zero")
        if self.level == 0:
            q = abs(Fraction(self.payload))
            return _fraction_to_arb(q).log()
        if self.level == 1:
            return self.payload
        big = self.payload.exp()
        if not big.is_finite():
            return None
        return -big if self.inverted else big

    def to_json(self, prec: int) -> dict:
        out = {"sign": self.sign, "level": self.level}
        if self.level == 0:
            out["value"] = str(self.payload)
        elif self.level == 1:
            out["log"] = ball_to_json(self.payload, prec)
        else:
            out["loglog"] = ball_to_json(self.payload, prec)
            out["inverted"] = self.inverted
        return out

    @classmethod
    def from_json(cls, obj: dict) -> "TowerMagnitude":
        sign, level = int(obj["sign"]), int(obj["level"])
        if level == 0:
            return cls(sign, 0, Fraction(obj["value"]))
        if level == 1:
            return cls(sign, 1, ball_from_json(obj["log"], complex_=False))
        return cls(sign, 2, ball_from_json(obj["loglog"], complex_=False), bool(obj.get("inverted")))

    def __neg__(self) -> "TowerMagnitude":
        payload = -Fraction(self.payload) if self.level == 0 else self.payload
        return TowerMagnitude(-self.sign, self.level, payload, self.inverted)


def tower_promote(x: TowerMagnitude, level: int, prec: int = 128) -> TowerMagnitude:
    """Re-express ``x`` at a higher nesting level."""
    if level < x.level:
        raise ValueError("cannot demote a tower magnitude")
    if level == x.level or x.sign == 0:
        return TowerMagnitude(x.sign, max(level, x.level) if x.sign else level, x.payload if x.sign else None, x.inverted)
    with workprec(prec):
        log_abs = x.log_abs()
        if level == 1:
            return TowerMagnitude(x.sign, 1, log_abs)
        # level 2 requires |log|x|| > 1 certifiably
        if log_abs > 1:
            return TowerMagnitude(x.sign, 2, log_abs.log(), False)
        if log_abs < -1:
            return TowerMagnitude(x.sign, 2, (-log_abs).log(), True)
        raise PromotionUndefined("level 2 needs |x| > e (or |x| < 1/e) certifiably")


def _cmp_balls(a: arb, b: arb) -> Ordering:
    if a < b:
        return Ordering.LESS
    if a > b:
        return Ordering.GREATER
    return Ordering.UNKNOWN


def _cmp_abs(a: TowerMagnitude, b: TowerMagnitude) -> Ordering:
    """Compare |a| and |b| for nonzero a, b."""
    if a.level == 0 and b.level == 0:
        qa, qb = abs(Fraction(a.payload)), abs(Fraction(b.payload))
        return Ordering.EQUAL if qa == qb else (Ordering.LESS if qa < qb else Ordering.GREATER)
    if a.level < 2 and b.level < 2:
        return _cmp_balls(a.log_abs(), b.log_abs())
    if a.level == 2 and b.level == 2:
        if a.inverted != b.inverted:
            return Ordering.LESS if a.inverted else Ordering.GREATER
        order = _cmp_balls(a.payload, b.payload)
        return order.flipped() if a.inverted else order
    if a.level < 2:
        return _cmp_abs(b, a).flipped()
    # a at level 2, b at level <= 1
    lb = b.log_abs()
    if not a.inverted:
        # log|a| = exp(LL) > 1
        if lb <= 1:
            return Ordering.GREATER
        if lb > 0:
            return _cmp_balls(a.payload, lb.log())
        return Ordering.UNKNOWN
    # log|a| = -exp(LL) < -1
    if lb >= -1:
        return Ordering.LESS
    if lb < 0:
        return _cmp_balls((-lb).log(), a.payload)
    return Ordering.UNKNOWN


def tower_compare(a: TowerMagnitude, b: TowerMagnitude, prec: int = 128) -> Ordering:
    """Certified comparison; EQUAL only for identical exact level-0 values."""
    with workprec(prec):
        if a.sign != b.sign:
            return Ordering.LESS if a.sign < b.sign else Ordering.GREATER
        if a.sign == 0:
            return Ordering.EQUAL
        order = _cmp_abs(a, b)
        return order if a.sign > 0 else order.flipped()


def _add_logs_level2(x: TowerMagnitude, log_y: arb) -> TowerMagnitude:
    """log|x| + log_y for x at level 2, kept at level 2."""
    s = -1 if x.inverted else 1
    # s*e^LL + L = s*e^LL * (1 + s*L*e^-LL)
    rel = s * log_y * (-x.payload).exp()
    if not rel.abs_upper() < 1:
        raise PromotionUndefined("level-1 term does not absorb into the level-2 magnitude")
    return TowerMagnitude(1, 2, x.payload + rel.log1p(), x.inverted)


def tower_mul_div(a: TowerMagnitude, b: TowerMagnitude, op: str = "mul", prec: int = 128) -> TowerMagnitude:
    """Product or quotient of two tower magnitudes."""
    if op not in ("mul", "div"):
        raise ValueError("op must be 'mul' or 'div'")
    if op == "div" and b.sign == 0:
        raise DivisionByZero("division by a zero tower magnitude")
    sign = a.sign * b.sign
    if sign == 0:
        return TowerMagnitude.exact(0)
    with workprec(prec):
        if op == "div":
            if b.level == 0:
                b = TowerMagnitude.exact(1 / Fraction(b.payload))
            elif b.level == 1:
                b = TowerMagnitude(b.sign, 1, -b.payload)
            else:
                b = TowerMagnitude(b.sign, 2, b.payload, not b.inverted)
        if a.level == 0 and b.level == 0:
            return TowerMagnitude.exact(Fraction(a.payload) * Fraction(b.payload))
        if a.level < 2 and b.level < 2:
            return TowerMagnitude(sign, 1, a.log_abs() + b.log_abs())
        if a.level == 2 and b.level == 2:
            hi, lo = (a, b) if a.payload > b.payload else (b, a)
            if not hi.payload > lo.payload:
                raise PromotionUndefined("level-2 magnitudes too close to combine")
            ratio = (lo.payload - hi.payload).exp()
            if hi.inverted == lo.inverted:
                return TowerMagnitude(sign, 2, hi.payload + ratio.log1p(), hi.inverted)
            return TowerMagnitude(sign, 2, hi.payload + (-ratio).log1p(), hi.inverted)
        big, small = (a, b) if a.level == 2 else (b, a)
        res = _add_logs_level2(big, small.log_abs())
        return TowerMagnitude(sign, 2, res.payload, res.inverted)
