"""Confluent Vandermonde matrices ``(r_t(a) w_j^a)``, their closed-form
determinant, a direct-determinant oracle and the lower bound for the
exponential polynomials ``xi_a``."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import sympy
from flint import acb, acb_mat, arb

from .errors import InvalidInput, NotDistinct, ParseError, ZeroInput
from .precision import complex_ball, parse_complex, to_fraction, workprec


def superfactorial_k(t: int) -> int:
    """``k(t) = prod_{j=1}^{t-1} j!`` (1, 1, 1, 2, 12, 288, ...)."""
    if t < 0:
        raise ValueError("t must be nonnegative")
    out = 1
    for j in range(1, t):
        out *= math.factorial(j)
    return out


def k_multi(*ts: int) -> int:
    out = 1
    for t in ts:
        out *= superfactorial_k(t)
    return out


def _is_real_rational(x) -> bool:
    if isinstance(x, (int, Fraction)) and not isinstance(x, bool):
        return True
    if isinstance(x, str):
        try:
            return parse_complex(x)[1] == 0
        except ParseError:
            return False
    return False


def _exact(x) -> Fraction:
    return parse_complex(x)[0] if isinstance(x, str) else to_fraction(x)


@dataclass(frozen=True)
class ConfluentSystem:
    """Blocks ``(w_j, t_j)`` and monic polynomials ``r_0 .. r_{D-1}``.

    ``poly_seq[t]`` holds the ascending coefficients of ``r_t`` (length ``t+1``,
    last entry 1).  When omitted it is ``(A + T)^t`` with ``A = shift``.
    """

    blocks: tuple
    shift: object = 0
    poly_seq: tuple | None = None
    exact: bool = field(default=False)

    @property
    def D(self) -> int:
        return sum(t for _, t in self.blocks)

    @property
    def multiplicities(self) -> tuple:
        return tuple(t for _, t in self.blocks)

    def poly(self, t: int) -> list:
        if self.poly_seq is not None:
            return list(self.poly_seq[t])
        A = self.shift
        return [math.comb(t, s) * A ** (t - s) for s in range(t + 1)]


def make_system(blocks, shift=0, poly_seq=None) -> ConfluentSystem:
    """Validate blocks and pick the exact path when every input is a real rational."""
    blocks = tuple((w, int(t)) for w, t in blocks)
    if not blocks:
        raise InvalidInput("at least one block is required")
    if any(t < 1 for _, t in blocks):
        raise InvalidInput("block multiplicities must be >= 1")
    if poly_seq is not None:
        poly_seq = tuple(tuple(p) for p in poly_seq)
        if len(poly_seq) < max(t for _, t in blocks):
            raise InvalidInput("polynomial sequence too short")
        for t, p in enumerate(poly_seq):
            if len(p) != t + 1 or p[-1] != 1:
                raise InvalidInput(f"r_{t} must be monic of degree {t}")
    values = [w for w, _ in blocks] + [shift]
    if poly_seq is not None:
        values += [c for p in poly_seq for c in p]
    exact = all(_is_real_rational(v) for v in values)
    if exact:
        blocks = tuple((_exact(w), t) for w, t in blocks)
        shift = _exact(shift)
        if poly_seq is not None:
            poly_seq = tuple(tuple(_exact(c) for c in p) for p in poly_seq)
    return ConfluentSystem(blocks, shift, poly_seq, exact)


def parse_blocks(text: str) -> list:
    """``"w=<complex>:t=<int>,..."`` to a list of ``(literal, t)`` pairs."""
    out = []
    for chunk in text.split(","):
        chunk = chunk.strip()
        if not chunk:
            continue
        try:
            wpart, tpart = chunk.split(":")
            key_w, w = wpart.split("=", 1)
            key_t, t = tpart.split("=", 1)
        except ValueError as exc:
            raise ParseError(f"bad block {chunk!r}; expected w=<complex>:t=<int>") from exc
        if key_w.strip() != "w" or key_t.strip() != "t":
            raise ParseError(f"bad block {chunk!r}")
        parse_complex(w)
        try:
            out.append((w.strip(), int(t)))
        except ValueError as exc:
            raise ParseError(f"bad multiplicity in {chunk!r}") from exc
    if not out:
        raise ParseError("no blocks given")
    return out


def _ball_system(sys: ConfluentSystem):
    ws = [complex_ball(w) for w, _ in sys.blocks]
    A = complex_ball(sys.shift)
    if sys.poly_seq is not None:
        polys = [[complex_ball(c) for c in p] for p in sys.poly_seq]
    else:
        polys = None
    return ws, A, polys


def _eval_poly(coeffs, x):
    out = coeffs[-1] * 0
    for c in reversed(coeffs):
        out = out * x + c
    return out


def build_matrix(sys: ConfluentSystem, prec: int = 128) -> list:
    """Rows ``a = 0..D-1``, columns ``(j, t)`` in block order then ``t`` ascending."""
    D = sys.D
    if sys.exact:
        cols = []
        for w, tj in sys.blocks:
            for t in range(tj):
                p = sys.poly(t)
                cols.append([_eval_poly([Fraction(c) for c in p], Fraction(a)) * Fraction(w) ** a for a in range(D)])
        return [[cols[c][a] for c in range(D)] for a in range(D)]
    with workprec(prec):
        ws, A, polys = _ball_system(sys)
        cols = []
        for (w, tj) in zip(ws, sys.multiplicities):
            for t in range(tj):
                if polys is not None:
                    p = polys[t]
                else:
                    p = [math.comb(t, s) * A ** (t - s) for s in range(t + 1)]
                cols.append([_eval_poly(p, acb(a)) * w**a for a in range(D)])
        return [[cols[c][a] for c in range(D)] for a in range(D)]


def det_closed_form(sys: ConfluentSystem, prec: int = 128):
    """``k(t_1..t_m) prod w_j^{t_j(t_j-1)/2} prod_{i<j} (w_j - w_i)^{t_i t_j}``."""
    ts = sys.multiplicities
    if sys.exact:
        ws = [Fraction(w) for w, _ in sys.blocks]
        out = Fraction(k_multi(*ts))
    else:
        with workprec(prec):
            ws = [complex_ball(w) for w, _ in sys.blocks]
        out = None
    with workprec(prec):
        if out is None:
            out = acb(k_multi(*ts))
        for w, t in zip(ws, ts):
            out *= w ** (t * (t - 1) // 2)
        for j in range(len(ws)):
            for i in range(j):
                out *= (ws[j] - ws[i]) ** (ts[i] * ts[j])
        return out


def _det_fraction(rows) -> Fraction:
    m = [list(map(Fraction, r)) for r in rows]
    n = len(m)
    det = Fraction(1)
    for c in range(n):
        piv = next((r for r in range(c, n) if m[r][c] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != c:
            m[c], m[piv] = m[piv], m[c]
            det = -det
        det *= m[c][c]
        inv = 1 / m[c][c]
        for r in range(c + 1, n):
            f = m[r][c] * inv
            if f:
                for k in range(c, n):
                    m[r][k] -= f * m[c][k]
    return det


def _det_ball(rows) -> acb:
    m = [[complex_ball(x) for x in r] for r in rows]
    n = len(m)
    det = acb(1)
    for c in range(n):
        piv = max(range(c, n), key=lambda r: float(m[r][c].abs_lower()))
        if m[piv][c].contains(0):
            # no certified pivot: let Arb bound the remaining minor
            sub = acb_mat([[m[r][k] for k in range(c, n)] for r in range(c, n)])
            return det * sub.det()
        if piv != c:
            m[c], m[piv] = m[piv], m[c]
            det = -det
        det *= m[c][c]
        inv = 1 / m[c][c]
        for r in range(c + 1, n):
            f = m[r][c] * inv
            for k in range(c + 1, n):
                m[r][k] -= f * m[c][k]
    return det


def det_direct(matrix, prec: int = 128):
    """Determinant by elimination; exact when all entries are exact rationals."""
    n = len(matrix)
    if any(len(r) != n for r in matrix):
        raise InvalidInput("matrix must be square")
    if n == 0:
        return Fraction(1)
    if all(_is_real_rational(x) for r in matrix for x in r):
        return _det_fraction(matrix)
    with workprec(prec):
        return _det_ball(matrix)


def det_arb(matrix, prec: int = 128) -> acb:
    """Arb's determinant, used as a second oracle."""
    with workprec(prec):
        return acb_mat([[complex_ball(x) for x in r] for r in matrix]).det()


def dets_agree(a, b, prec: int = 128) -> bool:
    if isinstance(a, Fraction) and isinstance(b, Fraction):
        return a == b
    with workprec(prec):
        return bool((complex_ball(a) - complex_ball(b)).contains(0))


# ---------------------------------------------------------------------------
# lower bound for xi_a
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class XiReport:
    xi: tuple  # balls xi_0 .. xi_{m(T+1)}
    max_abs_lower: arb
    eta: arb
    bound: arb
    holds: bool
    inverse_norm: arb


def _check_distinct(ws):
    for i, w in enumerate(ws):
        if w.contains(0):
            raise ZeroInput(f"w_{i + 1} is not certifiably nonzero")
        for j in range(i):
            if (w - ws[j]).contains(0):
                raise NotDistinct(f"w_{j + 1} and w_{i + 1} are not certifiably distinct")


def inverse_norm_upper(ws, T: int, prec: int = 128) -> arb:
    """Upper bound for the infinity norm of the inverse of ``(a^t w_j^a)``."""
    m = len(ws)
    D = m * (T + 1)
    with workprec(prec):
        rows = [[acb(a) ** t * ws[j] ** a for j in range(m) for t in range(T + 1)] for a in range(D)]
        inv = acb_mat(rows).inv()
        best = arb(0)
        for r in range(D):
            s = arb(0)
            for c in range(D):
                s += inv[r, c].abs_upper()
            best = best.max(s)
        return arb(best.abs_upper())


def xi_lower_bound_check(ws, coeffs, T: int, A, prec: int = 128) -> XiReport:
    """Check ``max |xi_a| >= eta * max(1, A)^(-m T (T+1))``.

    ``coeffs[t][j]`` is ``q_{t,j}``.  Writing ``M(A) = M0 U(A)`` with
    ``U`` the binomial shift and ``|U(-A)|_inf <= (1 + A)^T`` gives the
    instantiation ``eta = |q|_inf / (2^T |M0^{-1}|_inf)``.
    """
    m = len(ws)
    if len(coeffs) != T + 1 or any(len(row) != m for row in coeffs):
        raise InvalidInput("coefficients must have shape (T+1) x m")
    with workprec(prec):
        ws = [complex_ball(w) for w in ws]
        q = [[complex_ball(c) for c in row] for row in coeffs]
        if all(c.contains(0) and c.rad() == 0 and c.mid() == 0 for row in q for c in row):
            raise InvalidInput("coefficients must not all vanish")
        _check_distinct(ws)
        A = complex_ball(A).real
        if A < 0:
            raise InvalidInput("A must be >= 0")
        xi = []
        for a in range(m * (T + 1) + 1):
            s = acb(0)
            for t in range(T + 1):
                base = (A + a) ** t
                for j in range(m):
                    s += q[t][j] * base * ws[j] ** a
            xi.append(s)
        max_lower = arb(0)
        for x in xi:
            max_lower = max_lower.max(arb(x.abs_lower()))
        q_norm = arb(0)
        for row in q:
            for c in row:
                q_norm = q_norm.max(arb(c.abs_lower()))
        inv_norm = inverse_norm_upper(ws, T, prec)
        eta = q_norm / (arb(2) ** T * inv_norm)
        big = arb(1).max(A)
        bound = eta * big ** (-(m * T * (T + 1)))
        holds = bool(max_lower >= bound.abs_upper())
        return XiReport(tuple(xi), max_lower, eta, bound, holds, inv_norm)


def xi_nontrivial_solution(ws, T: int):
    """Nonzero ``q`` with ``xi_a = 0`` for all ``a`` when the ``w``'s coincide.

    Exact rational inputs only; returns ``None`` when the system is injective.
    """
    m = len(ws)
    ws = [_exact(w) for w in ws]
    rows = [
        [sympy.Rational(a) ** t * sympy.Rational(ws[j]) ** a for t in range(T + 1) for j in range(m)]
        for a in range(m * (T + 1) + 1)
    ]
    ns = sympy.Matrix(rows).nullspace()
    if not ns:
        return None
    v = ns[0]
    return [[Fraction(str(v[t * m + j])) for j in range(m)] for t in range(T + 1)]
