"""Bounded-exponent relation search.

Three questions share one engine: integer vectors ``h`` with ``max|h_i| <= L``
such that

* ``v_1^h_1 ... v_n^h_n = 1`` (multiplicative dependence),
* the same holds for two coordinates at once, or
* ``sum h_i V_i = 0`` for vectors ``V_i`` in ``C^2`` (the quasi-period test).

Small searches are exhaustive.  Larger ones reduce the lattice
``[I | C*x]`` (``C = 2^(p/2)``) and enumerate its short small-tail vectors.
Every reported relation is re-verified: exactly for rational inputs, by a
ball residual otherwise.  Ties go to the smallest max-norm, then the
lexicographically smallest sign-normalized vector.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np
import sympy
from flint import acb, arb, fmpz_mat

from .errors import InvalidMultiplier, ZeroInput
from .lattice import Lattice, legendre_pairing, quasi_period, recover_lattice_point
from .precision import (
    arb_mid_fraction,
    ball_to_json,
    complex_ball,
    exact_complex,
    is_exact_number,
    radius,
    relative_residual,
    residual_ok,
    workprec,
)
from .serre import product_function
from .weierstrass import make_context

EXHAUSTIVE_LIMIT = 10**6
DEPENDENCE_GUARD = 20

DEPENDENT = "Dependent"
NO_RELATION = "NoRelationUpTo"
EXACT = "Exact"
HEURISTIC = "Heuristic"


@dataclass(frozen=True)
class RelationVerdict:
    kind: str
    relation: tuple | None
    certainty: str | None
    bound: int
    precision_bits: int
    residual: object = None
    extra: dict = field(default_factory=dict)

    @property
    def dependent(self) -> bool:
        return self.kind == DEPENDENT

    def to_json(self) -> dict:
        res = None
        if self.residual is not None:
            res = ball_to_json(self.residual, self.precision_bits)
        out = {
            "kind": self.kind,
            "relation": list(self.relation) if self.relation is not None else None,
            "certainty": self.certainty,
            "bound": self.bound,
            "prec": self.precision_bits,
            "residual": res,
        }
        out.update(self.extra)
        return out


# ---------------------------------------------------------------------------
# candidate ordering and enumeration
# ---------------------------------------------------------------------------

def normalize_sign(h) -> tuple:
    h = tuple(int(x) for x in h)
    for x in h:
        if x != 0:
            return h if x > 0 else tuple(-y for y in h)
    return h


def _order_key(h) -> tuple:
    return (max(abs(x) for x in h), tuple(h))


def candidate_grid(n: int, L: int) -> np.ndarray:
    """All nonzero sign-normalized vectors, ordered by max-norm then lexicographically."""
    grid = np.array(list(itertools.product(range(-L, L + 1), repeat=n)), dtype=np.int64)
    nz = grid != 0
    first = np.argmax(nz, axis=1)
    lead = grid[np.arange(len(grid)), first]
    grid = grid[lead > 0]
    norms = np.abs(grid).max(axis=1)
    order = np.argsort(norms, kind="stable")
    return grid[order]


def _use_exhaustive(n: int, L: int, method: str) -> bool:
    if method == "exhaustive":
        return True
    if method == "lll":
        return False
    return (2 * L + 1) ** n <= EXHAUSTIVE_LIMIT


def _to_int_scaled(x: arb, scale_bits: int) -> int:
    q = arb_mid_fraction(x) * (2**scale_bits)
    return round(q)


def _lll_candidates(columns, free_rows, scale_bits: int, tail_bits: int) -> np.ndarray:
    """Relation sublattice basis from the reduced lattice ``[I | C x ; 0 | C f]``.

    ``columns[i]`` is the real tail vector of generator ``i``; ``free_rows``
    are extra tail vectors whose coefficients are not part of the relation.
    """
    n = len(columns)
    k = len(columns[0]) if columns else 0
    rows = []
    for i, col in enumerate(columns):
        rows.append([1 if j == i else 0 for j in range(n)] + [_to_int_scaled(x, scale_bits) for x in col])
    for f in free_rows:
        rows.append([0] * n + [_to_int_scaled(x, scale_bits) for x in f])
    red = fmpz_mat(rows).lll()
    limit = 2**tail_bits
    basis = []
    for r in range(red.nrows()):
        row = [int(red[r, c]) for c in range(n + k)]
        head, tail = row[:n], row[n:]
        if any(head) and all(abs(t) <= limit for t in tail):
            basis.append(head)
    return np.array(basis, dtype=object) if basis else np.zeros((0, n), dtype=object)


def short_vectors(basis, max_norm: int) -> list:
    """Fincke-Pohst enumeration of lattice vectors with ``max|h_i| <= max_norm``.

    Enumerates the Euclidean ball of radius ``sqrt(n) * max_norm`` and filters.
    """
    B = [list(map(int, row)) for row in basis]
    if not B:
        return []
    k, n = len(B), len(B[0])
    Bf = np.array(B, dtype=float)
    # Gram-Schmidt
    bstar = np.zeros_like(Bf)
    mu = np.zeros((k, k))
    for i in range(k):
        v = Bf[i].copy()
        for j in range(i):
            mu[i, j] = Bf[i] @ bstar[j] / (bstar[j] @ bstar[j])
            v -= mu[i, j] * bstar[j]
        bstar[i] = v
    norms = np.array([b @ b for b in bstar])
    if np.any(norms <= 1e-12):
        raise ValueError("relation basis is not independent")
    R2 = n * max_norm**2 * (1 + 1e-9) + 1e-9
    out = []
    coeffs = [0] * k

    def rec(i: int, partial: float):
        center = -sum(coeffs[j] * mu[j, i] for j in range(i + 1, k))
        rem = (R2 - partial) / norms[i]
        if rem < 0:
            return
        span = math.sqrt(rem)
        for c in range(math.ceil(center - span - 1e-9), math.floor(center + span + 1e-9) + 1):
            coeffs[i] = c
            p = partial + (c - center) ** 2 * norms[i]
            if p > R2:
                continue
            if i == 0:
                if any(coeffs):
                    h = [sum(coeffs[r] * B[r][col] for r in range(k)) for col in range(n)]
                    if max(abs(x) for x in h) <= max_norm:
                        out.append(normalize_sign(h))
            else:
                rec(i - 1, p)
        coeffs[i] = 0

    rec(k - 1, 0.0)
    return sorted(set(out), key=_order_key)


# ---------------------------------------------------------------------------
# multiplicative dependence
# ---------------------------------------------------------------------------

def _rational_factor_matrix(values) -> tuple:
    """Sign vector and prime-exponent matrix of nonzero rationals."""
    signs = []
    facts = []
    primes = set()
    for v in values:
        signs.append(1 if v > 0 else -1)
        f = dict(sympy.factorint(abs(v.numerator)))
        for p, e in sympy.factorint(v.denominator).items():
            f[p] = f.get(p, 0) - e
        facts.append(f)
        primes.update(f)
    primes = sorted(primes)
    E = np.array([[f.get(p, 0) for p in primes] for f in facts], dtype=np.int64).reshape(len(values), len(primes))
    neg = np.array([1 if s < 0 else 0 for s in signs], dtype=np.int64)
    return neg, E


def _exact_product_is_one(values, h) -> bool:
    out = Fraction(1)
    for v, e in zip(values, h):
        out *= v ** int(e)
    return out == 1


def _real_rationals(values):
    out = []
    for v in values:
        if not is_exact_number(v):
            return None
        re_, im_ = exact_complex(v)
        if im_ != 0:
            return None
        out.append(re_)
    return out


def _log_columns(balls) -> list:
    cols = []
    for v in balls:
        lg = v.log()
        cols.append((lg.real, lg.imag))
    return cols


def _float_log_residual(cols, grid) -> np.ndarray:
    """``|sum h log|v||`` plus the distance of ``sum h arg v`` to ``2 pi Z``."""
    lr = np.array([float(c[0].mid()) for c in cols])
    la = np.array([float(c[1].mid()) for c in cols])
    g = grid.astype(float)
    mod = g @ lr
    arg = g @ la
    arg = np.abs(arg - 2 * math.pi * np.round(arg / (2 * math.pi)))
    return np.abs(mod) + arg


def _ball_product_residual(balls, h) -> acb:
    out = acb(1)
    for v, e in zip(balls, h):
        if e:
            out *= v ** int(e)
    return out - 1


def _ball_ok(res, prec: int) -> bool:
    return bool(res.contains(0)) and bool(radius(res) <= arb(2) ** (-(prec - DEPENDENCE_GUARD)))


def _coerce_nonzero(values, prec: int) -> list:
    with workprec(prec):
        balls = [complex_ball(v) for v in values]
    for i, b in enumerate(balls):
        if b.contains(0):
            raise ZeroInput(f"value {i + 1} is not certifiably nonzero")
    return balls


def _tail_bits(prec: int, n: int) -> int:
    return max(prec // 8, 8) + n.bit_length()


def _search_multiplicative(groups, L: int, prec: int, method: str) -> RelationVerdict:
    """``groups`` is a list of value lists; a relation must hold in every group."""
    n = len(groups[0])
    rationals = [_real_rationals(g) for g in groups]
    exact = all(r is not None for r in rationals)
    balls = [_coerce_nonzero(g, prec) for g in groups]
    if exact and any(v == 0 for r in rationals for v in r):
        raise ZeroInput("zero input")

    def verify(h):
        if exact:
            if all(_exact_product_is_one(r, h) for r in rationals):
                return True, acb(0)
            return False, None
        with workprec(prec):
            worst = None
            for b in balls:
                res = _ball_product_residual(b, h)
                if not _ball_ok(res, prec):
                    return False, None
                if worst is None or radius(res) > radius(worst):
                    worst = res
            return True, worst

    certainty = EXACT if exact else HEURISTIC
    if _use_exhaustive(n, L, method):
        grid = candidate_grid(n, L)
        if exact:
            mask = np.ones(len(grid), dtype=bool)
            for r in rationals:
                neg, E = _rational_factor_matrix(r)
                if E.shape[1]:
                    mask &= np.all(grid @ E == 0, axis=1)
                mask &= (grid @ neg) % 2 == 0
            hits = grid[mask]
        else:
            with workprec(prec + 16):
                res = np.zeros(len(grid))
                for b in balls:
                    res += _float_log_residual(_log_columns(b), grid)
            hits = grid[res < 1e-6]
        for h in hits:
            ok, residual = verify(h)
            if ok:
                return RelationVerdict(DEPENDENT, normalize_sign(h), certainty, L, prec, residual)
        return RelationVerdict(NO_RELATION, None, None, L, prec, None)

    with workprec(prec + 32):
        columns = [[] for _ in range(n)]
        free = []
        for gi, b in enumerate(balls):
            cols = _log_columns(b)
            for i in range(n):
                columns[i].extend(cols[i])
        k = len(columns[0])
        two_pi = 2 * arb.pi()
        for gi in range(len(balls)):
            row = [arb(0)] * k
            row[2 * gi + 1] = two_pi
            free.append(row)
        basis = _lll_candidates(columns, free, prec // 2, _tail_bits(prec, n))
    for h in short_vectors(basis, L):
        ok, residual = verify(h)
        if ok:
            return RelationVerdict(DEPENDENT, h, certainty, L, prec, residual)
    return RelationVerdict(NO_RELATION, None, None, L, prec, None)


def find_multiplicative_relation(values, L: int, prec: int = 128, method: str = "auto") -> RelationVerdict:
    """Smallest ``h`` with ``prod v_i^h_i = 1`` and ``0 < max|h_i| <= L``."""
    if L < 1:
        raise ValueError("L must be >= 1")
    return _search_multiplicative([list(values)], L, prec, method)


def find_relation_two_params(pairs, L: int, prec: int = 128, method: str = "auto") -> RelationVerdict:
    """``h`` with ``prod v_i^h_i = prod w_i^h_i = 1``."""
    if L < 1:
        raise ValueError("L must be >= 1")
    vs = [p[0] for p in pairs]
    ws = [p[1] for p in pairs]
    return _search_multiplicative([vs, ws], L, prec, method)


# ---------------------------------------------------------------------------
# Q-linear dependence in C^2
# ---------------------------------------------------------------------------

def _linear_search(vectors, H: int, prec: int, method: str) -> RelationVerdict:
    """Integer relation among vectors of ``C^2`` (balls), ``max|h| <= H``."""
    N = len(vectors)

    def verify(h):
        with workprec(prec + 32):
            s1 = acb(0)
            s2 = acb(0)
            for c, (a, b) in zip(h, vectors):
                if c:
                    s1 += int(c) * a
                    s2 += int(c) * b
            if _ball_ok(s1, prec) and _ball_ok(s2, prec):
                return True, s1 if radius(s1) >= radius(s2) else s2
        return False, None

    if _use_exhaustive(N, H, method):
        grid = candidate_grid(N, H)
        real = np.array(
            [[float(a.real.mid()), float(a.imag.mid()), float(b.real.mid()), float(b.imag.mid())] for a, b in vectors]
        )
        scale = max(1.0, float(np.abs(real).max()))
        res = np.abs(grid.astype(float) @ real).max(axis=1)
        hits = grid[res < 1e-8 * scale * H * N]
        for h in hits:
            ok, residual = verify(h)
            if ok:
                return RelationVerdict(DEPENDENT, normalize_sign(h), HEURISTIC, H, prec, residual)
        return RelationVerdict(NO_RELATION, None, None, H, prec, None)

    columns = [[a.real, a.imag, b.real, b.imag] for a, b in vectors]
    basis = _lll_candidates(columns, [], prec // 2, _tail_bits(prec, N))
    for h in short_vectors(basis, H):
        ok, residual = verify(h)
        if ok:
            return RelationVerdict(DEPENDENT, h, HEURISTIC, H, prec, residual)
    return RelationVerdict(NO_RELATION, None, None, H, prec, None)


def _lambda_pair(lat: Lattice, sp, rows) -> tuple:
    """``(lambda(u, w_1'), lambda(u, w_2'))`` for periods given by coordinate rows."""
    out = []
    for a, b in rows:
        w = a * lat.omega1 + b * lat.omega2
        out.append(quasi_period(lat, a, b) * sp.u - w * sp.zeta_u)
    return tuple(out)


def condition_iv_vectors(lat: Lattice, ts, sps) -> list:
    two_pi_i = 2 * arb.pi() * acb(0, 1)
    vecs = [(two_pi_i, acb(0)), (acb(0), two_pi_i)]
    for t in ts:
        t = complex_ball(t)
        vecs.append((t * lat.omega1, t * lat.omega2))
    for sp in sps:
        vecs.append(_lambda_pair(lat, sp, ((1, 0), (0, 1))))
    return vecs


def check_condition_iv(lat: Lattice, ts, sps, H: int, prec: int | None = None, method: str = "auto") -> RelationVerdict:
    """Search ``(h0, h0', h_1..h_{r+s})`` making the ``C^2`` combination vanish."""
    prec = prec or lat.prec
    with workprec(lat.work_prec):
        vecs = condition_iv_vectors(lat, ts, sps)
    return _linear_search(vecs, H, prec, method)


def check_cm_condition(lat: Lattice, ts, sps, H: int, prec: int | None = None, method: str = "auto") -> RelationVerdict:
    """Condition (iv) extended by ``lambda(u_j, alpha_j w)``; also reports ``k_j``."""
    prec = prec or lat.prec
    if len(sps) > len(lat.cm_multipliers):
        raise InvalidMultiplier("one verified complex multiplier is needed per Serre point")
    mults = lat.cm_multipliers[: len(sps)]
    ks = []
    with workprec(lat.work_prec):
        vecs = condition_iv_vectors(lat, ts, sps)
        for sp, m in zip(sps, mults):
            vecs.append(_lambda_pair(lat, sp, m.matrix))
            ks.append(legendre_pairing(lat, m.matrix[0], m.matrix[1]))
    v = _linear_search(vecs, H, prec, method)
    return RelationVerdict(v.kind, v.relation, v.certainty, v.bound, v.precision_bits, v.residual, {"k": ks})


@dataclass(frozen=True)
class ZetaRelationReport:
    holds: bool
    lattice_point: tuple | None
    zeta_residual: acb | None
    periodicity: tuple  # residual balls for omega1, omega2 (empty unless holds)
    periodic: bool

    def to_json(self, prec: int) -> dict:
        return {
            "holds": self.holds,
            "lattice_point": list(self.lattice_point) if self.lattice_point else None,
            "zeta_residual": ball_to_json(self.zeta_residual, prec) if self.zeta_residual is not None else None,
            "periodicity": [ball_to_json(r, prec) for r in self.periodicity],
            "periodic": self.periodic,
        }


def check_zeta_relation(coeffs, sps, lat: Lattice, prec: int | None = None, z=None) -> ZetaRelationReport:
    """``sum a_i u_i`` in the lattice and ``sum a_i zeta(u_i) = eta(sum a_i u_i)``;
    when both hold, ``prod f_{u_i}^{a_i}`` is checked for periodicity at ``z``."""
    prec = prec or lat.prec
    if not any(coeffs):
        raise ValueError("coefficients must not all vanish")
    with workprec(lat.work_prec):
        total = acb(0)
        for a, sp in zip(coeffs, sps):
            total += int(a) * sp.u
        ab = recover_lattice_point(lat, total)
        if ab is None:
            return ZetaRelationReport(False, None, None, (), False)
        res = -quasi_period(lat, *ab)
        for a, sp in zip(coeffs, sps):
            res += int(a) * sp.zeta_u
        if not residual_ok(res, prec):
            return ZetaRelationReport(False, ab, res, (), False)
        ctx = make_context(lat)
        z = complex_ball(z if z is not None else "0.1234+0.0567i")
        base = product_function(ctx, coeffs, sps, z)
        out = []
        for w in (lat.omega1, lat.omega2):
            shifted = product_function(ctx, coeffs, sps, z + w, reduce=False)
            out.append(relative_residual(shifted, base))
        periodic = all(residual_ok(r, prec, DEPENDENCE_GUARD) for r in out)
        return ZetaRelationReport(True, ab, res, tuple(out), periodic)
