"""Seeded verification suites shared by the CLI and the acceptance tests.

Every check compares two independently computed sides.  Shifted points
``z + w`` are evaluated with ``reduce=False`` (halving and doubling only), so
the quasi-periodicity laws are tested rather than assumed.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np
from flint import acb, arb

from . import vandermonde as vdm
from .lattice import (
    PRESETS,
    Lattice,
    epsilon,
    legendre_pairing,
    legendre_residual,
    preset,
    quasi_period,
    random_lattice,
)
from .precision import (
    GUARD_BITS,
    ball_to_json,
    log2_radius,
    relative_residual,
    residual_ok,
    workprec,
)
from .serre import lambda_check, lambda_qp, make_serre_point, product_function, serre_f, torsion_t0
from .weierstrass import evaluate, make_context

SUITES = ("legendre", "periodicity", "sigma-monodromy", "ode", "lambda", "torsion", "vandermonde")
TORSION_GUARD = 20
MAX_SHIFT = 5


@dataclass(frozen=True)
class Check:
    label: str
    residual: object  # ball, Fraction, or None for pure integer checks
    ok: bool
    detail: dict = field(default_factory=dict)

    def to_json(self, prec: int) -> dict:
        out = {"label": self.label, "ok": self.ok}
        if isinstance(self.residual, (acb, arb)):
            out["residual"] = ball_to_json(self.residual, prec)
            out["log2_radius"] = round(log2_radius(self.residual), 2)
        elif self.residual is not None:
            out["residual"] = str(self.residual)
        out.update(self.detail)
        return out


@dataclass(frozen=True)
class SuiteResult:
    name: str
    checks: tuple
    prec: int

    @property
    def ok(self) -> bool:
        return all(c.ok for c in self.checks)

    @property
    def failures(self) -> list:
        return [c for c in self.checks if not c.ok]

    def to_json(self) -> dict:
        return {
            "suite": self.name,
            "ok": self.ok,
            "count": len(self.checks),
            "failures": len(self.failures),
            "checks": [c.to_json(self.prec) for c in self.checks],
        }


# ---------------------------------------------------------------------------
# random data
# ---------------------------------------------------------------------------

def _frac(rng, lo: float, hi: float, den: int = 256) -> Fraction:
    return Fraction(int(rng.integers(int(lo * den), int(hi * den) + 1)), den)


def random_cell_point(rng, lat: Lattice, margin: float = 0.05) -> acb:
    """``s omega1 + t omega2`` with dyadic ``s, t`` away from the cell edges."""
    s = _frac(rng, margin, 1 - margin)
    t = _frac(rng, margin, 1 - margin)
    with workprec(lat.work_prec):
        return lat.omega1 * arb(s.numerator) / s.denominator + lat.omega2 * arb(t.numerator) / t.denominator


def random_shift(rng) -> tuple:
    a, b = (int(x) for x in rng.integers(-MAX_SHIFT, MAX_SHIFT + 1, size=2))
    if a == 0 and b == 0:
        a = 1
    return a, b


def default_lattices(prec: int, seed: int, random_count: int) -> list:
    rng = np.random.default_rng(seed)
    return [preset(name, prec) for name in PRESETS] + [random_lattice(rng, prec) for _ in range(random_count)]


def _cycle(lattices, trials):
    return [lattices[i % len(lattices)] for i in range(trials)]


# ---------------------------------------------------------------------------
# suites
# ---------------------------------------------------------------------------

def suite_legendre(lattices, prec: int, seed: int = 0, trials: int = 0) -> SuiteResult:
    """``omega2 eta1 - omega1 eta2 = 2 pi i`` plus random integer pairings."""
    rng = np.random.default_rng(seed)
    checks = []
    for idx, lat in enumerate(lattices):
        res = legendre_residual(lat)
        checks.append(Check(f"lattice[{idx}] legendre", res, residual_ok(res, prec)))
    for t in range(trials):
        lat = lattices[t % len(lattices)]
        p1 = tuple(int(x) for x in rng.integers(-10, 11, size=2))
        p2 = tuple(int(x) for x in rng.integers(-10, 11, size=2))
        det = p1[0] * p2[1] - p2[0] * p1[1]
        if det == 0:
            continue
        got = legendre_pairing(lat, p1, p2)
        checks.append(Check(f"pairing {p1} {p2}", None, got == det, {"pairing": got}))
    return SuiteResult("legendre", tuple(checks), prec)


def _shifted(ctx, z, w):
    return evaluate(ctx, z + w, reduce=False)


def suite_periodicity(lattices, prec: int, seed: int = 0, trials: int = 50) -> SuiteResult:
    """Translation laws for wp, zeta, sigma and f_u under ``w = a omega1 + b omega2``."""
    rng = np.random.default_rng(seed)
    checks = []
    for t, lat in enumerate(_cycle(lattices, trials)):
        ctx = make_context(lat)
        z = random_cell_point(rng, lat)
        u = random_cell_point(rng, lat)
        a, b = random_shift(rng)
        with workprec(lat.work_prec):
            w = lat.point(a, b).value
            eta = quasi_period(lat, a, b)
            base = evaluate(ctx, z)
            moved = _shifted(ctx, z, w)
            pairs = {
                "wp": (moved.wp, base.wp),
                "zeta": (moved.zeta, base.zeta + eta),
                "sigma": (moved.sigma, epsilon(lat, a, b) * base.sigma * (eta * (z + w / 2)).exp()),
            }
            sp = make_serre_point(ctx, u)
            f_moved = serre_f(ctx, sp, z + w, reduce=False)
            f_base = serre_f(ctx, sp, z)
            pairs["serre"] = (f_moved, f_base * lambda_qp(lat, sp, a, b).exp())
            for name, (lhs, rhs) in pairs.items():
                res = relative_residual(lhs, rhs)
                checks.append(Check(f"trial {t} {name} w=({a},{b})", res, residual_ok(res, prec)))
    return SuiteResult("periodicity", tuple(checks), prec)


def suite_sigma_monodromy(lattices, prec: int, seed: int = 0, trials: int = 50) -> SuiteResult:
    rng = np.random.default_rng(seed)
    checks = []
    for t, lat in enumerate(_cycle(lattices, trials)):
        ctx = make_context(lat)
        z = random_cell_point(rng, lat)
        a, b = random_shift(rng)
        with workprec(lat.work_prec):
            w = lat.point(a, b).value
            eta = quasi_period(lat, a, b)
            lhs = _shifted(ctx, z, w).sigma
            rhs = epsilon(lat, a, b) * evaluate(ctx, z).sigma * (eta * (z + w / 2)).exp()
            res = relative_residual(lhs, rhs)
        checks.append(Check(f"trial {t} w=({a},{b})", res, residual_ok(res, prec)))
    return SuiteResult("sigma-monodromy", tuple(checks), prec)


def finite_difference_step(prec: int) -> arb:
    return arb(2) ** (-(prec // 3))


def suite_ode(lattices, prec: int, seed: int = 0, trials: int = 50) -> SuiteResult:
    """The differential equation plus central differences ``zeta' = -wp``, ``sigma'/sigma = zeta``."""
    rng = np.random.default_rng(seed)
    checks = []
    for t, lat in enumerate(_cycle(lattices, trials)):
        ctx = make_context(lat)
        z = random_cell_point(rng, lat, margin=0.1)
        with workprec(lat.work_prec):
            v = evaluate(ctx, z)
            p, p1 = v.wp, v.wp_prime
            res = relative_residual(p1 * p1, 4 * p**3 - lat.g2 * p - lat.g3)
            checks.append(Check(f"trial {t} ode", res, residual_ok(res, prec)))
            h = finite_difference_step(prec)
            plus, minus = evaluate(ctx, z + h), evaluate(ctx, z - h)
            # third derivatives: zeta''' = -wp'', (log sigma)''' = -wp'
            wp2 = 6 * p * p - lat.g2 / 2
            tol_zeta = h * h * (1 + wp2.abs_upper())
            tol_sigma = h * h * (1 + p1.abs_upper())
            d_zeta = (plus.zeta - minus.zeta) / (2 * h) + p
            d_sigma = (plus.sigma - minus.sigma) / (2 * h) / v.sigma - v.zeta
            # the sigma quotient adds (sigma''' / sigma) / 6; bound it loosely
            tol_sigma += h * h * (1 + (v.zeta**3).abs_upper() + 3 * (v.zeta * p).abs_upper() + p1.abs_upper())
            ok_z = bool(d_zeta.abs_upper() <= tol_zeta)
            ok_s = bool(d_sigma.abs_upper() <= tol_sigma)
            checks.append(Check(f"trial {t} zeta'=-wp", d_zeta, ok_z, {"h_log2": -(prec // 3)}))
            checks.append(Check(f"trial {t} sigma'/sigma=zeta", d_sigma, ok_s, {"h_log2": -(prec // 3)}))
    return SuiteResult("ode", tuple(checks), prec)


def suite_lambda(lattices, prec: int, seed: int = 0, trials: int = 50) -> SuiteResult:
    """``lambda(u, omega1) omega2 - lambda(u, omega2) omega1 = 2 pi i u``."""
    rng = np.random.default_rng(seed)
    checks = []
    for t, lat in enumerate(_cycle(lattices, trials)):
        ctx = make_context(lat)
        u = random_cell_point(rng, lat)
        sp = make_serre_point(ctx, u)
        with workprec(lat.work_prec):
            lhs = lambda_qp(lat, sp, 1, 0) * lat.omega2 - lambda_qp(lat, sp, 0, 1) * lat.omega1
            rhs = 2 * arb.pi() * acb(0, 1) * u
            res = relative_residual(lhs, rhs)
        checks.append(Check(f"trial {t} consequence-legendre", res, residual_ok(res, prec)))
    return SuiteResult("lambda", tuple(checks), prec)


TORSION_POINTS = (
    ("omega1/2", (Fraction(1, 2), Fraction(0)), 2),
    ("omega1/3", (Fraction(1, 3), Fraction(0)), 3),
    ("(omega1+omega2)/2", (Fraction(1, 2), Fraction(1, 2)), 2),
)


def torsion_function(ctx, coords, order: int):
    """``F = f_u^h exp(t0 z)`` for ``u = s omega1 + t omega2`` of order ``h``."""
    lat = ctx.lattice
    with workprec(lat.work_prec):
        s, t = coords
        u = lat.omega1 * arb(s.numerator) / s.denominator + lat.omega2 * arb(t.numerator) / t.denominator
    sp = make_serre_point(ctx, u)
    t0, point = torsion_t0(ctx, [order], [sp])
    return sp, t0, point


def suite_torsion(lattices, prec: int, seed: int = 0, trials: int = 10) -> SuiteResult:
    """Periodicity of ``f_u^h e^{t0 z}`` for torsion ``u`` and the lambda integrality check."""
    rng = np.random.default_rng(seed)
    checks = []
    for idx, lat in enumerate(lattices):
        ctx = make_context(lat)
        for name, coords, order in TORSION_POINTS:
            sp, t0, point = torsion_function(ctx, coords, order)
            for basis in ((1, 0), (0, 1)):
                ratio, integer = lambda_check(lat, [order], [sp], t0, basis)
                checks.append(Check(f"lattice[{idx}] {name} lambda w={basis}", ratio, integer is not None, {"integer": integer}))
            for k in range(trials):
                z = random_cell_point(rng, lat)
                base = product_function(ctx, [order], [sp], z, t0)
                for basis in ((1, 0), (0, 1)):
                    with workprec(lat.work_prec):
                        shifted = z + lat.point(*basis).value
                        moved = product_function(ctx, [order], [sp], shifted, t0, reduce=False)
                        res = relative_residual(moved, base)
                    checks.append(
                        Check(f"lattice[{idx}] {name} z#{k} w={basis}", res, residual_ok(res, prec, TORSION_GUARD))
                    )
    return SuiteResult("torsion", tuple(checks), prec)


# ---------------------------------------------------------------------------
# confluent Vandermonde
# ---------------------------------------------------------------------------

def random_rational_system(rng, max_m: int = 4, max_t: int = 4, den: int = 8):
    m = int(rng.integers(1, max_m + 1))
    blocks = []
    for _ in range(m):
        w = Fraction(int(rng.integers(-4 * den, 4 * den + 1)), den)
        blocks.append((w, int(rng.integers(1, max_t + 1))))
    shift = Fraction(int(rng.integers(-2 * den, 2 * den + 1)), den)
    return vdm.make_system(blocks, shift)


def _annulus_point(rng) -> tuple:
    while True:
        re, im = (Fraction(int(x), 64) for x in rng.integers(-128, 129, size=2))
        r2 = re * re + im * im
        if Fraction(1, 4) <= r2 <= 4:
            return re, im


def random_monic_sequence(rng, D: int) -> tuple:
    seq = []
    for t in range(D):
        coeffs = [(Fraction(int(x), 16), Fraction(0)) for x in rng.integers(-32, 33, size=t)]
        seq.append(tuple(coeffs) + (1,))
    return tuple(seq)


def random_complex_system(rng, max_m: int = 4, max_t: int = 4):
    m = int(rng.integers(1, max_m + 1))
    blocks = [(_annulus_point(rng), int(rng.integers(1, max_t + 1))) for _ in range(m)]
    D = sum(t for _, t in blocks)
    kind = int(rng.integers(0, 3))
    if kind == 0:
        return vdm.make_system(blocks, 0)
    if kind == 1:
        return vdm.make_system(blocks, _annulus_point(rng))
    return vdm.make_system(blocks, 0, random_monic_sequence(rng, max(t for _, t in blocks)) if D else None)


def suite_vandermonde(prec: int, seed: int = 0, exact_trials: int = 100, complex_trials: int = 200) -> SuiteResult:
    rng = np.random.default_rng(seed)
    checks = []
    for t in range(exact_trials):
        sys = random_rational_system(rng)
        closed = vdm.det_closed_form(sys, prec)
        direct = vdm.det_direct(vdm.build_matrix(sys, prec), prec)
        ok = isinstance(closed, Fraction) and closed == direct
        checks.append(Check(f"exact {t} D={sys.D}", closed - direct if ok else None, ok))
    for t in range(complex_trials):
        sys = random_complex_system(rng)
        with workprec(prec + GUARD_BITS):
            closed = vdm.det_closed_form(sys, prec + GUARD_BITS)
            direct = vdm.det_direct(vdm.build_matrix(sys, prec + GUARD_BITS), prec + GUARD_BITS)
            res = closed - direct
        checks.append(Check(f"complex {t} D={sys.D}", res, bool(res.contains(0)), {"D": sys.D}))
    return SuiteResult("vandermonde", tuple(checks), prec)


def superfactorial_check(count: int = 8) -> list:
    return [vdm.superfactorial_k(t) for t in range(count)]


def xi_random_instance(rng, prec: int):
    m = int(rng.integers(1, 4))
    T = int(rng.integers(0, 3))
    ws = []
    while len(ws) < m:
        w = _annulus_point(rng)
        if w not in ws:
            ws.append(w)
    coeffs = [[(Fraction(int(x), 8), Fraction(int(y), 8)) for x, y in rng.integers(-16, 17, size=(m, 2))] for _ in range(T + 1)]
    if all(c == (0, 0) for row in coeffs for c in row):
        coeffs[0][0] = (Fraction(1), Fraction(0))
    A = Fraction(int(rng.integers(0, 100 * 8 + 1)), 8)
    return ws, coeffs, T, A


def suite_xi(prec: int, seed: int = 0, trials: int = 50) -> SuiteResult:
    rng = np.random.default_rng(seed)
    checks = []
    for t in range(trials):
        ws, coeffs, T, A = xi_random_instance(rng, prec)
        rep = vdm.xi_lower_bound_check(ws, coeffs, T, A, prec)
        checks.append(Check(f"xi {t} m={len(ws)} T={T}", None, rep.holds, {"A": str(A)}))
    return SuiteResult("xi", tuple(checks), prec)


# ---------------------------------------------------------------------------
# dispatch
# ---------------------------------------------------------------------------

def run_suite(name: str, lattices, prec: int, seed: int = 0, trials: int | None = None) -> list:
    """Run one named suite (or ``all``) and return a list of SuiteResults."""
    if name == "all":
        out = []
        for s in SUITES:
            out += run_suite(s, lattices, prec, seed, trials)
        return out
    if name not in SUITES:
        raise ValueError(f"unknown suite {name!r}")
    if name == "legendre":
        return [suite_legendre(lattices, prec, seed, trials if trials is not None else 20)]
    if name == "periodicity":
        return [suite_periodicity(lattices, prec, seed, trials or 50)]
    if name == "sigma-monodromy":
        return [suite_sigma_monodromy(lattices, prec, seed, trials or 50)]
    if name == "ode":
        return [suite_ode(lattices, prec, seed, trials or 50)]
    if name == "lambda":
        return [suite_lambda(lattices, prec, seed, trials or 50)]
    if name == "torsion":
        return [suite_torsion(lattices, prec, seed, trials or 10)]
    n = trials or 200
    return [suite_vandermonde(prec, seed, exact_trials=max(1, n // 2), complex_trials=n), suite_xi(prec, seed, max(1, n // 4))]
