"""Period lattices, their invariants, quasi-periods and the Legendre pairing."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

from flint import acb, arb

from . import laurent
from .errors import (
    AmbiguousReduction,
    CertificationFailed,
    DegenerateLattice,
    DependentPeriods,
    InvalidMultiplier,
    ParseError,
    PrecisionUnreachable,
)
from .precision import GUARD_BITS, ball_to_json, complex_ball, exact_complex, is_exact_number, workprec

LATTICE_GUARD = 96
PRESETS = ("square", "hexagonal", "rectangular-2")


@dataclass(frozen=True)
class LatticePoint:
    a: int
    b: int
    value: acb


@dataclass(frozen=True)
class CMMultiplier:
    """``alpha`` with ``alpha*omega1 = m00*omega1 + m01*omega2`` and
    ``alpha*omega2 = m10*omega1 + m11*omega2``."""

    alpha: acb
    matrix: tuple


@dataclass(frozen=True)
class Lattice:
    omega1: acb
    omega2: acb
    prec: int
    g2: acb
    g3: acb
    eta1: acb
    eta2: acb
    reduced: tuple  # (b1, b2), Gauss-reduced basis
    change: tuple  # integer rows: b_i = change[i][0]*omega1 + change[i][1]*omega2
    r0: arb  # lower bound on the shortest nonzero period
    s4: arb  # upper bound on sum' |omega|^-4
    cm_multipliers: tuple = ()
    source: object = None
    _cache: dict = field(default_factory=dict, compare=False, repr=False)

    @property
    def work_prec(self) -> int:
        return self.prec + LATTICE_GUARD

    @property
    def tau(self) -> acb:
        with workprec(self.work_prec):
            return self.omega2 / self.omega1

    def point(self, a: int, b: int) -> LatticePoint:
        with workprec(self.work_prec):
            return LatticePoint(int(a), int(b), a * self.omega1 + b * self.omega2)

    def series(self) -> laurent.SeriesData:
        data = self._cache.get("series")
        if data is None:
            data = laurent.series_data(self.g2, self.g3, self.r0, self.s4, self.work_prec)
            self._cache["series"] = data
        return data

    def at_precision(self, prec: int) -> "Lattice":
        """The same lattice rebuilt at ``prec`` when its source is exact."""
        if prec == self.prec or self.source is None:
            return self
        key = ("prec", prec)
        if key not in self._cache:
            if isinstance(self.source, str):
                self._cache[key] = preset(self.source, prec)
            else:
                o1, o2, alphas = self.source
                self._cache[key] = make_lattice(o1, o2, prec, cm=alphas)
        return self._cache[key]

    def to_json(self) -> dict:
        if isinstance(self.source, str):
            return {"preset": self.source}
        return {
            "omega1": ball_to_json(self.omega1, self.prec)["mid"],
            "omega2": ball_to_json(self.omega2, self.prec)["mid"],
        }


# ---------------------------------------------------------------------------
# construction helpers
# ---------------------------------------------------------------------------

def _gauss_reduce(o1: complex, o2: complex) -> tuple:
    """Lagrange-Gauss reduction on float approximations; returns an integer
    matrix ``M`` with det 1 such that ``(b1, b2) = M (o1, o2)``."""
    M = [[1, 0], [0, 1]]
    b1, b2 = o1, o2
    for _ in range(10_000):
        if abs(b2) < abs(b1):
            b1, b2 = b2, -b1
            M = [M[1], [-M[0][0], -M[0][1]]]
        mu = round((b2 * b1.conjugate()).real / abs(b1) ** 2)
        if mu == 0:
            break
        b2 -= mu * b1
        M[1] = [M[1][0] - mu * M[0][0], M[1][1] - mu * M[0][1]]
    return (tuple(M[0]), tuple(M[1]))


def _combine(row, o1: acb, o2: acb) -> acb:
    return row[0] * o1 + row[1] * o2


def _area(b1: acb, b2: acb) -> arb:
    return (b1.conjugate() * b2).imag


def _shortest_lower_bound(b1: acb, b2: acb) -> arb:
    area = _area(b1, b2)
    n1 = b1.abs_lower()
    cands = [arb(n1), 2 * area / b1.abs_upper()]
    mu = -(b2 * b1.conjugate()).real.mid() / (b1 * b1.conjugate()).real.mid()
    m0 = math.floor(float(mu))
    for m in (m0, m0 + 1):
        cands.append(arb((m * b1 + b2).abs_lower()))
    low = cands[0]
    for c in cands[1:]:
        low = low.min(c)
    return arb(low.lower())


def lattice_power_tail(s: int, radius_: arb, cell_radius: arb, area: arb) -> arb:
    """Upper bound for ``sum_{|omega| >= R} |omega|^-s`` (``s > 2``).

    Uses the point count ``N(r) <= pi (r + Rc)^2 / area`` and summation by parts.
    """
    R, Rc = radius_, cell_radius
    return (
        s * arb.pi() / area
        * (R ** (2 - s) / (s - 2) + 2 * Rc * R ** (1 - s) / (s - 1) + Rc * Rc * R ** (-s) / s)
    ).abs_upper()


def _s4_upper(b1: acb, b2: acb, box: int = 8) -> arb:
    total = arb(0)
    for m in range(-box, box + 1):
        for n in range(-box, box + 1):
            if m == 0 and n == 0:
                continue
            d = arb((m * b1 + n * b2).abs_lower())
            total += 1 / (d * d) ** 2
    area = _area(b1, b2)
    R = (box + 1) * area / b1.abs_upper().max(b2.abs_upper())
    Rc = arb((b1 + b2).abs_upper()).max(arb((b1 - b2).abs_upper())) / 2
    return arb((total + lattice_power_tail(4, R, Rc, area)).abs_upper())


def _divisor_power_sums(n: int, k: int) -> list:
    out = [0] * (n + 1)
    for d in range(1, n + 1):
        dk = d**k
        for m in range(d, n + 1, d):
            out[m] += dk
    return out


def _q_series_tail(q_abs: arb, N: int, k: int) -> arb:
    """Bound for ``sum_{n>N} sigma_k(n) |q|^n`` using ``sigma_k(n) <= 2 n^k``."""
    ratio = (arb(N + 2) / (N + 1)) ** k * q_abs
    if not ratio < 1:
        raise PrecisionUnreachable("q-series does not converge")
    return (2 * arb(N + 1) ** k * q_abs ** (N + 1) / (1 - ratio)).abs_upper()


def _eisenstein(b1: acb, b2: acb, prec: int) -> tuple:
    tau = b2 / b1
    q = (2 * arb.pi() * acb(0, 1) * tau).exp()
    q_abs = q.abs_upper()
    if not q_abs < arb(1) / 8:
        raise PrecisionUnreachable("reduced modulus too small for the q-series")
    log_q = -float(arb(q_abs).log().mid())
    N = max(4, int(prec * math.log(2) / log_q) + 4)
    if N > 100_000:
        raise PrecisionUnreachable("too many q-series terms")
    s3 = _divisor_power_sums(N, 3)
    s5 = _divisor_power_sums(N, 5)
    e4 = acb(0)
    e6 = acb(0)
    for n in range(N, 0, -1):
        e4 = e4 * q + s3[n]
        e6 = e6 * q + s5[n]
    e4 = 1 + 240 * q * e4
    e6 = 1 - 504 * q * e6
    t4 = 240 * _q_series_tail(q_abs, N, 3)
    t6 = 504 * _q_series_tail(q_abs, N, 5)
    e4 += acb(arb(0, t4), arb(0, t4))
    e6 += acb(arb(0, t6), arb(0, t6))
    c = 2 * arb.pi() / b1
    g2 = c**4 * e4 / 12
    g3 = c**6 * e6 / 216
    return g2, g3


def lattice_coordinates(omega1: acb, omega2: acb, z: acb) -> tuple:
    """Real balls ``(a, b)`` with ``z = a*omega1 + b*omega2``."""
    a = (z * omega2.conjugate()).imag / (omega1 * omega2.conjugate()).imag
    b = (z * omega1.conjugate()).imag / (omega2 * omega1.conjugate()).imag
    return a, b


def _unique_integer(x: arb, max_rad: float) -> int | None:
    if not x.rad() < max_rad:
        return None
    m = (x.mid() + arb(1) / 2).floor().unique_fmpz()
    if m is None or not x.contains(m):
        return None
    return int(m)


def recover_lattice_point(lat: "Lattice", z: acb, max_rad: float = 0.25) -> tuple | None:
    """Integer coordinates of ``z`` if it is certifiably a period, else ``None``."""
    with workprec(lat.work_prec):
        a, b = lattice_coordinates(lat.omega1, lat.omega2, acb(z))
        ia = _unique_integer(a, max_rad)
        ib = _unique_integer(b, max_rad)
    if ia is None or ib is None:
        return None
    return ia, ib


def _verify_cm(omega1: acb, omega2: acb, alpha: acb, matrix=None) -> CMMultiplier:
    rows = []
    for w in (omega1, omega2):
        a, b = lattice_coordinates(omega1, omega2, alpha * w)
        ia, ib = _unique_integer(a, 0.25), _unique_integer(b, 0.25)
        if ia is None or ib is None:
            raise InvalidMultiplier("alpha*Omega is not certifiably inside Omega")
        rows.append((ia, ib))
    rows = tuple(rows)
    if matrix is not None and tuple(map(tuple, matrix)) != rows:
        raise InvalidMultiplier(f"stated matrix {matrix} disagrees with recovered {rows}")
    if rows in (((1, 0), (0, 1)), ((-1, 0), (0, -1))) or rows[0][1] == 0 and rows[1][0] == 0 and rows[0][0] == rows[1][1]:
        raise InvalidMultiplier("alpha is a rational integer, not a complex multiplication")
    return CMMultiplier(alpha, rows)


def _coerce(x) -> acb:
    if isinstance(x, acb):
        return x
    try:
        return complex_ball(x)
    except ParseError:
        raise
    except (TypeError, ValueError) as exc:
        raise ParseError(str(exc)) from exc


def make_lattice(omega1, omega2, prec: int = 128, cm=None) -> Lattice:
    """Build a lattice from a period basis.

    ``omega1``/``omega2`` may be balls, rationals, pairs of rationals or complex
    literals such as ``"0.5+1.25i"``.  The basis is stored with
    ``Im(omega2/omega1) > 0`` (``omega2`` negated if needed).  ``cm`` lists
    optional complex multipliers; each is verified by integer coordinate
    recovery.
    """
    exact = is_exact_number(omega1) and is_exact_number(omega2)
    alphas = list(cm or [])
    source = None
    if exact and all(is_exact_number(a) for a in alphas):
        source = (exact_complex(omega1), exact_complex(omega2), tuple(exact_complex(a) for a in alphas))
    with workprec(prec + LATTICE_GUARD) as wp:
        o1 = _coerce(omega1)
        o2 = _coerce(omega2)
        if o1.contains(0):
            raise DegenerateLattice("omega1 is zero")
        im = (o2 / o1).imag
        if im < 0:
            o2 = -o2
            if source is not None:
                re2, im2 = source[1]
                source = (source[0], (-re2, -im2), source[2])
        elif not im > 0:
            raise DegenerateLattice("omega2/omega1 is not certifiably non-real")
        lat = _build(o1, o2, prec, wp, source)
        if alphas:
            mults = tuple(_verify_cm(o1, o2, _coerce(a)) for a in alphas)
            lat = _with_cm(lat, mults)
    return lat


def _with_cm(lat: Lattice, mults: tuple) -> Lattice:
    return Lattice(
        lat.omega1, lat.omega2, lat.prec, lat.g2, lat.g3, lat.eta1, lat.eta2,
        lat.reduced, lat.change, lat.r0, lat.s4, mults, lat.source,
    )


def _build(o1: acb, o2: acb, prec: int, wp: int, source) -> Lattice:
    m1, m2 = complex(o1.mid()), complex(o2.mid())
    change = _gauss_reduce(m1, m2)
    b1 = _combine(change[0], o1, o2)
    b2 = _combine(change[1], o1, o2)
    if not (b2 / b1).imag > 0:
        raise DegenerateLattice("reduced basis lost orientation")
    r0 = _shortest_lower_bound(b1, b2)
    s4 = _s4_upper(b1, b2)
    g2, g3 = _eisenstein(b1, b2, wp)
    data = laurent.series_data(g2, g3, r0, s4, wp)
    # eta on the reduced basis, then mapped back by Z-linearity
    e_b1 = 2 * laurent.local_values(data, b1 / 2).zeta
    e_b2 = 2 * laurent.local_values(data, b2 / 2).zeta
    (p, q), (r, s) = change
    # inverse of [[p, q], [r, s]] (det 1) is [[s, -q], [-r, p]]
    eta1 = s * e_b1 - q * e_b2
    eta2 = -r * e_b1 + p * e_b2
    lat = Lattice(o1, o2, prec, g2, g3, eta1, eta2, (b1, b2), change, r0, s4, (), source)
    lat._cache["series"] = data
    return lat


def preset(name: str, prec: int = 128) -> Lattice:
    """Shipped lattices with their complex multipliers."""
    with workprec(prec + LATTICE_GUARD):
        if name == "square":
            lat = make_lattice(1, (0, 1), prec)
            mults = (_verify_cm(lat.omega1, lat.omega2, acb(0, 1), ((0, 1), (-1, 0))),)
        elif name == "hexagonal":
            rho = acb(arb(1) / 2, arb(3).sqrt() / 2)
            lat = make_lattice(acb(1), rho, prec)
            mults = (_verify_cm(lat.omega1, lat.omega2, rho, ((0, 1), (-1, 1))),)
        elif name == "rectangular-2":
            lat = make_lattice(1, (0, 2), prec)
            mults = ()
        else:
            raise ParseError(f"unknown preset {name!r}; choose from {', '.join(PRESETS)}")
    lat = _with_cm(lat, mults)
    return Lattice(
        lat.omega1, lat.omega2, lat.prec, lat.g2, lat.g3, lat.eta1, lat.eta2,
        lat.reduced, lat.change, lat.r0, lat.s4, lat.cm_multipliers, name, lat._cache,
    )


def lattice_from_spec(spec: dict, prec: int = 128) -> Lattice:
    """``{"preset": name}`` or ``{"omega1": "a+bi", "omega2": "c+di"}``."""
    if "preset" in spec:
        return preset(spec["preset"], prec)
    try:
        return make_lattice(spec["omega1"], spec["omega2"], prec, cm=spec.get("cm"))
    except KeyError as exc:
        raise ParseError(f"lattice spec is missing {exc}") from exc


# ---------------------------------------------------------------------------
# operations
# ---------------------------------------------------------------------------

def eisenstein_invariants(lat: Lattice, prec: int | None = None) -> tuple:
    lat = lat.at_precision(prec) if prec else lat
    return lat.g2, lat.g3


def quasi_period(lat: Lattice, a: int, b: int) -> acb:
    """``eta(a*omega1 + b*omega2) = a*eta1 + b*eta2``."""
    with workprec(lat.work_prec):
        return int(a) * lat.eta1 + int(b) * lat.eta2


def epsilon(lat: Lattice, a: int, b: int) -> int:
    """``+1`` when the half period is itself a period, ``-1`` otherwise."""
    return 1 if a % 2 == 0 and b % 2 == 0 else -1


def legendre_pairing_ball(lat: Lattice, p1: tuple, p2: tuple) -> acb:
    """``(w2*eta(w1) - w1*eta(w2)) / (2 pi i)`` for the periods ``w1``, ``w2``."""
    with workprec(lat.work_prec):
        w1 = lat.point(*p1).value
        w2 = lat.point(*p2).value
        val = w2 * quasi_period(lat, *p1) - w1 * quasi_period(lat, *p2)
        return val / (2 * arb.pi() * acb(0, 1))


def legendre_pairing(lat: Lattice, p1: tuple, p2: tuple) -> int:
    (a1, b1), (a2, b2) = p1, p2
    det = a1 * b2 - a2 * b1
    if det == 0:
        raise DependentPeriods("the two periods are R-linearly dependent")
    k = legendre_pairing_ball(lat, p1, p2)
    if not (k.real.contains(det) and k.imag.contains(0)):
        raise CertificationFailed(f"pairing ball {k} does not contain {det}")
    if not (k.real.rad() < 0.5 and k.imag.rad() < 0.5):
        raise CertificationFailed("pairing ball too wide to isolate an integer")
    return det


def legendre_residual(lat: Lattice) -> acb:
    with workprec(lat.work_prec):
        return lat.omega2 * lat.eta1 - lat.omega1 * lat.eta2 - 2 * arb.pi() * acb(0, 1)


def reduce_mod_lattice(lat: Lattice, z) -> tuple:
    """``z = z0 + a*omega1 + b*omega2`` with ``z0`` in ``[0,1)omega1 + [0,1)omega2``."""
    with workprec(lat.work_prec):
        z = _coerce(z)
        ca, cb = lattice_coordinates(lat.omega1, lat.omega2, z)
        out = []
        for c in (ca, cb):
            n = c.floor().unique_fmpz()
            if n is None:
                # a coordinate certified within 2^-(p-16) of an integer lies on the
                # closed lower edge of the cell
                m = _unique_integer(c, 2.0 ** -(lat.prec - GUARD_BITS))
                if m is None:
                    raise AmbiguousReduction("point too close to a cell edge at this precision")
                n = m
            out.append(int(n))
        a, b = out
        z0 = z - a * lat.omega1 - b * lat.omega2
        return z0, a, b


def cm_pairing_integers(lat: Lattice) -> list:
    """``k_j`` with ``(alpha_j w2) eta(alpha_j w1) - (alpha_j w1) eta(alpha_j w2) = 2 pi i k_j``."""
    out = []
    for m in lat.cm_multipliers:
        out.append(legendre_pairing(lat, m.matrix[0], m.matrix[1]))
    return out


def random_lattice(rng, prec: int = 128, denominator: int = 64) -> Lattice:
    """A lattice ``(omega1, omega1*tau)`` with random dyadic-rational data."""
    def frac(lo, hi):
        return Fraction(int(rng.integers(int(lo * denominator), int(hi * denominator) + 1)), denominator)

    o1 = (frac(0.5, 2), frac(-1, 1))
    tau = (frac(-1, 1), frac(0.5, 2))
    o2 = (o1[0] * tau[0] - o1[1] * tau[1], o1[0] * tau[1] + o1[1] * tau[0])
    return make_lattice(o1, o2, prec)
