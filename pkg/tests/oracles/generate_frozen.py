"""Regenerate ``frozen.json`` from mpmath theta functions.

This route shares no code with the package: invariants, quasi-periods and
function values come from Jacobi theta series in mpmath.  Each lattice value
is also cross-checked against Arb's ``elliptic_*`` routines before freezing.
Run from the repository root: ``python3 tests/oracles/generate_frozen.py``.
"""

from __future__ import annotations

import json
from pathlib import Path

import mpmath as mp
from flint import acb, ctx

DPS = 80
DIGITS = 60
OUT = Path(__file__).with_name("frozen.json")
mp.mp.dps = DPS

LATTICES = {
    "square": (1, 1j),
    "hexagonal": (1, mp.mpc(0.5, mp.sqrt(3) / 2)),
    "rectangular-2": (1, 2j),
    "rational": (mp.mpc(1, mp.mpf(1) / 4), mp.mpc(mp.mpf(-1) / 2, mp.mpf(3) / 2)),
}
POINTS = {"p1": mp.mpc("0.3", "0.2"), "p2": mp.mpc("0.5", "0"), "p3": mp.mpc("-0.7", "0.45")}


def theta_data(o1, o2):
    tau = o2 / o1
    q = mp.exp(1j * mp.pi * tau)
    th = {k: mp.jtheta(k, 0, q) for k in (2, 3, 4)}
    d1 = mp.jtheta(1, 0, q, 1)
    d3 = mp.jtheta(1, 0, q, 3)
    return tau, q, th, d1, d3


def invariants(o1, o2):
    tau, q, th, d1, d3 = theta_data(o1, o2)
    t2, t3, t4 = th[2] ** 4, th[3] ** 4, th[4] ** 4
    c = mp.pi**2 / (3 * o1**2)
    e1, e2, e3 = c * (t3 + t4), c * (t2 - t4), -c * (t2 + t3)
    g2 = 2 * (e1**2 + e2**2 + e3**2)
    g3 = 4 * e1 * e2 * e3
    eta1 = -(mp.pi**2) * d3 / (3 * o1 * d1)
    v = mp.pi * tau / 2
    eta2 = eta1 * o2 / o1 + 2 * mp.pi / o1 * mp.jtheta(1, v, q, 1) / mp.jtheta(1, v, q)
    ctx.prec = 300
    ref = acb(str(mp.re(tau)), str(mp.im(tau))).elliptic_invariants()
    for mine, theirs in zip((g2, g3), ref):
        theirs = complex((theirs / acb(str(mp.re(o1)), str(mp.im(o1))) ** (4 if mine is g2 else 6)).mid())
        assert abs(complex(mine) - theirs) < 1e-30 * max(1, abs(theirs)), (mine, theirs)
    return g2, g3, eta1, eta2


def functions(o1, o2, z):
    tau, q, th, d1, d3 = theta_data(o1, o2)
    eta1 = -(mp.pi**2) * d3 / (3 * o1 * d1)
    v = mp.pi * z / o1
    t1, t1d = mp.jtheta(1, v, q), mp.jtheta(1, v, q, 1)
    wp = (mp.pi * th[2] * th[3] * mp.jtheta(4, v, q) / (o1 * t1)) ** 2 - mp.pi**2 / (3 * o1**2) * (th[2] ** 4 + th[3] ** 4)
    zeta = eta1 * z / o1 + mp.pi / o1 * t1d / t1
    sigma = o1 / mp.pi * mp.exp(eta1 * z**2 / (2 * o1)) * t1 / d1
    return wp, zeta, sigma


def arb_check(o1, o2, z, values):
    ctx.prec = 300
    ao1 = acb(str(mp.re(o1)), str(mp.im(o1)))
    ao2 = acb(str(mp.re(o2)), str(mp.im(o2)))
    az = acb(str(mp.re(z)), str(mp.im(z)))
    tau = ao2 / ao1
    u = az / ao1
    ref = (u.elliptic_p(tau) / ao1**2, u.elliptic_zeta(tau) / ao1, u.elliptic_sigma(tau) * ao1)
    for mine, theirs in zip(values, ref):
        diff = complex(theirs.mid()) - complex(mine)
        assert abs(diff) < 1e-40 * max(1, abs(complex(mine))), (mine, theirs)


def s(x) -> dict:
    x = mp.mpc(x)
    return {"re": mp.nstr(x.real, DIGITS, min_fixed=-5, max_fixed=5), "im": mp.nstr(x.imag, DIGITS, min_fixed=-5, max_fixed=5)}


def main():
    mp.mp.dps = DPS
    out = {"_source": "mpmath jtheta, cross-checked with arb elliptic_*", "digits": DIGITS, "lattices": {}}
    for name, (o1, o2) in LATTICES.items():
        o1, o2 = mp.mpc(o1), mp.mpc(o2)
        g2, g3, eta1, eta2 = invariants(o1, o2)
        leg = o2 * eta1 - o1 * eta2 - 2j * mp.pi
        assert abs(leg) < mp.mpf(10) ** (-70), leg
        entry = {"omega1": s(o1), "omega2": s(o2), "g2": s(g2), "g3": s(g3), "eta1": s(eta1), "eta2": s(eta2), "points": {}}
        for label, z in POINTS.items():
            vals = functions(o1, o2, z)
            arb_check(o1, o2, z, [complex(v) for v in vals])
            entry["points"][label] = {"z": s(z), "wp": s(vals[0]), "zeta": s(vals[1]), "sigma": s(vals[2])}
        out["lattices"][name] = entry
    out["constants"] = {
        "zeta3": mp.nstr(mp.zeta(3), DIGITS),
        "zeta2": mp.nstr(mp.pi**2 / 6, DIGITS),
        "zeta4": mp.nstr(mp.pi**4 / 90, DIGITS),
        "zeta_3_100i": s(mp.zeta(mp.mpc(3, 100))),
        "square_g2_gamma": mp.nstr(mp.gamma(mp.mpf(1) / 4) ** 8 / (16 * mp.pi**2), DIGITS),
        "liouville_log_n1_k1": mp.nstr(mp.log(3 * (mp.mpf(3) ** -81 + mp.mpf(3) ** -(3**81)) ), DIGITS),
        "liouville_margin_n1_k1": mp.nstr(80 * mp.log(3) - 81, DIGITS),
        "ln2": mp.nstr(mp.log(2), DIGITS),
        "ln3": mp.nstr(mp.log(3), DIGITS),
    }
    OUT.write_text(json.dumps(out, indent=1) + "\n", encoding="utf-8")
    print(f"wrote {OUT}")


if __name__ == "__main__":
    main()
