"""
Weierstrass sigma, zeta and wp
==============================

Evaluate the three functions with certified error balls and watch the
translation laws hold.
"""

from flint import acb

from quasielliptic.lattice import epsilon, preset, quasi_period
from quasielliptic.precision import log2_radius, relative_residual, workprec
from quasielliptic.weierstrass import evaluate, make_context, oracle_values

# %%
ctx = make_context(preset("hexagonal", 128))
lat = ctx.lattice
# Literals are turned into balls at the lattice's working precision; a
# ball built at flint's default 53 bits would carry a 2^-53 radius.
with workprec(lat.work_prec):
    z = acb("0.3") + acb("0.2") * acb(0, 1)
v = evaluate(ctx, z)
print("wp(z)    =", v.wp)
print("wp'(z)   =", v.wp_prime)
print("zeta(z)  =", v.zeta)
print("sigma(z) =", v.sigma)

# %%
# Arb's own theta-function routines give an independent route.
p, zt, sg = oracle_values(lat, z, 160)
print("agree with theta route:", v.wp.overlaps(p), v.zeta.overlaps(zt), v.sigma.overlaps(sg))

# %%
# Shift by w = 2*omega1 - 3*omega2 without using the reduction step:
# wp is periodic, zeta picks up eta(w), sigma the exponential factor.
a, b = 2, -3
with workprec(lat.work_prec):
    w = a * lat.omega1 + b * lat.omega2
    moved = evaluate(ctx, z + w, reduce=False)
    eta = quasi_period(lat, a, b)
    sigma_rhs = epsilon(lat, a, b) * v.sigma * (eta * (z + w / 2)).exp()
    for name, lhs, rhs in (("wp", moved.wp, v.wp), ("zeta", moved.zeta, v.zeta + eta), ("sigma", moved.sigma, sigma_rhs)):
        res = relative_residual(lhs, rhs)
        print(f"{name:>5}: residual contains 0 = {res.contains(0)}, log2 radius = {log2_radius(res):.1f}")

# %%
# The differential equation as a consistency check.
with workprec(lat.work_prec):
    print("wp'^2 - 4wp^3 + g2 wp + g3 =", v.wp_prime**2 - 4 * v.wp**3 + lat.g2 * v.wp + lat.g3)
