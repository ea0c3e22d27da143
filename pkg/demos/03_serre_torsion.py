"""
Serre functions and torsion points
==================================

``f_u(z) = sigma(z+u) / (sigma(z) sigma(u)) * exp(-zeta(u) z)`` is
quasi-periodic with multiplier ``exp(lambda(u, w))``.  For a torsion point
``u`` of order ``h`` a suitable exponential makes ``f_u^h`` periodic.
"""

from flint import acb

from quasielliptic.lattice import preset
from quasielliptic.precision import log2_radius, relative_residual, workprec
from quasielliptic.serre import lambda_check, lambda_qp, make_serre_point, product_function, serre_f, torsion_t0
from quasielliptic.weierstrass import make_context

ctx = make_context(preset("square", 128))
lat = ctx.lattice

# %%
# Quasi-periodicity for a generic u.
sp = make_serre_point(ctx, "0.31+0.17i")
with workprec(lat.work_prec):
    z = acb("0.2") + acb("0.45") * acb(0, 1)
    moved = serre_f(ctx, sp, z + lat.omega1, reduce=False)
    rhs = serre_f(ctx, sp, z) * lambda_qp(lat, sp, 1, 0).exp()
    print("f_u(z + w1) / (f_u(z) e^lambda) - 1 :", relative_residual(moved, rhs))

# %%
# Third-torsion point: F(z) = f_u(z)^3 exp(t0 z) is periodic.
with workprec(lat.work_prec):
    u = lat.omega1 / 3
t0, omega0 = torsion_t0(ctx, [3], [u])
print("sum k_i u_i is the period", (omega0.a, omega0.b), "and t0 =", t0)
sps = [make_serre_point(ctx, u)]
with workprec(lat.work_prec):
    base = product_function(ctx, [3], sps, z, t0)
    for name, w in (("omega1", lat.omega1), ("omega2", lat.omega2)):
        res = relative_residual(product_function(ctx, [3], sps, z + w, t0, reduce=False), base)
        print(f"F(z + {name}) vs F(z): log2 radius {log2_radius(res):.1f}, contains 0 = {res.contains(0)}")

# %%
# The quasi-period form lands in 2*pi*i*Z.
for coords in ((1, 0), (0, 1)):
    ratio, n = lambda_check(lat, [3], sps, t0, coords)
    print(f"w = {coords}: (t0 w + 3 lambda(u, w)) / (2 pi i) = {n}")
