"""
Period lattices and the Legendre relation
=========================================

Build a few lattices, look at their invariants and quasi-periods, and
check that ``omega2*eta1 - omega1*eta2`` equals ``2*pi*i`` to the working
precision.
"""

import numpy as np
from flint import arb

from quasielliptic.lattice import legendre_pairing, legendre_residual, make_lattice, preset, random_lattice
from quasielliptic.precision import log2_radius

# %%
# The square lattice has g3 = 0 and eta1 = pi.
square = preset("square", prec=128)
print("g2 =", square.g2)
print("g3 =", square.g3)
print("eta1 =", square.eta1)

# %%
# Any two independent periods pair to 2*pi*i times their determinant.
print("pairing((1,0),(0,1)) =", legendre_pairing(square, (1, 0), (0, 1)))
print("pairing((2,1),(1,3)) =", legendre_pairing(square, (2, 1), (1, 3)))

# %%
# The residual is a certified ball around 0; its radius shows how many
# bits survived.
rng = np.random.default_rng(0)
lattices = [preset(name, 128) for name in ("square", "hexagonal", "rectangular-2")]
lattices += [random_lattice(rng, 128) for _ in range(3)]
for idx, lat in enumerate(lattices):
    res = legendre_residual(lat)
    name = lat.source if isinstance(lat.source, str) else f"random #{idx - 2}"
    print(f"{name:>14}: contains 0 = {res.contains(0)}, log2 radius = {log2_radius(res):.1f}")

# %%
# Literals are parsed exactly, so rational bases stay exact until the
# series are evaluated.
lat = make_lattice("1+0.25i", "-0.5+1.5i", prec=128)
print("tau =", lat.tau)
print("eta1 + eta2 =", lat.eta1 + lat.eta2, "(radius", arb(lat.eta1.rad()), ")")
