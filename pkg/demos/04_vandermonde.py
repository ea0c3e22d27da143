"""
Confluent Vandermonde determinants
==================================

Compare the closed product formula with direct elimination, exactly on
rational data and with balls on complex data.
"""

from fractions import Fraction

import numpy as np

from quasielliptic import vandermonde as vdm
from quasielliptic.suites import random_complex_system

# %%
print("superfactorials:", [vdm.superfactorial_k(t) for t in range(8)])

# %%
# Rational blocks take the exact path.
sys = vdm.make_system([(Fraction(1, 2), 2), (Fraction(3), 3), (Fraction(-2), 1)], shift=Fraction(5, 4))
closed = vdm.det_closed_form(sys)
direct = vdm.det_direct(vdm.build_matrix(sys))
print("closed form =", closed)
print("direct      =", direct)

# %%
# Complex blocks go through ball arithmetic; Arb's determinant is a third route.
rng = np.random.default_rng(1)
for _ in range(3):
    sys = random_complex_system(rng)
    m = vdm.build_matrix(sys)
    closed = vdm.det_closed_form(sys)
    print(sys.multiplicities, vdm.dets_agree(closed, vdm.det_direct(m)), vdm.dets_agree(closed, vdm.det_arb(m)))

# %%
# The lower bound for the exponential polynomials xi_a.
rep = vdm.xi_lower_bound_check(["0.5+i", "-1.25"], [[1, 2], [0, -1]], T=1, A=10)
print("max |xi_a| >=", rep.max_abs_lower, " bound =", rep.bound, " holds:", rep.holds)
