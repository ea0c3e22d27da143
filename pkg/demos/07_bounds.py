"""
Two quantitative lower bounds
=============================

A one-logarithm lower bound kept in log space and a root-distance bound
for integer polynomials.
"""

from fractions import Fraction

from quasielliptic import bounds

# %%
for alpha, beta in ((2, 1), (3, 1), (1, Fraction(1, 10**9))):
    rep = bounds.baker_lower_bound(alpha, beta)
    print(f"alpha={alpha} beta={beta}: log bound = {rep.bound.payload.mid()}, distance = {rep.distance}, {rep.verdict}")

# %%
for poly, theta in (("-2,0,1", Fraction(3, 2)), ("1,-2,1", Fraction(11, 10)), ("0,1", 0)):
    rep = bounds.feldman_check(poly, theta)
    print(f"F=[{poly}] theta={theta}: multiplicity {rep.multiplicity}, lhs {rep.lhs}, rhs {rep.rhs}, {rep.verdict}")
