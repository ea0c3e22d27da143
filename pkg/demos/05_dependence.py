"""
Multiplicative and linear dependence
====================================

Bounded-exponent relation search, exact on rationals and heuristic on
balls, plus the quasi-period vectors attached to Serre points.
"""

from fractions import Fraction

from flint import acb

from quasielliptic import dependence as dep
from quasielliptic.lattice import preset
from quasielliptic.precision import workprec
from quasielliptic.serre import make_serre_point
from quasielliptic.weierstrass import make_context

# %%
print(dep.find_multiplicative_relation([2, 4], 2).to_json())
print(dep.find_multiplicative_relation([2, 3], 3).kind)
print(dep.find_relation_two_params([(2, 3), (4, 9)], 2).relation)

# %%
# The reduction route agrees with brute force.
vals = [Fraction(8, 27), Fraction(-2, 3), Fraction(5)]
print("exhaustive:", dep.find_multiplicative_relation(vals, 3, method="exhaustive").relation)
print("lll       :", dep.find_multiplicative_relation(vals, 3, method="lll").relation)

# %%
# A half period yields an integer relation among the lambda vectors.
ctx = make_context(preset("square", 256))
lat = ctx.lattice
with workprec(lat.work_prec):
    half = make_serre_point(ctx, lat.omega1 / 2)
print(dep.check_condition_iv(lat, [], [half], 3).to_json())

# %%
# A generic point shows no relation up to the bound.
generic = make_serre_point(ctx, acb("0.21", "0.34"))
print(dep.check_condition_iv(lat, [], [generic], 3).kind)
print(dep.check_cm_condition(lat, [], [generic], 2).extra)
