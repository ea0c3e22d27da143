"""
Riemann zeta for Re(s) >= 2
===========================

Direct summation with an integral tail bound and Euler-Maclaurin
summation with a rigorous remainder, and the tail inequality
``|zeta(s) - 1| < 2^(1 - sigma)`` for ``sigma >= 3``.
"""

from flint import acb

from quasielliptic import riemann

# %%
print("zeta(3), direct 4000 terms :", riemann.zeta_dirichlet(3, 128, terms=4000))
print("zeta(3), Euler-Maclaurin  :", riemann.zeta_euler_maclaurin(3, 128))
print("zeta(3+100i)              :", riemann.zeta_r(acb(3, 100)))

# %%
for s in (3, 4, acb(3, 100), acb(7.5, -42)):
    rep = riemann.tail_inequality_check(s)
    print(f"s={s}: |zeta(s)-1| = {rep.lhs.mid()}  < {rep.rhs.mid()}  {rep.verdict}")
