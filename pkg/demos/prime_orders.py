"""Multiplicity of one closed point, and character polynomials.

On Sym^n the multiplicity of a fixed degree-k point is asymptotically
geometric; on Conf^n it is Bernoulli.  Expectations of products of binomials
of the prime counts X_k converge to explicit limits.

Run:  python demos/prime_orders.py
"""

from cyclestat.prime_orders import (
    charpoly_expectation,
    charpoly_limit,
    independence_check,
    nu_distribution,
    nu_limit,
)
from cyclestat.zeta import EllipticCurve, build_zeta

z = build_zeta(EllipticCurve(2, 0), 40)

for space in ("sym", "conf"):
    d = nu_distribution(z, 1, 12, space)
    print(f"{space}: P(nu = j) for a rational point, n = 12")
    for j in range(4):
        print(f"  j={j}  exact {float(d[j]):.6f}   limit {float(nu_limit(z, 1, space, j)):.6f}")

rep = independence_check(z, 1, 2, 12, "sym")
print(f"\nlargest joint-vs-product gap for points of degree 1 and 2, n = 12: {float(rep.deviation):.2e}")

print("\nlambda    n=10       n=20       n=40       limit   (Sym)")
for lam in ((1,), (2,), (0, 1), (1, 1)):
    vals = [float(charpoly_expectation(z, lam, n, "sym")) for n in (10, 20, 40)]
    print(f"{str(lam):<9} " + "  ".join(f"{v:.6f}" for v in vals) + f"  {float(charpoly_limit(z, lam, 'sym')):.6f}")
