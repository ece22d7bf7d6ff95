"""Window statistics of a random 0-cycle of degree 500 on the affine line over F_2.

For each sample, phi(C) is the multiset of log(deg P) over distinct prime
factors.  mu_{r,L}(C) is the share of windows [t, t + L] with t in [0, log n]
that hold exactly r of those points.  At desk scale these means sit
near the Poisson values e^{-L} L^r / r!.

Run:  python demos/poisson_windows.py
"""

import math
import warnings

from cyclestat.poisson import PoissonParams, draw_profiles, omega_moments, poisson_experiment
from cyclestat.zeta import AffineSpace, build_zeta

n, samples, seed = 500, 2000, 42
z = build_zeta(AffineSpace(2), n)
profiles = draw_profiles(z, n, "sym", samples, seed)
print(f"{samples} exact uniform samples of degree {n}, seed {seed}")
print("first sample (degree, multiplicity, distinct):", profiles[0].parts)

print("\nr  L    mean mu   Poisson   mean |deviation|")
for r, L in ((0, 1.0), (1, 1.0), (2, 1.0), (1, 0.5)):
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")  # desk-scale n is outside the theorem's (r, L) range
        rep = poisson_experiment(z, PoissonParams(n=n, L=L, r=r, samples=samples, seed=seed), profiles=profiles)
    print(f"{r}  {L:<4} {rep.mean_mu:.4f}    {rep.expected:.4f}    {rep.mean_abs_deviation:.4f}")

m = omega_moments(z, n, profiles=profiles)
exact = omega_moments(z, 40)
print(f"\nmean Omega / log n = {m.mean_omega / math.log(n):.3f}, mean l / log n = {m.mean_length / math.log(n):.3f}")
print(f"exact at n = 40: E[Omega] = {float(exact.mean_omega):.4f}, Var = {float(exact.var_omega):.4f}")
