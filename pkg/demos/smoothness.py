"""Rough and smooth 0-cycles against the Buchstab and Dickman functions.

A degree-n 0-cycle on the affine line is m-rough when all its prime factors
have degree >= m and m-smooth when all have degree <= m.  With u = n / m the
rough density times n/u approaches omega(u), and the smooth density approaches
rho(u).

Run:  python demos/smoothness.py
"""

from cyclestat.smoothness import buchstab_omega, dickman_rho, smoothness_report
from cyclestat.zeta import AffineSpace, build_zeta

print("u     omega(u)        rho(u)")
for u in (1.5, 2, 3, 4, 6, 10):
    print(f"{u:<5} {buchstab_omega(u):.12f}  {dickman_rho(u):.6e}")

z = build_zeta(AffineSpace(2), 400)
print("\nn    u   Phi scaled  omega   Psi/q^n    rho      |Psi/q^n - rho|")
for n in (50, 100, 200, 400):
    for u in (2.0, 3.0):
        r = smoothness_report(z, n, u)
        print(
            f"{n:<4} {u:<3} {float(r.phi_scaled):.6f}    {r.omega:.4f}  "
            f"{float(r.psi_ratio):.6f}  {r.rho:.6f} {r.psi_residual:.2e}"
        )
