"""Count tables of three varieties over F_2 and the prime number theorem for 0-cycles.

Run:  python demos/zeta_and_pnt.py
"""

from cyclestat.zeta import AffineSpace, EllipticCurve, ProjectiveSpace, build_zeta, pnt_report, ring_z_at

VARIETIES = {
    "affine line": AffineSpace(2),
    "projective line": ProjectiveSpace(2),
    "elliptic curve, trace 0": EllipticCurve(2, 0),
}

for name, desc in VARIETIES.items():
    z = build_zeta(desc, 12)
    print(f"{name} over F_2")
    print("  |Sym^n|  ", z.sym_counts[:9])
    print("  |Conf^n| ", z.conf_counts[:9])
    print("  pi_n     ", z.pi[1:9])
    print(f"  ring zeta at 1/q = {ring_z_at(z)}")

# pi_n / |Sym^n| tends to 1 / (n Z), with an error of order q^(-n/2) / n.
# The last column rescales the error by n q^(n/2); it should stay bounded.
# With trace 0 the Frobenius roots are +-i sqrt(2), so the leading error
# term cancels at odd n and the scaled error alternates between small and ~1.
z = build_zeta(EllipticCurve(2, 0), 40)
print("\nn   pi_n/|Sym^n|     1/(n Z)         scaled error")
for row in pnt_report(z, range(5, 41)).rows:
    if row.n > 8 and row.n % 8:
        continue
    print(f"{row.n:<3} {float(row.pi_ratio):.12f}  {float(row.predicted):.12f}  {row.scaled_error:.4f}")
