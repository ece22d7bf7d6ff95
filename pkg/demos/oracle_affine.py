"""Brute-force ground truth: factor every monic polynomial over F_q.

Run:  python demos/oracle_affine.py
"""

import time

from cyclestat.oracle import FqPoly, exhaustive_stats, factor
from cyclestat.zeta import AffineSpace, build_zeta

f = FqPoly(2, (1, 1, 1)) ** 2 * FqPoly(2, (1, 1)) ** 4  # derivative vanishes identically
print(f"{f} = " + " * ".join(f"({p})^{e}" for p, e in factor(f).factors))

for q, n in ((2, 10), (3, 8), (5, 6)):
    t = time.perf_counter()
    table = exhaustive_stats(q, n)
    z = build_zeta(AffineSpace(q), n)
    same = table.pi[1:] == z.pi[1 : n + 1] and table.conf == z.conf_counts[: n + 1]
    print(f"q={q} n<={n}: pi={table.pi[1:]}  squarefree={table.conf[1:]}  "
          f"matches zeta: {same}  ({time.perf_counter() - t:.2f}s)")

table = exhaustive_stats(2, 6)
print("\nmost common factorization types of degree 6 over F_2:")
top = sorted(table.partitions["sym"][6].items(), key=lambda kv: -kv[1])[:5]
for mu, count in top:
    print(f"  {'+'.join(map(str, mu.parts)):<12} {count}")
