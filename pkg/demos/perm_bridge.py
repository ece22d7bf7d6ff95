"""Comparing the splitting measure on Conf^n with the uniform measure on S_n.

Every squarefree 0-cycle has a cycle type (how many prime factors of each
degree).  The comparison inequality bounds E[f, Conf^n] by B sqrt(E[f, S_n])
for class functions f with values in [0, 1]; every check below is exact.

Run:  python demos/perm_bridge.py
"""

from fractions import Fraction

from cyclestat.perm_bridge import (
    Partition,
    class_function_suite,
    comparison_check,
    comparison_constants,
    g_square_bound_check,
    multichoose_sides,
    pushforward_probability,
)
from cyclestat.zeta import ProjectiveSpace, build_zeta

lhs, rhs = multichoose_sides(12, Fraction(7, 3), Fraction(-2, 5))
print(f"multichoose identity at n=12, A=7/3, s=-2/5: both sides {lhs} ({lhs == rhs})")

z = build_zeta(ProjectiveSpace(2), 30)
c = comparison_constants(z, 10)
print(f"\nprojective line over F_2: A = {c.A}, A' = {c.A_prime}, B ~ {c.B:.4f}")

mu = Partition.from_parts([3, 2, 1])
print(f"P(cycle type 3+2+1) on Conf^6: {pushforward_probability(z, mu, 'conf')}, on S_6: {Fraction(1, mu.z())}")

g = g_square_bound_check(z, 20)
print(f"E[g_20^2, S_20] = {float(g.e_g_squared):.6f} <= {g.bound:.4f}: {g.holds}")

print("\nclass function            E[f, Conf^10]  B sqrt(E[f, S_10])")
for name, f in class_function_suite()[:8]:
    rec = comparison_check(z, f, 10, constants=c)
    print(f"{name:<25} {float(rec.lhs):.6f}       {rec.rhs:.6f}   {'ok' if rec.holds else 'FAILS'}")
