"""Partitions, cycle indices and the comparison between 0-cycles and permutations.

A 0-cycle of degree ``n`` determines a partition of ``n`` by recording how
many prime factors of each degree it has; on ``Conf^n`` this is the cycle type
of Frobenius acting on its ``n`` geometric points.  Pushing the uniform measure
forward gives splitting measures on partitions, which are compared here with
the uniform measure on ``S_n`` (weights ``1 / z_mu``).

All functions return exact rationals.  Where the true bound involves
``sqrt(q)`` the code works with certified rational lower bounds, so a
reported inequality is a proof for that instance.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb, factorial, isqrt
from typing import Callable, Iterator, Sequence

from .errors import CapExceeded, RangeError
from .series import multichoose
from .zeta import ZetaExpansion

__all__ = [
    "Partition",
    "partitions_of",
    "cycle_index",
    "multichoose_poly",
    "multichoose_sides",
    "multichoose_identity_check",
    "g_n_value",
    "sn_expectation",
    "pushforward_probability",
    "ComparisonConstants",
    "comparison_constants",
    "GBoundCheck",
    "g_square_bound_check",
    "ComparisonRecord",
    "comparison_check",
    "class_function_suite",
    "PARTITION_CAP",
]

PARTITION_CAP = 45


@dataclass(frozen=True)
class Partition:
    """Partition ``1^{mu_1} 2^{mu_2} ... n^{mu_n}`` stored as the tuple ``(mu_1, .., mu_n)``."""

    mult: tuple

    def __post_init__(self):
        mult = tuple(int(x) for x in self.mult)
        if any(x < 0 for x in mult):
            raise ValueError("multiplicities must be nonnegative")
        while mult and mult[-1] == 0:
            mult = mult[:-1]
        object.__setattr__(self, "mult", mult)

    @classmethod
    def from_parts(cls, parts: Sequence[int]) -> "Partition":
        top = max(parts, default=0)
        mult = [0] * top
        for p in parts:
            if p < 1:
                raise ValueError("parts must be positive")
            mult[p - 1] += 1
        return cls(tuple(mult))

    @property
    def n(self) -> int:
        return sum(j * m for j, m in enumerate(self.mult, start=1))

    def __getitem__(self, j: int) -> int:
        return self.mult[j - 1] if 1 <= j <= len(self.mult) else 0

    @property
    def parts(self) -> tuple:
        out = []
        for j in range(len(self.mult), 0, -1):
            out.extend([j] * self.mult[j - 1])
        return tuple(out)

    @property
    def length(self) -> int:
        return sum(self.mult)

    def items(self):
        """Pairs ``(j, mu_j)`` with ``mu_j > 0``."""
        return [(j, m) for j, m in enumerate(self.mult, start=1) if m]

    def z(self) -> int:
        """Centralizer order ``prod_j j^{mu_j} mu_j!`` (so ``1/z`` is the class probability in S_n)."""
        out = 1
        for j, m in self.items():
            out *= j**m * factorial(m)
        return out


def partitions_of(n: int, cap: int = PARTITION_CAP) -> Iterator[Partition]:
    """All partitions of ``n`` in reverse-lexicographic order of their parts.

    >>> [p.parts for p in partitions_of(4)]
    [(4,), (3, 1), (2, 2), (2, 1, 1), (1, 1, 1, 1)]
    """
    if n < 0:
        raise ValueError("n must be nonnegative")
    if n > cap:
        raise CapExceeded(f"enumerating partitions of {n} exceeds the cap {cap}")

    def gen(rest, largest):
        if rest == 0:
            yield ()
            return
        for first in range(min(rest, largest), 0, -1):
            for tail in gen(rest - first, first):
                yield (first,) + tail

    for parts in gen(n, n):
        yield Partition.from_parts(parts)


def cycle_index(n: int, a: Sequence) -> Fraction:
    """``Z_n = (1/n!) sum_{sigma in S_n} prod_j a_j^{X_j(sigma)}`` evaluated at rationals.

    ``a[j - 1]`` is the value of ``a_j``.  Computed by the recurrence
    ``Z_n = (1/n) sum_{l=1}^n a_l Z_{n-l}`` with the table kept per call.
    """
    if n < 0:
        raise ValueError("n must be nonnegative")
    if len(a) < n:
        raise ValueError(f"need values a_1..a_{n}")
    vals = [Fraction(x) for x in a[:n]]
    Z = [Fraction(1)]
    for m in range(1, n + 1):
        Z.append(sum(vals[l - 1] * Z[m - l] for l in range(1, m + 1)) / m)
    return Z[n]


def multichoose_poly(A, i: int) -> Fraction:
    """Generalized multiset coefficient ``A (A + 1) ... (A + i - 1) / i!`` for rational ``A``."""
    A = Fraction(A)
    out = Fraction(1)
    for r in range(i):
        out *= A + r
    return out / factorial(i)


def multichoose_sides(n: int, A, s) -> tuple:
    """Both sides of ``E_{S_n}[prod_j (1 + A s^j)^{X_j}] = sum_{i<=n} ((A multichoose i)) s^i``."""
    A, s = Fraction(A), Fraction(s)
    lhs = cycle_index(n, [1 + A * s**j for j in range(1, n + 1)])
    rhs = sum((multichoose_poly(A, i) * s**i for i in range(n + 1)), Fraction(0))
    return lhs, rhs


def multichoose_identity_check(n: int, A, s) -> bool:
    lhs, rhs = multichoose_sides(n, A, s)
    return lhs == rhs


def _require_pi(z: ZetaExpansion, n: int):
    if n > z.N:
        raise RangeError(f"need closed-point counts through degree {n}, have {z.N}")


def g_n_value(z: ZetaExpansion, mu: Partition) -> Fraction:
    """``g_n(mu) = prod_j binom(pi_j, mu_j) j^{mu_j} mu_j! / q^{d j mu_j}``."""
    _require_pi(z, mu.n)
    out = Fraction(1)
    for j, m in mu.items():
        c = comb(z.pi[j], m)
        if c == 0:
            return Fraction(0)
        out *= Fraction(c * j**m * factorial(m), z.q ** (z.d * j * m))
    return out


def sn_expectation(f: Callable[[Partition], object], n: int) -> Fraction:
    """``E[f, S_n] = sum_mu f(mu) / z_mu``."""
    return sum((Fraction(f(mu)) / mu.z() for mu in partitions_of(n)), Fraction(0))


def pushforward_probability(z: ZetaExpansion, mu: Partition, space: str) -> Fraction:
    """Probability that a uniform 0-cycle of degree ``mu.n`` has ``X_j = mu_j`` for all j.

    On ``conf`` the count of such cycles is ``prod_j binom(pi_j, mu_j)``; on
    ``sym`` each ``mu_j`` counts degree-j primes with multiplicity and the count
    is ``prod_j multichoose(pi_j, mu_j)``.
    """
    n = mu.n
    z.require(n)
    count = 1
    for j, m in mu.items():
        count *= multichoose(z.pi[j], m) if space == "sym" else comb(z.pi[j], m)
        if count == 0:
            return Fraction(0)
    return Fraction(count, z.total(n, space))


# -- constants of the comparison inequality -------------------------------------

_SQRT_DIGITS = 10**12
_ROUND_A = 1000
_SERIES_TERMS = 200


def _sqrt_q_upper(q: int) -> Fraction:
    r = isqrt(q * _SQRT_DIGITS**2)
    return Fraction(r if r * r == q * _SQRT_DIGITS**2 else r + 1, _SQRT_DIGITS)


def _half_power_upper(q: int, j: int) -> Fraction:
    """Rational upper bound for ``q^{j/2}``."""
    if j % 2 == 0:
        return Fraction(q ** (j // 2))
    return q ** ((j - 1) // 2) * _sqrt_q_upper(q)


@dataclass(frozen=True)
class ComparisonConstants:
    """Constants assembled from the descriptor.

    ``A`` certifies ``(j pi_j / q^{dj})^2 <= 1 + A q^{-j/2}`` for ``j <= n``;
    ``A_prime`` is ``max_{m <= N} q^{dm} / |Conf^m|``; ``series_lower`` is a
    rational lower bound for ``(1 - q^{-1/2})^{-A}`` and ``B_lower`` one for
    ``B = A_prime (1 - q^{-1/2})^{-A}``.
    """

    n: int
    A: Fraction
    A_prime: Fraction
    series_lower: Fraction
    B_lower: Fraction
    B: float


def comparison_constants(z: ZetaExpansion, n: int) -> ComparisonConstants:
    _require_pi(z, n)
    q, d = z.q, z.d
    A = Fraction(0)
    for j in range(1, n + 1):
        r2 = Fraction(j * z.pi[j], q ** (d * j)) ** 2
        if r2 > 1:
            A = max(A, (r2 - 1) * _half_power_upper(q, j))
    # round up to a short rational: a larger A is still a valid constant
    A = Fraction(-((-A.numerator * _ROUND_A) // A.denominator), _ROUND_A)
    A_prime = max(Fraction(q ** (d * m), z.conf_counts[m]) for m in range(z.N + 1))
    s_low = 1 / _sqrt_q_upper(q)
    series = Fraction(0)
    term = Fraction(1)
    for i in range(_SERIES_TERMS + 1):
        series += term
        term = term * (A + i) / (i + 1) * s_low
    B_float = float(A_prime) * (1 - q**-0.5) ** (-float(A))
    return ComparisonConstants(n, A, A_prime, series, A_prime * series, B_float)


@dataclass(frozen=True)
class GBoundCheck:
    n: int
    e_g_squared: Fraction
    bound_lower: Fraction
    bound: float
    holds: bool


def g_square_bound_check(z: ZetaExpansion, n: int) -> GBoundCheck:
    """Exact ``E[g_n^2, S_n]`` against ``(1 - q^{-1/2})^{-A}``."""
    c = comparison_constants(z, n)
    e = sn_expectation(lambda mu: g_n_value(z, mu) ** 2, n)
    bound = (1 - z.q**-0.5) ** (-float(c.A))
    return GBoundCheck(n, e, c.series_lower, bound, e <= c.series_lower)


@dataclass(frozen=True)
class ComparisonRecord:
    n: int
    lhs: Fraction
    e_sn: Fraction
    rhs: float
    constants: ComparisonConstants
    holds: bool


def comparison_check(
    z: ZetaExpansion,
    f: Callable[[Partition], object],
    n: int,
    constants: ComparisonConstants | None = None,
) -> ComparisonRecord:
    """``E[f, Conf^n]`` against ``B sqrt(E[f, S_n])`` for a class function ``f`` with values in [0, 1].

    ``holds`` is decided exactly: ``lhs^2 <= B_lower^2 E[f, S_n]``.  Pass
    ``constants`` to reuse one set across many functions.
    """
    z.require(n)
    lhs = Fraction(0)
    e_sn = Fraction(0)
    for mu in partitions_of(n):
        v = Fraction(f(mu))
        if not 0 <= v <= 1:
            raise ValueError(f"class function value {v} at {mu.parts} is outside [0, 1]")
        if v:
            lhs += v * pushforward_probability(z, mu, "conf")
            e_sn += v / mu.z()
    c = constants if constants is not None else comparison_constants(z, n)
    rhs = c.B * float(e_sn) ** 0.5
    return ComparisonRecord(n, lhs, e_sn, rhs, c, lhs * lhs <= c.B_lower**2 * e_sn)


def class_function_suite() -> list:
    """Twenty fixed class functions with values in [0, 1], as ``(name, f)`` pairs."""

    def ind(pred):
        return lambda mu: Fraction(1 if pred(mu) else 0)

    return [
        ("zero", lambda mu: Fraction(0)),
        ("one", lambda mu: Fraction(1)),
        ("no_fixed_point", ind(lambda mu: mu[1] == 0)),
        ("has_fixed_point", ind(lambda mu: mu[1] > 0)),
        ("one_fixed_point", ind(lambda mu: mu[1] == 1)),
        ("two_fixed_points", ind(lambda mu: mu[1] == 2)),
        ("no_two_cycle", ind(lambda mu: mu[2] == 0)),
        ("has_two_cycle", ind(lambda mu: mu[2] > 0)),
        ("has_three_cycle", ind(lambda mu: mu[3] > 0)),
        ("n_cycle", ind(lambda mu: mu.length == 1)),
        ("parts_at_most_two", ind(lambda mu: max(mu.parts, default=0) <= 2)),
        ("largest_part_over_half", ind(lambda mu: 2 * max(mu.parts, default=0) > mu.n)),
        ("largest_part_at_most_half", ind(lambda mu: 2 * max(mu.parts, default=0) <= mu.n)),
        ("distinct_parts", ind(lambda mu: all(m <= 1 for m in mu.mult))),
        ("at_most_two_cycles", ind(lambda mu: mu.length <= 2)),
        ("even_cycle_count", ind(lambda mu: mu.length % 2 == 0)),
        ("even_permutation", ind(lambda mu: (mu.n - mu.length) % 2 == 0)),
        ("smallest_part_over_three", ind(lambda mu: min(mu.parts, default=4) > 3)),
        ("fixed_point_fraction", lambda mu: Fraction(mu[1], mu.n) if mu.n else Fraction(0)),
        ("inverse_cycle_count", lambda mu: Fraction(1, mu.length) if mu.length else Fraction(1)),
    ]
