"""Exact truncated power series over the rationals.

A :class:`PowerSeries` of order ``N`` stores the coefficients of
``t^0 .. t^N``.  Coefficients are Python ``int`` whenever they are integral and
:class:`fractions.Fraction` otherwise, so counting code runs on plain big
integers while the arithmetic stays exact in general.  Binary operations
truncate to the smaller order of the two operands.

>>> a = PowerSeries((1, 1, 0, 0))
>>> b = PowerSeries((1, -1, 0, 0))
>>> (a * b).coeffs
(1, 0, -1, 0)
>>> invert(PowerSeries((1, -2, 0, 0))).coeffs
(1, 2, 4, 8)
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb
from numbers import Rational
from typing import Iterable, Sequence

from .errors import InconsistentDescriptor, NegativeExponent, ZeroConstantTerm

__all__ = [
    "PowerSeries",
    "RationalFunctionRep",
    "multiply",
    "invert",
    "expand_rational",
    "euler_product",
    "exp_from_power_sums",
    "power_sums",
    "poly_mul",
    "multichoose",
]


def _normalize(c) -> int | Fraction:
    if isinstance(c, bool):
        return int(c)
    if isinstance(c, int):
        return c
    if isinstance(c, Rational):
        c = Fraction(c)
        return c.numerator if c.denominator == 1 else c
    raise TypeError(f"coefficients must be exact rationals, got {type(c).__name__}")


@dataclass(frozen=True)
class PowerSeries:
    coeffs: tuple

    def __post_init__(self):
        if len(self.coeffs) == 0:
            raise ValueError("a power series needs at least the constant coefficient")
        object.__setattr__(self, "coeffs", tuple(_normalize(c) for c in self.coeffs))

    @classmethod
    def of(cls, coeffs: Iterable, order: int) -> "PowerSeries":
        """Pad with zeros or truncate ``coeffs`` to exactly ``order + 1`` entries."""
        cs = list(coeffs)[: order + 1]
        cs.extend([0] * (order + 1 - len(cs)))
        return cls(tuple(cs))

    @classmethod
    def one(cls, order: int) -> "PowerSeries":
        return cls.of([1], order)

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    def __len__(self):
        return len(self.coeffs)

    def __getitem__(self, n):
        return self.coeffs[n]

    def __iter__(self):
        return iter(self.coeffs)

    def truncate(self, order: int) -> "PowerSeries":
        if order > self.order:
            raise ValueError("cannot extend a truncated series")
        return PowerSeries(self.coeffs[: order + 1])

    def __add__(self, other: "PowerSeries") -> "PowerSeries":
        n = min(self.order, other.order)
        return PowerSeries(tuple(self[i] + other[i] for i in range(n + 1)))

    def __neg__(self) -> "PowerSeries":
        return PowerSeries(tuple(-c for c in self.coeffs))

    def __sub__(self, other: "PowerSeries") -> "PowerSeries":
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, PowerSeries):
            return multiply(self, other)
        return PowerSeries(tuple(c * other for c in self.coeffs))

    __rmul__ = __mul__

    def substitute_power(self, k: int) -> "PowerSeries":
        """The series ``f(t^k)`` at the same truncation order."""
        out = [0] * (self.order + 1)
        for i in range(0, self.order // k + 1):
            out[i * k] = self[i]
        return PowerSeries(tuple(out))

    def is_integral(self) -> bool:
        return all(isinstance(c, int) for c in self.coeffs)


@dataclass(frozen=True)
class RationalFunctionRep:
    """A rational function ``numerator / denominator`` with integer coefficients, low degree first."""

    numerator: tuple
    denominator: tuple

    def __post_init__(self):
        object.__setattr__(self, "numerator", tuple(int(c) for c in self.numerator))
        object.__setattr__(self, "denominator", tuple(int(c) for c in self.denominator))
        if not self.denominator or self.denominator[0] == 0:
            raise ZeroConstantTerm("denominator must have a nonzero constant term")

    def evaluate(self, t) -> Fraction:
        t = Fraction(t)
        num = sum(c * t**i for i, c in enumerate(self.numerator))
        den = sum(c * t**i for i, c in enumerate(self.denominator))
        if den == 0:
            raise ZeroDivisionError("rational function has a pole at this point")
        return Fraction(num) / den


def poly_mul(a: Sequence[int], b: Sequence[int]) -> tuple:
    """Product of two coefficient sequences (full, untruncated)."""
    if not a or not b:
        return ()
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return tuple(out)


def multichoose(m: int, k: int) -> int:
    """Number of size-``k`` multisets drawn from ``m`` types."""
    if k == 0:
        return 1
    if m <= 0:
        return 0
    return comb(m + k - 1, k)


def multiply(a: PowerSeries, b: PowerSeries) -> PowerSeries:
    n = min(a.order, b.order)
    ac, bc = a.coeffs, b.coeffs
    out = []
    for k in range(n + 1):
        s = 0
        for i in range(k + 1):
            x = ac[i]
            if x:
                s += x * bc[k - i]
        out.append(s)
    return PowerSeries(tuple(out))


def _inverse_lead(c) -> int | Fraction:
    if c == 1 or c == -1:
        return c
    return Fraction(1) / c


def invert(a: PowerSeries) -> PowerSeries:
    a0 = a[0]
    if a0 == 0:
        raise ZeroConstantTerm("cannot invert a series with zero constant term")
    inv0 = _inverse_lead(a0)
    out = [inv0]
    for n in range(1, a.order + 1):
        s = 0
        for k in range(1, n + 1):
            x = a[k]
            if x:
                s += x * out[n - k]
        out.append(-s * inv0)
    return PowerSeries(tuple(out))


def expand_rational(r: RationalFunctionRep, N: int) -> PowerSeries:
    """Taylor coefficients of ``r`` at ``t = 0`` through ``t^N`` by long division."""
    den = r.denominator
    if den[0] == 0:
        raise ZeroConstantTerm("denominator must have a nonzero constant term")
    inv0 = _inverse_lead(den[0])
    num = r.numerator
    out = []
    for n in range(N + 1):
        s = num[n] if n < len(num) else 0
        for k in range(1, min(n, len(den) - 1) + 1):
            if den[k]:
                s -= den[k] * out[n - k]
        out.append(s * inv0)
    return PowerSeries(tuple(out))


def exp_from_power_sums(power: Sequence, N: int) -> PowerSeries:
    """Coefficients of ``exp(sum_k power[k] t^k / k)``.

    ``power[k]`` is read for ``k = 1..N`` (``power[0]`` is ignored).  Uses the
    recurrence ``n c_n = sum_{i=1}^n power[i] c_{n-i}``; the result is exact and
    integral whenever the power sums come from a genuine Euler product.
    """
    if len(power) < N + 1:
        raise ValueError("need power sums for degrees 1..N")
    out = [1]
    for n in range(1, N + 1):
        s = 0
        for i in range(1, n + 1):
            p = power[i]
            if p:
                s += p * out[n - i]
        if isinstance(s, int):
            c = s // n if s % n == 0 else Fraction(s, n)
        else:
            c = s / n
        out.append(c)
    return PowerSeries(tuple(out))


def power_sums(f: PowerSeries) -> tuple:
    """Inverse of :func:`exp_from_power_sums`: ``p_n`` with ``f = exp(sum p_n t^n/n)``.

    Requires ``f[0] == 1``.  Entry 0 of the result is 0.
    """
    if f[0] != 1:
        raise ValueError("power sums need a series with constant term 1")
    p = [0]
    for n in range(1, f.order + 1):
        s = n * f[n]
        for k in range(1, n):
            if p[k]:
                s -= p[k] * f[n - k]
        p.append(_normalize(s))
    return tuple(p)


def euler_product(exponents: Sequence[int], kind: str, N: int) -> PowerSeries:
    """Coefficients of ``prod_k (1 - t^k)^(-e_k)`` (multiset) or ``prod_k (1 + t^k)^(e_k)`` (set).

    ``exponents[k - 1]`` is ``e_k``; missing degrees count as ``e_k = 0``.
    The product is expanded through its power sums (``O(N^2)`` big-integer
    operations), never by expanding each factor.
    """
    if kind not in ("multiset", "set"):
        raise ValueError("kind must be 'multiset' or 'set'")
    e = [0] * (N + 1)
    for k, ek in enumerate(exponents[:N], start=1):
        if ek < 0:
            raise NegativeExponent(f"exponent e_{k} = {ek} is negative")
        e[k] = ek
    power = [0] * (N + 1)
    for k in range(1, N + 1):
        if not e[k]:
            continue
        w = k * e[k]
        for j, n in enumerate(range(k, N + 1, k), start=1):
            power[n] += w if (kind == "multiset" or j % 2) else -w
    out = exp_from_power_sums(power, N)
    if not out.is_integral():
        raise InconsistentDescriptor("Euler product produced non-integral coefficients")
    return out
