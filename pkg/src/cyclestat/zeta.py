"""Variety descriptors and their exact zeta-function count tables.

A variety enters the library only through its zeta function

    Z(V, t) = exp(sum_k |V(F_{q^k})| t^k / k) = sum_n |Sym^n V(F_q)| t^n,

given either as Weil polynomials ``P_0 .. P_2d`` (odd ones in the numerator),
as a finite list of point counts, or as one of the built-in families.
:func:`build_zeta` turns a descriptor into a :class:`ZetaExpansion` holding
``|Sym^n|``, ``|Conf^n|``, the closed-point counts ``pi_k`` and the constant
``Z̊(V, q^-d)`` that governs the prime number theorem for 0-cycles.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import reduce
from typing import Callable, Iterable, Union

import numpy as np

from .errors import (
    InconsistentDescriptor,
    InvalidDescriptor,
    NonPositiveValue,
    NotRational,
    RangeError,
    TruncationTooShort,
)
from .series import (
    PowerSeries,
    RationalFunctionRep,
    euler_product,
    exp_from_power_sums,
    expand_rational,
    invert,
    poly_mul,
    power_sums,
)

__all__ = [
    "WeilPolynomials",
    "PointCounts",
    "AffineSpace",
    "ProjectiveSpace",
    "EllipticCurve",
    "VarietyDescriptor",
    "ZetaExpansion",
    "PntRow",
    "PntReport",
    "CheckResult",
    "ValidationReport",
    "build_zeta",
    "closed_point_counts",
    "conf_counts",
    "ring_z_at",
    "pnt_report",
    "validate_descriptor",
    "restricted_counts",
    "mobius",
    "is_prime_power",
    "descriptor_from_dict",
    "descriptor_to_dict",
    "load_descriptor",
]


def mobius(n: int) -> int:
    if n < 1:
        raise ValueError("mobius is defined for n >= 1")
    result, p = 1, 2
    while p * p <= n:
        if n % p == 0:
            n //= p
            if n % p == 0:
                return 0
            result = -result
        p += 1
    return -result if n > 1 else result


def is_prime_power(q: int) -> bool:
    if q < 2:
        return False
    p = 2
    while p * p <= q:
        if q % p == 0:
            while q % p == 0:
                q //= p
            return q == 1
        p += 1
    return True


def _check_qd(q, d):
    if not isinstance(q, int) or not is_prime_power(q):
        raise InvalidDescriptor(f"q = {q!r} is not a prime power")
    if not isinstance(d, int) or d < 1:
        raise InvalidDescriptor(f"dimension d = {d!r} must be a positive integer")


def _trim(p: Iterable[int]) -> tuple:
    p = [int(c) for c in p]
    while len(p) > 1 and p[-1] == 0:
        p.pop()
    return tuple(p)


@dataclass(frozen=True)
class WeilPolynomials:
    """``Z = (P_1 P_3 ... P_{2d-1}) / (P_0 P_2 ... P_{2d})`` with ``P_{2d} = 1 - q^d t``."""

    q: int
    d: int
    polys: tuple

    def __post_init__(self):
        _check_qd(self.q, self.d)
        polys = tuple(_trim(p) for p in self.polys)
        object.__setattr__(self, "polys", polys)
        if len(polys) != 2 * self.d + 1:
            raise InvalidDescriptor(f"need {2 * self.d + 1} Weil polynomials, got {len(polys)}")
        for i, p in enumerate(polys):
            if not p or p[0] != 1:
                raise InvalidDescriptor(f"P_{i} must have constant term 1")
        if polys[-1] != (1, -(self.q**self.d)):
            raise InvalidDescriptor(f"P_{2 * self.d} must be 1 - q^d t")

    def weil(self) -> "WeilPolynomials":
        return self


@dataclass(frozen=True)
class PointCounts:
    """Point counts ``|V(F_{q^k})|`` for ``k = 1..K``."""

    q: int
    d: int
    counts: tuple

    def __post_init__(self):
        _check_qd(self.q, self.d)
        object.__setattr__(self, "counts", tuple(int(c) for c in self.counts))

    def weil(self):
        return None


@dataclass(frozen=True)
class AffineSpace:
    q: int
    d: int = 1

    def __post_init__(self):
        _check_qd(self.q, self.d)

    def weil(self) -> WeilPolynomials:
        polys = [(1,)] * (2 * self.d) + [(1, -(self.q**self.d))]
        return WeilPolynomials(self.q, self.d, tuple(polys))


@dataclass(frozen=True)
class ProjectiveSpace:
    q: int
    d: int = 1

    def __post_init__(self):
        _check_qd(self.q, self.d)

    def weil(self) -> WeilPolynomials:
        polys = []
        for i in range(2 * self.d + 1):
            polys.append((1, -(self.q ** (i // 2))) if i % 2 == 0 else (1,))
        return WeilPolynomials(self.q, self.d, tuple(polys))


@dataclass(frozen=True)
class EllipticCurve:
    """Elliptic curve over ``F_q`` with Frobenius trace ``a`` (so ``|E(F_q)| = q + 1 - a``)."""

    q: int
    a: int

    def __post_init__(self):
        _check_qd(self.q, 1)
        if self.a * self.a > 4 * self.q:
            raise InvalidDescriptor(f"trace a = {self.a} violates the Hasse bound |a| <= 2 sqrt(q)")

    @property
    def d(self) -> int:
        return 1

    def weil(self) -> WeilPolynomials:
        return WeilPolynomials(self.q, 1, ((1, -1), (1, -self.a, self.q), (1, -self.q)))


VarietyDescriptor = Union[WeilPolynomials, PointCounts, AffineSpace, ProjectiveSpace, EllipticCurve]


def _rational_zeta(w: WeilPolynomials) -> RationalFunctionRep:
    num = reduce(poly_mul, w.polys[1::2], (1,))
    den = reduce(poly_mul, w.polys[0::2], (1,))
    return RationalFunctionRep(num, den)


@dataclass(frozen=True)
class ZetaExpansion:
    """Exact count tables of a variety through degree ``N``.

    ``pi`` and ``point_counts`` are indexed by degree, so entry 0 is a
    placeholder 0 and ``pi[k]`` is the number of closed points of degree k.
    ``ring_z_value`` is ``None`` for descriptors without a rational zeta function.
    """

    descriptor: VarietyDescriptor
    q: int
    d: int
    N: int
    sym_counts: tuple
    conf_counts: tuple
    pi: tuple
    point_counts: tuple
    ring_z_value: Fraction | None = field(default=None)

    @property
    def zeta(self) -> PowerSeries:
        return PowerSeries(self.sym_counts)

    def require(self, n: int):
        if not 0 <= n <= self.N:
            raise RangeError(f"degree {n} outside the computed range 0..{self.N}")

    def total(self, n: int, space: str) -> int:
        self.require(n)
        if space == "sym":
            return self.sym_counts[n]
        if space == "conf":
            return self.conf_counts[n]
        raise ValueError(f"space must be 'sym' or 'conf', got {space!r}")


def _mobius_invert(point_counts) -> tuple:
    pi = [0]
    for n in range(1, len(point_counts)):
        s = sum(mobius(n // k) * point_counts[k] for k in range(1, n + 1) if n % k == 0)
        if s % n:
            raise InconsistentDescriptor(f"pi_{n} = {Fraction(s, n)} is not an integer")
        if s < 0:
            raise InconsistentDescriptor(f"pi_{n} = {s // n} is negative")
        pi.append(s // n)
    return tuple(pi)


def _conf_from_sym(sym: PowerSeries) -> PowerSeries:
    return sym * invert(sym.substitute_power(2))


def build_zeta(desc: VarietyDescriptor, N: int) -> ZetaExpansion:
    if N < 0:
        raise RangeError("truncation order must be nonnegative")
    weil = desc.weil()
    if weil is not None:
        sym = expand_rational(_rational_zeta(weil), N)
        points = power_sums(sym)
    else:
        if len(desc.counts) < N:
            raise TruncationTooShort(f"need {N} point counts, descriptor has {len(desc.counts)}")
        points = (0,) + desc.counts[:N]
        sym = exp_from_power_sums(points, N)
    if not sym.is_integral():
        raise InconsistentDescriptor("|Sym^n V(F_q)| is not integral")
    if any(c < 0 for c in sym):
        raise InconsistentDescriptor("|Sym^n V(F_q)| is negative")
    pi = _mobius_invert(points)
    conf = _conf_from_sym(sym)
    check = euler_product(pi[1:], "set", N)
    if conf.coeffs != check.coeffs:
        raise InconsistentDescriptor("Z(t)/Z(t^2) disagrees with the squarefree Euler product")
    if any(c > s for c, s in zip(conf, sym)):
        raise InconsistentDescriptor("|Conf^n| exceeds |Sym^n|")
    return ZetaExpansion(
        descriptor=desc,
        q=desc.q,
        d=desc.d,
        N=N,
        sym_counts=sym.coeffs,
        conf_counts=conf.coeffs,
        pi=pi,
        point_counts=tuple(points),
        ring_z_value=_ring_z(weil) if weil is not None else None,
    )


def closed_point_counts(z: ZetaExpansion) -> tuple:
    """``pi_n = (1/n) sum_{k | n} mu(n/k) |V(F_{q^k})|``, recomputed from the point counts."""
    return _mobius_invert(z.point_counts)


def conf_counts(z: ZetaExpansion) -> tuple:
    """``|Conf^n V(F_q)|`` as coefficients of ``Z(t)/Z(t^2)``, checked against ``prod (1 + t^k)^pi_k``."""
    conf = _conf_from_sym(z.zeta)
    if conf.coeffs != euler_product(z.pi[1:], "set", z.N).coeffs:
        raise InconsistentDescriptor("configuration counts disagree between the two routes")
    return conf.coeffs


def _ring_z(w: WeilPolynomials) -> Fraction:
    t = Fraction(1, w.q**w.d)
    value = Fraction(1)
    for i, p in enumerate(w.polys[:-1]):
        v = sum(c * t**j for j, c in enumerate(p))
        if i % 2:
            value *= v
        else:
            if v == 0:
                raise NonPositiveValue(f"P_{i} vanishes at q^-d; Z̊ has a pole there")
            value /= v
    if value <= 0:
        raise NonPositiveValue(f"Z̊(V, q^-d) = {value} is not positive")
    return value


def ring_z_at(z: ZetaExpansion) -> Fraction:
    """Exact value of ``Z̊(V, q^-d)`` where ``Z̊(V, t) = Z(V, t)(1 - q^d t)``."""
    weil = z.descriptor.weil()
    if weil is None:
        raise NotRational("point-count descriptors have no closed form for Z̊(V, q^-d)")
    return _ring_z(weil)


def restricted_counts(z: ZetaExpansion, keep: Callable[[int], bool], space: str, n: int) -> tuple:
    """Counts of degree-``0..n`` 0-cycles built only from closed points whose degree passes ``keep``."""
    z.require(n)
    exps = [z.pi[k] if keep(k) else 0 for k in range(1, n + 1)]
    kind = {"sym": "multiset", "conf": "set"}[space]
    return euler_product(exps, kind, n).coeffs


@dataclass(frozen=True)
class PntRow:
    n: int
    pi_ratio: Fraction
    predicted: Fraction
    abs_error: Fraction
    scaled_error: float


@dataclass(frozen=True)
class PntReport:
    rows: tuple

    def __iter__(self):
        return iter(self.rows)


def pnt_report(z: ZetaExpansion, n_range: Iterable[int]) -> PntReport:
    """Compare ``pi_n / |Sym^n|`` with ``1 / (n Z̊(V, q^-d))``.

    The scaled column multiplies the error by ``n q^(n/2)``; it stays bounded
    when the error term is of the expected order.
    """
    ring = ring_z_at(z)
    ns = list(n_range)
    if any(b != a + 1 for a, b in zip(ns, ns[1:])):
        raise RangeError("n_range must be contiguous and increasing")
    rows = []
    for n in ns:
        if n < 1:
            raise RangeError("prime counts start at degree 1")
        z.require(n)
        ratio = Fraction(z.pi[n], z.sym_counts[n])
        predicted = 1 / (n * ring)
        err = abs(ratio - predicted)
        rows.append(PntRow(n, ratio, predicted, err, float(err * n) * z.q ** (n / 2)))
    return PntReport(tuple(rows))


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str


@dataclass(frozen=True)
class ValidationReport:
    checks: tuple

    @property
    def ok(self) -> bool:
        return all(c.passed for c in self.checks)

    @property
    def failures(self) -> list:
        return [c for c in self.checks if not c.passed]


ROOT_TOLERANCE = 1e-6


def _root_check(w: WeilPolynomials) -> CheckResult:
    bad = []
    for i, p in enumerate(w.polys):
        if len(p) < 2:
            continue
        for alpha in np.roots(list(reversed(p))):
            j = -2 * math.log(abs(alpha)) / math.log(w.q)
            jr = round(j)
            if abs(j - jr) > ROOT_TOLERANCE or jr > i:
                bad.append(f"P_{i}: root {complex(alpha):.6g} has weight {j:.6f}")
    if bad:
        return CheckResult("root_modulus", False, "; ".join(bad))
    return CheckResult("root_modulus", True, "every root has |alpha| = q^(-j/2) with integer j <= i")


def _lang_weil_check(q, d, points) -> CheckResult:
    K = len(points) - 1
    scaled = []
    for n in range(1, K + 1):
        dev = abs(Fraction(points[n], q ** (n * d)) - 1)
        scaled.append(float(dev) * q ** (n / 2))
    half = max(1, K // 2)
    early, late = max(scaled[:half]), max(scaled[half:] or [0.0])
    if late <= 2 * early + 1e-12:
        return CheckResult("lang_weil", True, f"scaled deviation stays bounded (max {max(scaled):.4g})")
    return CheckResult("lang_weil", False, f"scaled deviation grows from {early:.4g} to {late:.4g}")


def validate_descriptor(desc: VarietyDescriptor, n_terms: int = 16) -> ValidationReport:
    """Run the root-modulus, Lang-Weil and integrality checks; never raises on a failed check."""
    checks = []
    weil = desc.weil()
    if weil is not None:
        checks.append(_root_check(weil))
        sym = expand_rational(_rational_zeta(weil), n_terms)
        points = power_sums(sym)
    else:
        checks.append(CheckResult("root_modulus", True, "not applicable to point-count descriptors"))
        K = min(n_terms, len(desc.counts))
        points = (0,) + desc.counts[:K]
    checks.append(_lang_weil_check(desc.q, desc.d, points))
    try:
        build_zeta(desc, len(points) - 1)
    except (InconsistentDescriptor, NonPositiveValue) as exc:
        checks.append(CheckResult("integrality", False, str(exc)))
    else:
        checks.append(CheckResult("integrality", True, "all pi_k and |Sym^n| are nonnegative integers"))
    return ValidationReport(tuple(checks))


# -- descriptor files --------------------------------------------------------------


def _int(v, what):
    if isinstance(v, bool):
        raise InvalidDescriptor(f"{what} must be an integer")
    if isinstance(v, int):
        return v
    if isinstance(v, str):
        try:
            return int(v.strip())
        except ValueError:
            pass
    raise InvalidDescriptor(f"{what} must be an integer or a decimal string, got {v!r}")


def descriptor_from_dict(data: dict) -> VarietyDescriptor:
    if not isinstance(data, dict):
        raise InvalidDescriptor("descriptor must be a JSON object")
    kind = data.get("kind")
    if "q" not in data:
        raise InvalidDescriptor("descriptor needs a field 'q'")
    q = _int(data["q"], "q")
    if kind == "elliptic":
        if "a" not in data:
            raise InvalidDescriptor("elliptic descriptor needs the trace 'a'")
        if _int(data.get("d", 1), "d") != 1:
            raise InvalidDescriptor("elliptic curves have d = 1")
        return EllipticCurve(q, _int(data["a"], "a"))
    if "d" not in data:
        raise InvalidDescriptor("descriptor needs a field 'd'")
    d = _int(data["d"], "d")
    if kind == "affine":
        return AffineSpace(q, d)
    if kind == "projective":
        return ProjectiveSpace(q, d)
    if kind == "weil":
        polys = data.get("polys")
        if not isinstance(polys, list):
            raise InvalidDescriptor("'polys' must be a list of coefficient arrays")
        return WeilPolynomials(q, d, tuple(tuple(_int(c, "coefficient") for c in p) for p in polys))
    if kind == "point_counts":
        counts = data.get("counts")
        if not isinstance(counts, list):
            raise InvalidDescriptor("'counts' must be an array")
        return PointCounts(q, d, tuple(_int(c, "count") for c in counts))
    raise InvalidDescriptor(f"unknown descriptor kind {kind!r}")


def descriptor_to_dict(desc: VarietyDescriptor) -> dict:
    if isinstance(desc, AffineSpace):
        return {"kind": "affine", "q": str(desc.q), "d": str(desc.d)}
    if isinstance(desc, ProjectiveSpace):
        return {"kind": "projective", "q": str(desc.q), "d": str(desc.d)}
    if isinstance(desc, EllipticCurve):
        return {"kind": "elliptic", "q": str(desc.q), "d": "1", "a": str(desc.a)}
    if isinstance(desc, WeilPolynomials):
        return {
            "kind": "weil",
            "q": str(desc.q),
            "d": str(desc.d),
            "polys": [[str(c) for c in p] for p in desc.polys],
        }
    if isinstance(desc, PointCounts):
        return {"kind": "point_counts", "q": str(desc.q), "d": str(desc.d), "counts": [str(c) for c in desc.counts]}
    raise TypeError(f"not a descriptor: {desc!r}")


def load_descriptor(path) -> VarietyDescriptor:
    with open(path, encoding="utf-8") as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise InvalidDescriptor(f"{path}: not valid JSON ({exc})") from exc
    return descriptor_from_dict(data)
