"""Distribution of prime orders and character-polynomial expectations.

For a closed point ``P`` of degree ``k``, ``nu_P(C)`` is the multiplicity of
``P`` in the 0-cycle ``C``.  Over ``Sym^n`` the event ``nu_P >= j`` is in
bijection with ``Sym^{n-jk}``, so every probability here is an exact ratio of
coefficients of the zeta function.  ``X_k`` is the number of degree-k prime
factors counted with multiplicity.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb
from typing import Sequence

from .errors import NoSuchPrimeDegree, RangeError
from .series import PowerSeries, invert, multichoose
from .zeta import ZetaExpansion, restricted_counts

__all__ = [
    "NuDistribution",
    "CharPolySpec",
    "IndependenceReport",
    "nu_distribution",
    "nu_limit",
    "independence_check",
    "charpoly_expectation",
    "charpoly_limit",
]


def _space(space: str) -> str:
    if space not in ("sym", "conf"):
        raise ValueError(f"space must be 'sym' or 'conf', got {space!r}")
    return space


@dataclass(frozen=True)
class NuDistribution:
    k: int
    n: int
    space: str
    probs: tuple

    def __getitem__(self, j):
        return self.probs[j] if 0 <= j < len(self.probs) else Fraction(0)


def _require_point(z: ZetaExpansion, k: int, count: int = 1):
    if k < 1 or k > z.N or z.pi[k] < count:
        raise NoSuchPrimeDegree(f"need {count} closed point(s) of degree {k}")


def _conf_containing(z: ZetaExpansion, degrees: Sequence[int], n: int) -> int:
    """Squarefree degree-n 0-cycles containing fixed distinct points of the given degrees.

    Removing the points leaves squarefree cycles avoiding them, whose generating
    function is ``Conf(t) / prod (1 + t^k)``.
    """
    rest = n - sum(degrees)
    if rest < 0:
        return 0
    series = PowerSeries(z.conf_counts[: rest + 1])
    for k in degrees:
        factor = PowerSeries.of([1] + [0] * (k - 1) + [1], rest)
        series = series * invert(factor)
    return series[rest]


def nu_distribution(z: ZetaExpansion, k: int, n: int, space: str) -> NuDistribution:
    """Exact law of ``nu_P`` for a degree-k point ``P`` on ``Sym^n`` or ``Conf^n``."""
    _space(space)
    if not 1 <= k <= n:
        raise RangeError(f"need 1 <= k <= n, got k={k}, n={n}")
    z.require(n)
    _require_point(z, k)
    jmax = n // k
    if space == "sym":
        total = z.sym_counts[n]
        tail = [Fraction(z.sym_counts[n - j * k], total) for j in range(jmax + 1)] + [Fraction(0)]
        probs = tuple(tail[j] - tail[j + 1] for j in range(jmax + 1))
    else:
        total = z.conf_counts[n]
        # alternating sum |Conf^{n-k}| - |Conf^{n-2k}| + ...
        hit = sum((-1) ** (i + 1) * z.conf_counts[n - i * k] for i in range(1, jmax + 1))
        p1 = Fraction(hit, total)
        probs = (1 - p1, p1) + (Fraction(0),) * (jmax - 1)
    return NuDistribution(k, n, space, probs)


def nu_limit(z: ZetaExpansion, k: int, space: str, j: int) -> Fraction:
    """Limiting ``P(nu_P = j)``: geometric on ``Sym``, Bernoulli on ``Conf``."""
    _space(space)
    Q = Fraction(z.q) ** (z.d * k)
    if space == "sym":
        return (1 / Q) ** j * (1 - 1 / Q)
    if j == 1:
        return 1 / (Q + 1)
    if j == 0:
        return Q / (Q + 1)
    return Fraction(0)


@dataclass(frozen=True)
class IndependenceReport:
    deviation: Fraction
    argmax: tuple
    table: tuple  # (i, j, joint, product)


def independence_check(
    z: ZetaExpansion, k1: int, k2: int, n: int, space: str, max_order: int = 3
) -> IndependenceReport:
    """Largest gap ``|P(nu_P >= i, nu_Q >= j) - P(nu_P >= i) P(nu_Q >= j)|`` for distinct P, Q.

    ``i, j`` range over ``0..max_order`` on ``Sym`` and over ``{0, 1}`` on ``Conf``.
    """
    _space(space)
    z.require(n)
    if k1 == k2:
        _require_point(z, k1, 2)
    else:
        _require_point(z, k1)
        _require_point(z, k2)
    top = max_order if space == "sym" else 1
    rows = []
    if space == "sym":
        total = z.sym_counts[n]

        def tail(m):
            return Fraction(z.sym_counts[m], total) if m >= 0 else Fraction(0)

        for i in range(top + 1):
            for j in range(top + 1):
                joint = tail(n - i * k1 - j * k2)
                rows.append((i, j, joint, tail(n - i * k1) * tail(n - j * k2)))
    else:
        total = z.conf_counts[n]
        pp = Fraction(_conf_containing(z, [k1], n), total)
        pq = Fraction(_conf_containing(z, [k2], n), total)
        both = Fraction(_conf_containing(z, [k1, k2], n), total)
        marg = {0: (Fraction(1), Fraction(1)), 1: (pp, pq)}
        for i in range(2):
            for j in range(2):
                if i and j:
                    joint = both
                elif i:
                    joint = pp
                elif j:
                    joint = pq
                else:
                    joint = Fraction(1)
                rows.append((i, j, joint, marg[i][0] * marg[j][1]))
    best = max(rows, key=lambda r: abs(r[2] - r[3]))
    return IndependenceReport(abs(best[2] - best[3]), (best[0], best[1]), tuple(rows))


@dataclass(frozen=True)
class CharPolySpec:
    """Exponents ``lambda_1 .. lambda_l`` of ``prod_k binom(X_k, lambda_k)``."""

    lam: tuple

    def __post_init__(self):
        lam = tuple(int(x) for x in self.lam)
        if any(x < 0 for x in lam):
            raise ValueError("lambda entries must be nonnegative")
        object.__setattr__(self, "lam", lam)

    @property
    def support(self) -> tuple:
        return tuple(k for k, x in enumerate(self.lam, start=1) if x > 0)

    def __getitem__(self, k: int) -> int:
        return self.lam[k - 1] if 1 <= k <= len(self.lam) else 0


def _as_spec(spec) -> CharPolySpec:
    return spec if isinstance(spec, CharPolySpec) else CharPolySpec(tuple(spec))


def charpoly_expectation(z: ZetaExpansion, spec, n: int, space: str, max_support: int | None = None):
    """Exact ``E[prod_k binom(X_k, lambda_k)]`` over ``Sym^n`` or ``Conf^n``.

    Only the degrees in the support of lambda are enumerated; all other
    degrees are folded into one restricted Euler product, so the cost is
    exponential in the support size only.
    """
    _space(space)
    spec = _as_spec(spec)
    z.require(n)
    supp = [k for k in spec.support]
    if max_support is not None and len(supp) > max_support:
        raise RangeError(f"lambda has support of size {len(supp)} > {max_support}")
    total = z.total(n, space)
    if not supp:
        return Fraction(1)
    supp_set = set(supp)
    rest = restricted_counts(z, lambda k: k not in supp_set, space, n)
    live = [k for k in supp if k <= n]
    if len(live) < len(supp):
        return Fraction(0)

    def weight(k, x):
        if space == "sym":
            return multichoose(z.pi[k], x)
        return comb(z.pi[k], x)

    acc = 0

    def walk(idx, budget, w):
        nonlocal acc
        if idx == len(live):
            acc += w * rest[budget]
            return
        k = live[idx]
        lk = spec[k]
        for x in range(lk, budget // k + 1):
            wx = weight(k, x)
            if wx == 0:
                break
            walk(idx + 1, budget - k * x, w * wx * comb(x, lk))

    walk(0, n, 1)
    return Fraction(acc, total)


def charpoly_limit(z: ZetaExpansion, spec, space: str) -> Fraction:
    """Limit of :func:`charpoly_expectation` as ``n -> infinity``."""
    _space(space)
    spec = _as_spec(spec)
    out = Fraction(1)
    for k in spec.support:
        if k > z.N:
            raise RangeError(f"pi_{k} is beyond the computed range")
        lk, pk = spec[k], z.pi[k]
        Q = z.q ** (k * z.d)
        if space == "sym":
            out *= Fraction(comb(pk + lk - 1, lk), (Q - 1) ** lk)
        else:
            out *= Fraction(comb(pk, lk), (Q + 1) ** lk)
    return out
