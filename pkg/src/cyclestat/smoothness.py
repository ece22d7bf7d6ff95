"""Rough and smooth 0-cycles, and the Buchstab and Dickman functions.

``Phi(n, m)`` counts degree-n 0-cycles all of whose prime factors have degree
at least m, ``Psi(n, m)`` those whose prime factors have degree at most m.
Both are coefficients of restricted Euler products.  For large n their
densities approach ``u omega(u) / n`` and ``rho(u)`` with ``u = n / m``.

The special functions are tabulated once on a grid of step ``1e-3`` from

    u omega(u) = 1 + int_1^{u-1} omega(w) dw          (u >= 2)
    u rho(u)   = int_{u-1}^u rho(v) dv                (u >= 1)

using composite Simpson sums.  Integer breakpoints (where the derivatives
jump) fall on even grid offsets, so no Simpson panel of the Buchstab
recursion straddles one.
"""

from __future__ import annotations

import math
import threading

import numpy as np
from dataclasses import dataclass
from fractions import Fraction

from .errors import DomainError, RangeError
from .zeta import ZetaExpansion, restricted_counts

__all__ = [
    "SmoothnessTable",
    "SpecialFunctionGrid",
    "SmoothnessReport",
    "phi_count",
    "psi_count",
    "smoothness_table",
    "buchstab_omega",
    "dickman_rho",
    "buchstab_grid",
    "dickman_grid",
    "smoothness_report",
]

STEP = 1e-3
_PER_UNIT = 1000


def _check_nm(z: ZetaExpansion, n: int, m: int):
    if not 1 <= m <= n:
        raise RangeError(f"need 1 <= m <= n, got n={n}, m={m}")
    z.require(n)


def phi_count(z: ZetaExpansion, n: int, m: int) -> int:
    """Number of degree-n 0-cycles whose prime factors all have degree >= m."""
    _check_nm(z, n, m)
    return restricted_counts(z, lambda k: k >= m, "sym", n)[n]


def psi_count(z: ZetaExpansion, n: int, m: int) -> int:
    """Number of degree-n 0-cycles whose prime factors all have degree <= m."""
    _check_nm(z, n, m)
    return restricted_counts(z, lambda k: k <= m, "sym", n)[n]


@dataclass(frozen=True)
class SmoothnessTable:
    n: int
    m: int
    phi: int
    psi: int


def smoothness_table(z: ZetaExpansion, n: int, m: int) -> SmoothnessTable:
    return SmoothnessTable(n, m, phi_count(z, n, m), psi_count(z, n, m))


@dataclass(frozen=True)
class SpecialFunctionGrid:
    """Samples ``values[i]`` of a function at ``start + i * step``.

    For Buchstab, ``integral[i]`` is the running integral of omega from 1;
    for Dickman it is the window integral ``int_{u-1}^u rho``.  ``integrand``
    is the derivative used to step to off-grid points (``rho(v-1)/v`` for Dickman).
    """

    name: str
    step: float
    start: float
    u_max: float
    values: tuple
    integral: tuple
    integrand: tuple


def _cumulative_simpson(f: list, h: float) -> list:
    """Running integral of samples ``f`` from the first grid point.

    Even offsets use whole Simpson panels; odd offsets add a third-order
    half-panel ``h/12 (5 f_0 + 8 f_1 - f_2)`` on top of the previous even point.
    """
    F = [0.0] * len(f)
    for i in range(1, len(f)):
        if i % 2 == 0:
            F[i] = F[i - 2] + h / 3 * (f[i - 2] + 4 * f[i - 1] + f[i])
        elif i + 1 < len(f):
            F[i] = F[i - 1] + h / 12 * (5 * f[i - 1] + 8 * f[i] - f[i + 1])
        else:
            F[i] = F[i - 1] + h / 12 * (-f[i - 2] + 8 * f[i - 1] + 5 * f[i])
    return F


def _build_omega(u_max: float) -> SpecialFunctionGrid:
    # grid on [1, u_max]; omega(u) = 1/u on [1, 2], then each unit lags the previous one
    units = max(2, math.ceil(u_max - 1))
    size = units * _PER_UNIT + 1
    w = [0.0] * size
    F = [0.0] * size
    for i in range(_PER_UNIT + 1):
        u = 1.0 + i * STEP
        w[i] = 1.0 / u
        F[i] = math.log(u)
    for unit in range(1, units):
        lo, hi = unit * _PER_UNIT, (unit + 1) * _PER_UNIT
        for i in range(lo + 1, hi + 1):
            w[i] = (1.0 + F[i - _PER_UNIT]) / (1.0 + i * STEP)
        Fseg = _cumulative_simpson(w[lo : hi + 1], STEP)
        for i in range(lo + 1, hi + 1):
            F[i] = F[lo] + Fseg[i - lo]
    w, F = tuple(map(float, w)), tuple(map(float, F))
    return SpecialFunctionGrid("buchstab_omega", STEP, 1.0, 1.0 + units, w, F, w)


def _build_rho(u_max: float) -> SpecialFunctionGrid:
    # grid on [0, u_max]; past u = 2 each value solves u rho(u) = int_{u-1}^u rho(v) dv,
    # with composite Simpson over the 1000-step window and the endpoint term moved left.
    # Only positive terms are summed, so small values keep their relative accuracy.
    units = max(3, math.ceil(u_max))
    size = units * _PER_UNIT + 1
    r = np.ones(size)
    u = np.arange(size) * STEP
    r[_PER_UNIT : 2 * _PER_UNIT + 1] = 1.0 - np.log(u[_PER_UNIT : 2 * _PER_UNIT + 1])
    weights = np.ones(_PER_UNIT)
    weights[1::2] = 4.0
    weights[2::2] = 2.0
    c = STEP / 3
    for i in range(2 * _PER_UNIT + 1, size):
        r[i] = c * float(weights @ r[i - _PER_UNIT : i]) / (u[i] - c)
    window = u * r  # the window integral equals u rho(u)
    g = np.zeros(size)
    g[_PER_UNIT:] = r[: size - _PER_UNIT] / u[_PER_UNIT:]
    return SpecialFunctionGrid(
        "dickman_rho", STEP, 0.0, float(units), tuple(r.tolist()), tuple(window.tolist()), tuple(g.tolist())
    )


_cache: dict = {}
_lock = threading.Lock()


def _grid(name: str, u: float) -> SpecialFunctionGrid:
    with _lock:
        grid = _cache.get(name)
        if grid is None or grid.u_max < u + 1:
            target = max(u + 1, 2 * (grid.u_max if grid else 10.0))
            grid = (_build_omega if name == "omega" else _build_rho)(target)
            _cache[name] = grid
        return grid


def buchstab_grid(u_max: float = 20.0) -> SpecialFunctionGrid:
    return _grid("omega", u_max)


def dickman_grid(u_max: float = 20.0) -> SpecialFunctionGrid:
    return _grid("rho", u_max)


def _locate(grid: SpecialFunctionGrid, x: float) -> tuple:
    # nearest grid point at or below x, and the trapezoid integral over the remainder
    pos = (x - grid.start) / grid.step
    i = min(int(pos), len(grid.values) - 2)
    frac = pos - i
    f0, f1 = grid.integrand[i], grid.integrand[i + 1]
    fx = f0 + frac * (f1 - f0)
    return i, frac * grid.step * (f0 + fx) / 2


def _partial_integral(grid: SpecialFunctionGrid, x: float) -> float:
    i, rest = _locate(grid, x)
    return grid.integral[i] + rest


def buchstab_omega(u: float) -> float:
    if u < 1:
        raise DomainError(f"Buchstab omega is defined for u >= 1, got {u}")
    if u <= 2:
        return 1.0 / u
    grid = _grid("omega", u)
    return (1.0 + _partial_integral(grid, u - 1)) / u


def dickman_rho(u: float) -> float:
    if u < 0:
        raise DomainError(f"Dickman rho is defined for u >= 0, got {u}")
    if u <= 1:
        return 1.0
    if u <= 2:
        return 1.0 - math.log(u)
    grid = _grid("rho", u)
    i, rest = _locate(grid, u)
    return grid.values[i] - rest


@dataclass(frozen=True)
class SmoothnessReport:
    n: int
    u: float
    m_rough: int
    m_smooth: int
    phi: int
    psi: int
    total: int
    phi_scaled: Fraction
    omega: float
    phi_relative_residual: float
    psi_ratio: Fraction
    rho: float
    psi_residual: float


def smoothness_report(z: ZetaExpansion, n: int, u: float) -> SmoothnessReport:
    """Exact densities of rough and smooth 0-cycles against ``omega(u)`` and ``rho(u)``.

    ``m = n / u`` is rounded up for the rough count (degrees >= n/u) and down
    for the smooth count (degrees <= n/u), which is the exact meaning of the
    inequalities when ``n / u`` is not an integer.
    """
    if u < 1:
        raise DomainError("smoothness comparisons need u >= 1")
    if n / u < 1:
        raise RangeError("need n / u >= 1")
    ratio = Fraction(n) / Fraction(u)
    m_rough = math.ceil(ratio)
    m_smooth = math.floor(ratio)
    phi = phi_count(z, n, m_rough)
    psi = psi_count(z, n, m_smooth)
    total = z.sym_counts[n]
    phi_scaled = Fraction(phi, total) * ratio
    om = buchstab_omega(u)
    psi_ratio = Fraction(psi, total)
    rh = dickman_rho(u)
    return SmoothnessReport(
        n=n,
        u=u,
        m_rough=m_rough,
        m_smooth=m_smooth,
        phi=phi,
        psi=psi,
        total=total,
        phi_scaled=phi_scaled,
        omega=om,
        phi_relative_residual=abs(float(phi_scaled) - om) / om,
        psi_ratio=psi_ratio,
        rho=rh,
        psi_residual=abs(float(psi_ratio) - rh),
    )
