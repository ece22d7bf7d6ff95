"""Random degree profiles, the window statistic and the Poisson experiment.

Only the factorization shape of a 0-cycle matters here: for each degree k,
the total multiplicity ``x_k`` of degree-k primes and the number ``d_k`` of
distinct ones.  Profiles are drawn exactly uniformly from ``Sym^n`` or
``Conf^n`` by a backward pass through the table

    T_k(j) = number of degree-j 0-cycles built from primes of degree <= k,

using big-integer arithmetic, so the randomness is the only approximation.

Randomness: sample ``i`` of a run with seed ``s`` uses
``numpy.random.PCG64(SeedSequence(s, spawn_key=(i,)))``.  Uniform big
integers are drawn by rejection from raw 64-bit words.  Results therefore
do not depend on how samples are spread over threads.
"""

from __future__ import annotations

import bisect
import math
import os
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb, lgamma, log
from typing import Iterable, Sequence

import numpy as np

from .errors import CapExceeded, DegenerateWindow, RangeError
from .series import multichoose
from .zeta import ZetaExpansion

__all__ = [
    "DegreeProfile",
    "PhiMultiset",
    "PoissonParams",
    "ProfileSampler",
    "PoissonReport",
    "MomentReport",
    "PerturbationCheck",
    "EXACT_CAP",
    "worker_count",
    "sample_profile",
    "draw_profiles",
    "phi_of",
    "mu_r_L",
    "window_measures",
    "poisson_limit",
    "poisson_experiment",
    "omega_moments",
    "addition_perturbation_check",
]

EXACT_CAP = 600
EXACT_MOMENT_CAP = 60


def worker_count() -> int:
    """Worker threads from ``CYCLESTAT_THREADS`` (default 1)."""
    raw = os.environ.get("CYCLESTAT_THREADS", "").strip()
    if not raw:
        return 1
    try:
        n = int(raw)
    except ValueError:
        raise ValueError(f"CYCLESTAT_THREADS must be a positive integer, got {raw!r}") from None
    if n < 1:
        raise ValueError(f"CYCLESTAT_THREADS must be a positive integer, got {raw!r}")
    return n


@dataclass(frozen=True)
class DegreeProfile:
    """Sparse profile: ``parts`` holds ``(k, x_k, d_k)`` for the degrees that occur, k increasing."""

    n: int
    space: str
    parts: tuple

    def __post_init__(self):
        total = 0
        for k, x, d in self.parts:
            if x < 1 or not 1 <= d <= x:
                raise ValueError(f"invalid entry (k={k}, x={x}, d={d})")
            if self.space == "conf" and x != d:
                raise ValueError("squarefree profiles have x_k = d_k")
            total += k * x
        if total != self.n:
            raise ValueError(f"profile has degree {total}, expected {self.n}")

    def x(self, k: int) -> int:
        return next((x for kk, x, _ in self.parts if kk == k), 0)

    def d(self, k: int) -> int:
        return next((d for kk, _, d in self.parts if kk == k), 0)

    @property
    def omega(self) -> int:
        """``Omega(C)``: prime factors counted with multiplicity."""
        return sum(x for _, x, _ in self.parts)

    @property
    def length(self) -> int:
        """``l(C)``: distinct prime factors."""
        return sum(d for _, _, d in self.parts)


@dataclass(frozen=True)
class PhiMultiset:
    values: tuple

    def __post_init__(self):
        object.__setattr__(self, "values", tuple(sorted(float(v) for v in self.values)))

    def __len__(self):
        return len(self.values)

    def __iter__(self):
        return iter(self.values)

    def union(self, other: "PhiMultiset") -> "PhiMultiset":
        return PhiMultiset(self.values + other.values)


def phi_of(profile: DegreeProfile) -> PhiMultiset:
    """``log k`` repeated once per distinct prime of degree k."""
    vals = []
    for k, _, d in profile.parts:
        vals.extend([log(k)] * d)
    return PhiMultiset(tuple(vals))


def _window(window) -> tuple:
    a, b = float(window[0]), float(window[1])
    if not b > a:
        raise DegenerateWindow(f"window [{a}, {b}] has no length")
    return a, b


def window_measures(phi: PhiMultiset | Sequence[float], L: float, window) -> list:
    """``mu_{r,L}`` for every ``r = 0..|phi|`` from one sweep.

    ``t`` sees ``v`` when ``t <= v <= t + L``.  The count is constant between
    consecutive breakpoints ``{v, v - L}``, so it is read at interval midpoints.
    """
    a, b = _window(window)
    if not L > 0:
        raise ValueError("L must be positive")
    vals = sorted(phi.values if isinstance(phi, PhiMultiset) else (float(v) for v in phi))
    cuts = {a, b}
    for v in vals:
        for c in (v, v - L):
            if a < c < b:
                cuts.add(c)
    cuts = sorted(cuts)
    out = [0.0] * (len(vals) + 1)
    for lo, hi in zip(cuts, cuts[1:]):
        t = (lo + hi) / 2
        count = bisect.bisect_right(vals, t + L) - bisect.bisect_left(vals, t)
        out[count] += hi - lo
    width = b - a
    return [m / width for m in out]


def mu_r_L(phi: PhiMultiset | Sequence[float], r: int, L: float, window) -> float:
    """Fraction of window positions ``t in [a, b]`` with exactly ``r`` points of ``phi`` in ``[t, t + L]``."""
    if r < 0:
        raise ValueError("r must be nonnegative")
    ms = window_measures(phi, L, window)
    return ms[r] if r < len(ms) else 0.0


def poisson_limit(r: int, L: float) -> float:
    return math.exp(-L) * L**r / math.factorial(r)


# -- exact and float samplers --------------------------------------------------------


def _randbelow(bitgen, bound: int) -> int:
    """Uniform integer in ``[0, bound)`` from raw 64-bit words, by rejection."""
    if bound <= 0:
        raise ValueError("bound must be positive")
    bits = (bound - 1).bit_length()
    if bits == 0:
        return 0
    words = (bits + 63) // 64
    mask = (1 << bits) - 1
    while True:
        raw = bitgen.random_raw(words)
        v = int.from_bytes(np.asarray(raw, dtype="<u8").tobytes(), "little") & mask
        if v < bound:
            return v


def _rng(seed: int, index: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(int(seed), spawn_key=(int(index),))))


def _log_comb(pi: int, x: int, multiset: bool) -> float:
    if multiset:
        s = sum(log(pi + i) for i in range(x))
    else:
        if x > pi:
            return -math.inf
        s = sum(log(pi - i) for i in range(x))
    return s - lgamma(x + 1)


class ProfileSampler:
    """Uniform sampler of degree profiles of ``Sym^n`` or ``Conf^n``.

    The table is built once at construction and only read afterwards, so one
    sampler can be shared between threads.  ``mode`` is ``"exact"`` (big
    integers, ``n <= exact_cap``), ``"float"`` (log-space doubles, with relative
    error around ``1e-12`` per step) or ``"auto"`` (exact when allowed).
    """

    def __init__(self, z: ZetaExpansion, n: int, space: str = "sym", mode: str = "exact", exact_cap: int = EXACT_CAP):
        if space not in ("sym", "conf"):
            raise ValueError(f"space must be 'sym' or 'conf', got {space!r}")
        if mode not in ("exact", "float", "auto"):
            raise ValueError(f"mode must be 'exact', 'float' or 'auto', got {mode!r}")
        if n < 0:
            raise RangeError("n must be nonnegative")
        z.require(n)
        if mode == "auto":
            mode = "exact" if n <= exact_cap else "float"
        if mode == "exact" and n > exact_cap:
            raise CapExceeded(f"exact sampling is capped at n <= {exact_cap}, got {n}")
        self.z, self.n, self.space, self.mode = z, n, space, mode
        self.pi = z.pi
        if mode == "exact":
            self._build_exact()
        else:
            self._build_float()

    def _weight(self, k: int, x: int) -> int:
        return multichoose(self.pi[k], x) if self.space == "sym" else comb(self.pi[k], x)

    def _build_exact(self):
        n = self.n
        tables = [[1] + [0] * n]
        for k in range(1, n + 1):
            prev = tables[-1]
            if self.pi[k] == 0:
                tables.append(prev)
                continue
            w = [self._weight(k, x) for x in range(n // k + 1)]
            cur = list(prev)
            for j in range(k, n + 1):
                s = cur[j]
                for x in range(1, j // k + 1):
                    wx = w[x]
                    if wx == 0:
                        break
                    s += wx * prev[j - k * x]
                cur[j] = s
            tables.append(cur)
        self._tables = tables
        if tables[n][n] != self.z.total(n, self.space):
            raise AssertionError("profile table disagrees with the zeta counts")

    def _build_float(self):
        n = self.n
        multiset = self.space == "sym"
        logs = np.full((n + 1, n + 1), -np.inf)
        logs[0, 0] = 0.0
        self._logw = [None]
        for k in range(1, n + 1):
            prev = logs[k - 1]
            if self.pi[k] == 0:
                logs[k] = prev
                self._logw.append(None)
                continue
            lw = np.array([_log_comb(self.pi[k], x, multiset) for x in range(n // k + 1)])
            self._logw.append(lw)
            stack = [prev]
            for x in range(1, n // k + 1):
                shifted = np.full(n + 1, -np.inf)
                shifted[k * x :] = prev[: n + 1 - k * x] + lw[x]
                stack.append(shifted)
            logs[k] = np.logaddexp.reduce(np.vstack(stack), axis=0)
        self._logs = logs

    # -- drawing --

    def sample(self, rng: np.random.Generator) -> DegreeProfile:
        if self.mode == "exact":
            return self._sample_exact(rng.bit_generator)
        return self._sample_float(rng)

    def _sample_exact(self, bitgen) -> DegreeProfile:
        j = self.n
        parts = []
        tables = self._tables
        for k in range(self.n, 0, -1):
            if j == 0:
                break
            if k > j or self.pi[k] == 0:
                continue
            prev = tables[k - 1]
            u = _randbelow(bitgen, tables[k][j])
            x = 0
            while True:
                c = self._weight(k, x) * prev[j - k * x]
                if u < c:
                    break
                u -= c
                x += 1
            if x:
                parts.append((k, x, self._distinct_exact(bitgen, k, x)))
                j -= k * x
        return DegreeProfile(self.n, self.space, tuple(reversed(parts)))

    def _distinct_exact(self, bitgen, k: int, x: int) -> int:
        # P(d | x) is proportional to binom(pi, d) binom(x - 1, d - 1); the total is multichoose(pi, x)
        if self.space == "conf":
            return x
        pi = self.pi[k]
        u = _randbelow(bitgen, multichoose(pi, x))
        for d in range(1, min(x, pi) + 1):
            c = comb(pi, d) * comb(x - 1, d - 1)
            if u < c:
                return d
            u -= c
        raise AssertionError("distinct-count weights do not sum to the multiset count")

    def _sample_float(self, rng: np.random.Generator) -> DegreeProfile:
        j = self.n
        parts = []
        logs = self._logs
        for k in range(self.n, 0, -1):
            if j == 0:
                break
            if k > j or self.pi[k] == 0:
                continue
            xs = np.arange(j // k + 1)
            lp = self._logw[k][: len(xs)] + logs[k - 1][j - k * xs] - logs[k][j]
            p = np.exp(lp)
            x = int(min(np.searchsorted(np.cumsum(p), rng.random() * p.sum(), side="right"), len(p) - 1))
            if x:
                parts.append((k, x, self._distinct_float(rng, k, x)))
                j -= k * x
        return DegreeProfile(self.n, self.space, tuple(reversed(parts)))

    def _distinct_float(self, rng, k: int, x: int) -> int:
        if self.space == "conf":
            return x
        pi = self.pi[k]
        ds = np.arange(1, min(x, pi) + 1)
        lw = np.array([_log_comb(pi, int(d), False) + _log_comb(x - 1, int(d) - 1, False) for d in ds])
        p = np.exp(lw - lw.max())
        return int(ds[min(np.searchsorted(np.cumsum(p), rng.random() * p.sum(), side="right"), len(ds) - 1)])


def sample_profile(
    z: ZetaExpansion, n: int, space: str, seed: int, index: int = 0, mode: str = "exact", exact_cap: int = EXACT_CAP
) -> DegreeProfile:
    """One profile from substream ``index`` of ``seed``; same inputs give the same profile."""
    return ProfileSampler(z, n, space, mode, exact_cap).sample(_rng(seed, index))


def draw_profiles(
    z: ZetaExpansion | None,
    n: int,
    space: str,
    samples: int,
    seed: int,
    mode: str = "exact",
    exact_cap: int = EXACT_CAP,
    threads: int | None = None,
    sampler: ProfileSampler | None = None,
) -> list:
    """``samples`` profiles in substream order, spread over ``threads`` workers."""
    if samples < 0:
        raise ValueError("samples must be nonnegative")
    if sampler is None:
        sampler = ProfileSampler(z, n, space, mode, exact_cap)
    threads = worker_count() if threads is None else threads

    def one(i):
        return sampler.sample(_rng(seed, i))

    if threads <= 1 or samples < 2:
        return [one(i) for i in range(samples)]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(one, range(samples)))


# -- the experiment ------------------------------------------------------------------


def _iterated_logs(n: float) -> tuple:
    l1 = log(n)
    l2 = log(l1)
    l3 = log(l2)
    return l1, l2, l3


@dataclass(frozen=True)
class PoissonParams:
    """Parameters of one run.  ``window`` defaults to ``[0, log n]``.

    ``y`` and ``m`` are the theorem's thresholds; ``m`` is evaluated at
    ``N = n`` (see :meth:`m`).  The ladder ``L_j = (1 + 2^{-m/6})^j / m``
    runs over ``0 <= j <= 2^{m/6+1} log m``; ``max_ladder`` caps how many of
    its rungs (evenly spaced, ends included) are checked.
    """

    n: int
    L: float
    r: int
    samples: int
    seed: int
    space: str = "sym"
    window: tuple | None = None
    max_ladder: int = 64
    exact_cap: int = EXACT_CAP

    def __post_init__(self):
        if self.n < 16:
            raise RangeError("the iterated logarithms need n >= 16")
        if not self.L > 0:
            raise ValueError("L must be positive")
        if self.r < 0:
            raise ValueError("r must be nonnegative")
        if self.samples < 1:
            raise ValueError("need at least one sample")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must be a 64-bit unsigned integer")
        if self.window is not None:
            object.__setattr__(self, "window", _window(self.window))

    @property
    def interval(self) -> tuple:
        return self.window if self.window is not None else (0.0, log(self.n))

    @property
    def y(self) -> float:
        _, l2, l3 = _iterated_logs(self.n)
        return l2 / l3**2

    @property
    def m(self) -> float:
        _, l2, l3 = _iterated_logs(self.n)
        return 10 * l2 / l3**2

    @property
    def r_max_theorem(self) -> float:
        y = self.y
        return y / log(y) ** 2

    @property
    def L_range(self) -> tuple:
        return (1 / self.y, self.y / 20)

    @property
    def in_theorem_range(self) -> bool:
        lo, hi = self.L_range
        return self.r <= self.r_max_theorem and lo <= self.L <= hi

    def ladder(self) -> tuple:
        """Checked rungs as ``(j, L_j)`` pairs."""
        m = self.m
        top = math.floor(2 ** (m / 6 + 1) * log(m))
        count = min(self.max_ladder, top + 1)
        if count <= 1:
            idx = [0]
        else:
            idx = sorted({round(i * top / (count - 1)) for i in range(count)})
        growth = 1 + 2 ** (-m / 6)
        return tuple((j, growth**j / m) for j in idx)

    @property
    def ladder_r_max(self) -> int:
        m = self.m
        return math.floor(m / log(m) ** 2)


def _quantiles(xs: Sequence[float]) -> dict:
    arr = np.asarray(xs, dtype=float)
    return {f"q{int(p * 100):02d}": float(np.quantile(arr, p)) for p in (0.05, 0.25, 0.5, 0.75, 0.95)}


@dataclass(frozen=True)
class PoissonReport:
    n: int
    space: str
    r: int
    L: float
    samples: int
    seed: int
    window: tuple
    expected: float
    mean_mu: float
    mean_abs_deviation: float
    max_mass_error: float
    mu_quantiles: dict
    deviation_quantiles: dict
    mean_phi_size: float
    mean_omega: float
    y: float
    m: float
    in_theorem_range: bool
    ladder_rungs: int
    ladder_r_max: int
    exceptional_fraction: float
    raw_mu: tuple = field(repr=False, default=())


def poisson_experiment(
    z: ZetaExpansion | None,
    params: PoissonParams,
    profiles: Sequence[DegreeProfile] | None = None,
    raw_csv=None,
    threads: int | None = None,
) -> PoissonReport:
    """Window statistics of ``params.samples`` uniform 0-cycles against ``e^{-L} L^r / r!``.

    ``profiles`` reuses an earlier draw (it must hold ``params.samples``
    profiles of degree ``params.n``).  ``raw_csv`` is an optional writable
    text stream that receives one row ``n,seed_index,r,L,mu`` per sample.

    The exceptional fraction is the share of samples that break the
    inequality ``|mu_{i,L_j} - e^{-L_j} L_j^i / i!| < 2^{-m/6-1} (e^{-L_j} L_j^i / i!)^{1/2}``
    for some checked rung ``j`` and some ``i <= m / (log m)^2``.
    """
    if not params.in_theorem_range:
        lo, hi = params.L_range
        warnings.warn(
            f"(r={params.r}, L={params.L}) is outside the theorem's range "
            f"r <= {params.r_max_theorem:.3g}, L in [{lo:.3g}, {hi:.3g}] for n={params.n}",
            stacklevel=2,
        )
    if profiles is None:
        profiles = draw_profiles(
            z, params.n, params.space, params.samples, params.seed, exact_cap=params.exact_cap, threads=threads
        )
    profiles = list(profiles)
    if len(profiles) != params.samples or any(p.n != params.n for p in profiles):
        raise ValueError("profiles do not match the parameters")
    window = params.interval
    expected = poisson_limit(params.r, params.L)
    ladder = params.ladder()
    rmax = params.ladder_r_max
    slack = 2 ** (-params.m / 6 - 1)
    targets = [[poisson_limit(i, Lj) for i in range(rmax + 1)] for _, Lj in ladder]

    mus, devs, mass_err = [], [], 0.0
    exceptional = 0
    for idx, prof in enumerate(profiles):
        phi = phi_of(prof)
        ms = window_measures(phi, params.L, window)
        mass_err = max(mass_err, abs(math.fsum(ms) - 1.0))
        mu = ms[params.r] if params.r < len(ms) else 0.0
        mus.append(mu)
        devs.append(abs(mu - expected))
        if raw_csv is not None:
            raw_csv.write(f"{params.n},{idx},{params.r},{params.L!r},{mu!r}\n")
        for (_, Lj), tgt in zip(ladder, targets):
            ml = window_measures(phi, Lj, window)
            if any(abs((ml[i] if i < len(ml) else 0.0) - tgt[i]) >= slack * math.sqrt(tgt[i]) for i in range(rmax + 1)):
                exceptional += 1
                break
    count = len(profiles)
    return PoissonReport(
        n=params.n,
        space=params.space,
        r=params.r,
        L=params.L,
        samples=count,
        seed=params.seed,
        window=window,
        expected=expected,
        mean_mu=math.fsum(mus) / count,
        mean_abs_deviation=math.fsum(devs) / count,
        max_mass_error=mass_err,
        mu_quantiles=_quantiles(mus),
        deviation_quantiles=_quantiles(devs),
        mean_phi_size=math.fsum(p.length for p in profiles) / count,
        mean_omega=math.fsum(p.omega for p in profiles) / count,
        y=params.y,
        m=params.m,
        in_theorem_range=params.in_theorem_range,
        ladder_rungs=len(ladder),
        ladder_r_max=rmax,
        exceptional_fraction=exceptional / count,
        raw_mu=tuple(mus),
    )


# -- prime-factor counts -------------------------------------------------------------


@dataclass(frozen=True)
class MomentReport:
    """Mean and variance of ``Omega`` and ``l``; exact rationals when ``samples`` is None."""

    n: int
    space: str
    samples: int | None
    mean_omega: object
    var_omega: object
    mean_length: object
    var_length: object


def _exact_moments(z: ZetaExpansion, n: int, space: str) -> MomentReport:
    if n > EXACT_MOMENT_CAP:
        raise CapExceeded(f"exact moments are capped at n <= {EXACT_MOMENT_CAP}")
    z.require(n)
    # joint[j] maps (Omega, l) to the number of degree-j 0-cycles
    joint = [dict() for _ in range(n + 1)]
    joint[0][(0, 0)] = 1
    for k in range(1, n + 1):
        pi = z.pi[k]
        if pi == 0:
            continue
        choices = []
        for x in range(1, n // k + 1):
            if space == "conf":
                if x <= pi:
                    choices.append((x, x, comb(pi, x)))
            else:
                for d in range(1, min(x, pi) + 1):
                    choices.append((x, d, comb(pi, d) * comb(x - 1, d - 1)))
        new = [dict(row) for row in joint]
        for j in range(k, n + 1):
            acc = new[j]
            for x, d, w in choices:
                if k * x > j:
                    continue
                for (om, ln), c in joint[j - k * x].items():
                    key = (om + x, ln + d)
                    acc[key] = acc.get(key, 0) + w * c
        joint = new
    dist = joint[n]
    total = sum(dist.values())
    if total != z.total(n, space):
        raise AssertionError("joint table disagrees with the zeta counts")

    def moments(i):
        m1 = Fraction(sum(key[i] * c for key, c in dist.items()), total)
        m2 = Fraction(sum(key[i] ** 2 * c for key, c in dist.items()), total)
        return m1, m2 - m1 * m1

    mo, vo = moments(0)
    ml, vl = moments(1)
    return MomentReport(n, space, None, mo, vo, ml, vl)


def omega_moments(
    z: ZetaExpansion | None,
    n: int,
    samples: int | None = None,
    seed: int = 0,
    space: str = "sym",
    profiles: Sequence[DegreeProfile] | None = None,
    exact_cap: int = EXACT_CAP,
    threads: int | None = None,
) -> MomentReport:
    """Moments of ``Omega(C) = sum x_k`` and ``l(C) = sum d_k``.

    With ``samples=None`` (and no ``profiles``) the moments are exact, from a
    table of joint counts; otherwise they are sample means and unbiased sample
    variances.
    """
    if samples is None and profiles is None:
        return _exact_moments(z, n, space)
    if profiles is None:
        profiles = draw_profiles(z, n, space, samples, seed, exact_cap=exact_cap, threads=threads)
    om = np.array([p.omega for p in profiles], dtype=float)
    ln = np.array([p.length for p in profiles], dtype=float)
    ddof = 1 if len(om) > 1 else 0
    return MomentReport(
        n, space, len(om), float(om.mean()), float(om.var(ddof=ddof)), float(ln.mean()), float(ln.var(ddof=ddof))
    )


@dataclass(frozen=True)
class PerturbationCheck:
    difference: float
    bound: float
    holds: bool


def addition_perturbation_check(
    phiC: PhiMultiset | Iterable[float],
    phiD: PhiMultiset | Iterable[float],
    r: int,
    L: float,
    window,
    j_degree: int,
) -> PerturbationCheck:
    """``|mu_{r,L}(C + D) - mu_{r,L}(C)| <= log j / (b - a)`` when ``phi(D)`` lies in ``[0, log j]``.

    Only positions ``t <= v <= log j`` can see a point ``v`` of ``phi(D)``, so
    the two counts differ on a set of length at most ``log j`` (for ``a >= 0``).
    """
    C = phiC if isinstance(phiC, PhiMultiset) else PhiMultiset(tuple(phiC))
    D = phiD if isinstance(phiD, PhiMultiset) else PhiMultiset(tuple(phiD))
    if j_degree < 1:
        raise ValueError("j_degree must be positive")
    cap = log(j_degree)
    if any(v > cap + 1e-12 for v in D):
        raise ValueError("phi(D) must lie below log j_degree")
    a, b = _window(window)
    diff = abs(mu_r_L(C.union(D), r, L, (a, b)) - mu_r_L(C, r, L, (a, b)))
    bound = cap / (b - a)
    return PerturbationCheck(diff, bound, diff <= bound + 1e-12)
