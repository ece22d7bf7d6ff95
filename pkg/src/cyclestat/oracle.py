"""Brute-force ground truth on the affine line over a prime field.

Monic polynomials of degree n over F_q are the degree-n 0-cycles of the
affine line, and monic irreducibles are its closed points.  This module
enumerates all ``q^n`` of them and counts factorization types directly.

Two engines produce the same :class:`OracleTable`:

``factor``
    factors every polynomial with :func:`factor` (squarefree decomposition,
    then trial division by cached irreducibles).
``sieve``
    a vectorized smallest-prime-factor sieve: for each irreducible ``P`` in
    increasing order it forms every product ``P * G`` at once with numpy and
    labels the products not yet labelled.  Factorization types then follow
    from the cofactor's type.

Polynomials are indexed by ``sum_{i<n} c_i q^i`` over their non-leading
coefficients, which is also the enumeration order.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from fractions import Fraction
from math import comb
from typing import Iterator, Sequence

import numpy as np

from .errors import CapExceeded, DomainError
from .perm_bridge import Partition

__all__ = [
    "FqPoly",
    "Factorization",
    "OracleTable",
    "enumerate_monic",
    "factor",
    "irreducibles",
    "exhaustive_stats",
    "Q_CAP",
    "N_CAP",
]

Q_CAP = 7
N_CAP = 14


def _is_prime(q: int) -> bool:
    return q >= 2 and all(q % p for p in range(2, int(q**0.5) + 1))


def _check_caps(q: int, n: int, q_cap: int, n_cap: int):
    if not _is_prime(q):
        raise DomainError(f"the oracle works over prime fields only, got q={q}")
    if q > q_cap:
        raise CapExceeded(f"q={q} exceeds the oracle cap {q_cap}")
    if n > n_cap:
        raise CapExceeded(f"n={n} exceeds the oracle cap {n_cap}")
    if n < 0:
        raise ValueError("n must be nonnegative")


# -- polynomial arithmetic over F_q (coefficient tuples, low degree first) ---------------


def _strip(c: list) -> tuple:
    while c and c[-1] == 0:
        c.pop()
    return tuple(c)


def _mul(a: tuple, b: tuple, q: int) -> tuple:
    if not a or not b:
        return ()
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return _strip([v % q for v in out])


def _divmod(a: tuple, b: tuple, q: int) -> tuple:
    if not b:
        raise ZeroDivisionError("division by the zero polynomial")
    r = list(a)
    inv = pow(b[-1], -1, q)
    db = len(b) - 1
    quot = [0] * max(0, len(r) - db)
    for i in range(len(r) - 1, db - 1, -1):
        c = r[i] * inv % q
        if c:
            quot[i - db] = c
            for j, y in enumerate(b):
                r[i - db + j] = (r[i - db + j] - c * y) % q
    return _strip(quot), _strip(r[:db])


def _monic(a: tuple, q: int) -> tuple:
    if not a:
        return a
    inv = pow(a[-1], -1, q)
    return tuple(c * inv % q for c in a)


def _gcd(a: tuple, b: tuple, q: int) -> tuple:
    while b:
        a, b = b, _divmod(a, b, q)[1]
    return _monic(a, q)


def _derivative(a: tuple, q: int) -> tuple:
    return _strip([i * c % q for i, c in enumerate(a)][1:])


def _pth_root(a: tuple, q: int) -> tuple:
    # over a prime field, f(x) = g(x^q) has root g, since c^q = c
    return tuple(a[::q])


@dataclass(frozen=True)
class FqPoly:
    """Monic polynomial over ``F_q``; ``coeffs`` run from the constant term up to the leading 1."""

    q: int
    coeffs: tuple

    def __post_init__(self):
        cs = tuple(int(c) % self.q for c in self.coeffs)
        if not cs or cs[-1] != 1:
            raise ValueError("FqPoly must be monic")
        object.__setattr__(self, "coeffs", cs)

    @classmethod
    def from_index(cls, q: int, n: int, index: int) -> "FqPoly":
        digits = []
        for _ in range(n):
            index, c = divmod(index, q)
            digits.append(c)
        return cls(q, tuple(digits) + (1,))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def index(self) -> int:
        return sum(c * self.q**i for i, c in enumerate(self.coeffs[:-1]))

    def __mul__(self, other: "FqPoly") -> "FqPoly":
        return FqPoly(self.q, _mul(self.coeffs, other.coeffs, self.q))

    def __pow__(self, e: int) -> "FqPoly":
        out = FqPoly(self.q, (1,))
        for _ in range(e):
            out = out * self
        return out

    def __str__(self):
        terms = []
        for i in range(self.degree, -1, -1):
            c = self.coeffs[i]
            if not c:
                continue
            mono = "" if i == 0 else ("x" if i == 1 else f"x^{i}")
            if not mono:
                terms.append(str(c))
            else:
                terms.append(mono if c == 1 else f"{c}{mono}")
        return " + ".join(terms)


@dataclass(frozen=True)
class Factorization:
    poly: FqPoly
    factors: tuple  # (FqPoly, multiplicity), ordered by (degree, index)

    def product(self) -> FqPoly:
        out = FqPoly(self.poly.q, (1,))
        for f, e in self.factors:
            out = out * f**e
        return out

    def partition(self) -> Partition:
        """Degrees of the prime factors, counted with multiplicity."""
        return Partition.from_parts([f.degree for f, e in self.factors for _ in range(e)])

    @property
    def squarefree(self) -> bool:
        return all(e == 1 for _, e in self.factors)


def enumerate_monic(q: int, n: int, q_cap: int = Q_CAP, n_cap: int = N_CAP) -> Iterator[FqPoly]:
    """All ``q^n`` monic polynomials of degree n in index order."""
    _check_caps(q, n, q_cap, n_cap)
    for i in range(q**n):
        yield FqPoly.from_index(q, n, i)


_irr_cache: dict = {}


def irreducibles(q: int, k: int) -> tuple:
    """Monic irreducibles of degree k in index order, by sieving out products of lower degrees."""
    key = (q, k)
    hit = _irr_cache.get(key)
    if hit is not None:
        return hit
    if k == 1:
        out = tuple(FqPoly(q, (c, 1)) for c in range(q))
    else:
        composite = bytearray(q**k)
        for e in range(1, k // 2 + 1):
            for P in irreducibles(q, e):
                for gi in range(q ** (k - e)):
                    G = FqPoly.from_index(q, k - e, gi)
                    composite[(P * G).index] = 1
        out = tuple(FqPoly.from_index(q, k, i) for i in range(q**k) if not composite[i])
    _irr_cache[key] = out
    return out


def _squarefree_parts(a: tuple, q: int) -> list:
    """``[(g, e)]`` with ``a = prod g^e``, each ``g`` squarefree and monic."""
    if len(a) <= 1:
        return []
    da = _derivative(a, q)
    if not da:
        return [(g, e * q) for g, e in _squarefree_parts(_pth_root(a, q), q)]
    out = []
    c = _gcd(a, da, q)
    w = _divmod(a, c, q)[0]
    i = 1
    while len(w) > 1:
        y = _gcd(w, c, q)
        fac = _divmod(w, y, q)[0]
        if len(fac) > 1:
            out.append((fac, i))
        w = y
        c = _divmod(c, y, q)[0]
        i += 1
    if len(c) > 1:
        out.extend((g, e * q) for g, e in _squarefree_parts(_pth_root(c, q), q))
    return out


def factor(p: FqPoly) -> Factorization:
    """Complete factorization into monic irreducibles."""
    if p.degree < 1:
        raise ValueError("factor needs degree >= 1")
    q = p.q
    mult: dict = {}
    for g, e in _squarefree_parts(p.coeffs, q):
        rest = g
        for k in range(1, (len(rest) - 1) // 2 + 1):
            if 2 * k > len(rest) - 1:
                break
            for P in irreducibles(q, k):
                quot, rem = _divmod(rest, P.coeffs, q)
                if not rem:
                    mult[P] = mult.get(P, 0) + e
                    rest = quot
                    if 2 * k > len(rest) - 1:
                        break
        if len(rest) > 1:
            last = FqPoly(q, rest)
            mult[last] = mult.get(last, 0) + e
    factors = tuple(sorted(mult.items(), key=lambda fe: (fe[0].degree, fe[0].index)))
    return Factorization(p, factors)


# -- oracle tables ------------------------------------------------------------------


@dataclass(frozen=True)
class OracleTable:
    """Direct counts over every monic polynomial of degree ``1..n``.

    ``partitions[space][m]`` maps a :class:`Partition` (prime degrees with
    multiplicity) to the number of degree-m polynomials of that type, over
    all monics (``sym``) or the squarefree ones (``conf``); it is the joint
    law of ``(X_1, X_2, ...)``.  ``nu[space][P][m]`` is the histogram of
    the multiplicity of ``P``.  Index 0 of the per-degree tuples is degree 0.
    """

    q: int
    n: int
    method: str
    nu_points: tuple
    pi: tuple
    sym: tuple
    conf: tuple
    partitions: dict
    nu: dict

    def total(self, m: int, space: str) -> int:
        return self.sym[m] if space == "sym" else self.conf[m]

    def phi(self, m: int, k: int) -> int:
        """Polynomials of degree m with every prime factor of degree >= k."""
        return sum(c for mu, c in self.partitions["sym"][m].items() if min(mu.parts, default=k) >= k)

    def psi(self, m: int, k: int) -> int:
        """Polynomials of degree m with every prime factor of degree <= k."""
        return sum(c for mu, c in self.partitions["sym"][m].items() if max(mu.parts, default=0) <= k)

    def nu_distribution(self, point: FqPoly, m: int, space: str) -> tuple:
        hist = self.nu[space][point][m]
        total = self.total(m, space)
        return tuple(Fraction(c, total) for c in hist)

    def charpoly(self, lam: Sequence[int], m: int, space: str) -> Fraction:
        """``E[prod_k binom(X_k, lambda_k)]`` over degree m."""
        acc = 0
        for mu, c in self.partitions[space][m].items():
            w = c
            for k, lk in enumerate(lam, start=1):
                if lk:
                    w *= comb(mu[k], lk)
                    if not w:
                        break
            acc += w
        return Fraction(acc, self.total(m, space))

    def profile_probability(self, mu: Partition, space: str) -> Fraction:
        return Fraction(self.partitions[space][mu.n].get(mu, 0), self.total(mu.n, space))

    def to_csv(self) -> str:
        """Rows ``kind,degree,key,space,count`` in a fixed order."""
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["kind", "degree", "key", "space", "count"])
        for m in range(1, self.n + 1):
            w.writerow(["pi", m, "", "", self.pi[m]])
            w.writerow(["total", m, "", "sym", self.sym[m]])
            w.writerow(["total", m, "", "conf", self.conf[m]])
            for k in range(1, m + 1):
                w.writerow(["phi", m, k, "sym", self.phi(m, k)])
                w.writerow(["psi", m, k, "sym", self.psi(m, k)])
            for space in ("sym", "conf"):
                for mu, c in sorted(self.partitions[space][m].items(), key=lambda it: it[0].parts, reverse=True):
                    w.writerow(["profile", m, "+".join(map(str, mu.parts)), space, c])
                for P in self.nu_points:
                    for j, c in enumerate(self.nu[space][P][m]):
                        w.writerow(["nu", m, f"{P}:{j}", space, c])
        return buf.getvalue()


def _default_points(q: int, n: int) -> tuple:
    pts = [FqPoly(q, (0, 1))]
    if n >= 2:
        pts.append(irreducibles(q, 2)[0])
    return tuple(pts)


def _factor_engine(q: int, n: int, points: tuple) -> tuple:
    pi = [0] * (n + 1)
    conf = [1] + [0] * n
    parts = {"sym": [{Partition(()): 1}], "conf": [{Partition(()): 1}]}
    nu = {s: {P: [(1,)] for P in points} for s in ("sym", "conf")}
    for m in range(1, n + 1):
        ps, pc = {}, {}
        hist = {s: {P: [0] * (m // P.degree + 1) for P in points} for s in ("sym", "conf")}
        for f in enumerate_monic(q, n=m, q_cap=q, n_cap=n):
            fac = factor(f)
            mu = fac.partition()
            sqf = fac.squarefree
            if len(fac.factors) == 1 and fac.factors[0][1] == 1:
                pi[m] += 1
            ps[mu] = ps.get(mu, 0) + 1
            mult = dict(fac.factors)
            for P in points:
                hist["sym"][P][mult.get(P, 0)] += 1
            if sqf:
                conf[m] += 1
                pc[mu] = pc.get(mu, 0) + 1
                for P in points:
                    hist["conf"][P][mult.get(P, 0)] += 1
        parts["sym"].append(ps)
        parts["conf"].append(pc)
        for s in ("sym", "conf"):
            for P in points:
                nu[s][P].append(_trim_hist(hist[s][P]))
    return pi, conf, parts, nu


def _trim_hist(h: list) -> tuple:
    h = list(h)
    while len(h) > 1 and h[-1] == 0:
        h.pop()
    return tuple(h)


def _digits(q: int, k: int) -> np.ndarray:
    """Coefficient rows of every monic of degree k, leading 1 included; shape ``(q^k, k + 1)``."""
    idx = np.arange(q**k, dtype=np.int64)
    out = np.empty((q**k, k + 1), dtype=np.int32)
    for i in range(k):
        out[:, i] = idx % q
        idx //= q
    out[:, k] = 1
    return out


def _sieve_engine(q: int, n: int, points: tuple) -> tuple:
    # irreducibles get global ids ordered by (degree, index); gid = offset[m] + rank within degree m
    digits_cache: dict = {}

    def digits(k):
        if k not in digits_cache:
            digits_cache[k] = _digits(q, k)
        return digits_cache[k]

    offset = [0, 0]
    irr_idx = [np.zeros(0, np.int64)]
    spf, pid, sqf = [np.zeros(1, np.int64)], [np.zeros(1, np.int32)], [np.ones(1, bool)]
    nus = {P: [np.zeros(1, np.int16)] for P in points}
    part_of = [[Partition(())]]
    point_gid = {P: -1 for P in points}
    for m in range(1, n + 1):
        size = q**m
        s = np.full(size, -1, dtype=np.int64)
        cof = np.zeros(size, dtype=np.int64)
        weights = q ** np.arange(m, dtype=np.int64)
        for e in range(1, m // 2 + 1):
            G = digits(m - e)
            for rank, pidx in enumerate(irr_idx[e]):
                P = digits(e)[pidx]
                prod = np.zeros((G.shape[0], m + 1), dtype=np.int32)
                for j, c in enumerate(P):
                    if c:
                        prod[:, j : j + m - e + 1] += int(c) * G
                np.remainder(prod, q, out=prod)
                idx = prod[:, :m].astype(np.int64) @ weights
                fresh = s[idx] < 0
                s[idx[fresh]] = offset[e] + rank
                cof[idx[fresh]] = np.nonzero(fresh)[0]
        irr = np.nonzero(s < 0)[0]
        s[irr] = offset[m] + np.arange(irr.size)
        irr_idx.append(irr)
        offset.append(offset[m] + irr.size)
        for P in points:
            if P.degree == m:
                point_gid[P] = offset[m] + int(np.searchsorted(irr, P.index))
        # degree of the smallest prime factor, recovered from the id offsets
        sdeg = np.searchsorted(np.asarray(offset[1 : m + 1]), s, side="right")
        ids = np.zeros(size, dtype=np.int32)
        flags = np.ones(size, dtype=bool)
        part_of.append([Partition.from_parts([m])])
        lookup = {part_of[m][0]: 0}
        nu_arrays = {}
        for P in points:
            arr = np.zeros(size, np.int16)
            arr[irr] = s[irr] == point_gid[P]
            nu_arrays[P] = arr
        for e in range(1, m // 2 + 1):
            sel = np.nonzero(sdeg == e)[0]
            if not sel.size:
                continue
            c_idx = cof[sel]
            # partition ids of degree m - e become degree-m ids after adding a part e
            table = np.empty(len(part_of[m - e]), dtype=np.int32)
            for t, mu in enumerate(part_of[m - e]):
                new = Partition.from_parts(mu.parts + (e,))
                if new not in lookup:
                    lookup[new] = len(part_of[m])
                    part_of[m].append(new)
                table[t] = lookup[new]
            ids[sel] = table[pid[m - e][c_idx]]
            flags[sel] = sqf[m - e][c_idx] & (spf[m - e][c_idx] != s[sel])
            for P in points:
                nu_arrays[P][sel] = nus[P][m - e][c_idx] + (s[sel] == point_gid[P])
        for P in points:
            nus[P].append(nu_arrays[P])
        spf.append(s)
        pid.append(ids)
        sqf.append(flags)
        del cof

    pi = [0] + [int(irr_idx[m].size) for m in range(1, n + 1)]
    conf = [1] + [int(sqf[m].sum()) for m in range(1, n + 1)]
    parts = {"sym": [{Partition(()): 1}], "conf": [{Partition(()): 1}]}
    nu = {sp: {P: [(1,)] for P in points} for sp in ("sym", "conf")}
    for m in range(1, n + 1):
        k = len(part_of[m])
        bs = np.bincount(pid[m], minlength=k)
        bc = np.bincount(pid[m][sqf[m]], minlength=k)
        parts["sym"].append({part_of[m][t]: int(bs[t]) for t in range(k) if bs[t]})
        parts["conf"].append({part_of[m][t]: int(bc[t]) for t in range(k) if bc[t]})
        for P in points:
            nu["sym"][P].append(_trim_hist(np.bincount(nus[P][m]).tolist()))
            nu["conf"][P].append(_trim_hist(np.bincount(nus[P][m][sqf[m]], minlength=1).tolist()))
    return pi, conf, parts, nu


def exhaustive_stats(
    q: int,
    n: int,
    method: str = "auto",
    nu_points: Sequence[FqPoly] | None = None,
    q_cap: int = Q_CAP,
    n_cap: int = N_CAP,
) -> OracleTable:
    """Count factorization types of all monic polynomials of degrees ``1..n``.

    ``method`` is ``"factor"``, ``"sieve"`` or ``"auto"`` (sieve unless the
    search space is tiny).  ``nu_points`` defaults to ``x`` and the first
    degree-2 irreducible.
    """
    _check_caps(q, n, q_cap, n_cap)
    if method == "auto":
        method = "factor" if q**n <= 256 else "sieve"
    if method not in ("factor", "sieve"):
        raise ValueError(f"method must be 'factor', 'sieve' or 'auto', got {method!r}")
    points = tuple(nu_points) if nu_points is not None else _default_points(q, n)
    for P in points:
        if P.q != q:
            raise ValueError("nu_points must live over the same field")
        if len(factor(P).factors) != 1 or factor(P).factors[0][1] != 1:
            raise ValueError(f"{P} is not irreducible")
    engine = _factor_engine if method == "factor" else _sieve_engine
    pi, conf, parts, nu = engine(q, n, points)
    sym = tuple(q**m for m in range(n + 1))
    return OracleTable(
        q=q,
        n=n,
        method=method,
        nu_points=points,
        pi=tuple(pi),
        sym=sym,
        conf=tuple(conf),
        partitions={s: tuple(parts[s]) for s in parts},
        nu={s: {P: tuple(v) for P, v in nu[s].items()} for s in nu},
    )
