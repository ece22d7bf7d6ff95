import csv
import io
from fractions import Fraction

import pytest

from cyclestat.errors import CapExceeded, DomainError
from cyclestat.oracle import FqPoly, enumerate_monic, exhaustive_stats, factor, irreducibles
from cyclestat.perm_bridge import partitions_of
from cyclestat.zeta import AffineSpace, build_zeta


def has_root(p):
    return any(sum(c * a**i for i, c in enumerate(p.coeffs)) % p.q == 0 for a in range(p.q))


def test_enumeration_examples():
    assert [str(p) for p in enumerate_monic(2, 2)] == ["x^2", "x^2 + 1", "x^2 + x", "x^2 + x + 1"]
    assert len(list(enumerate_monic(3, 1))) == 3
    assert sum(1 for _ in enumerate_monic(2, 10)) == 1024


def test_enumeration_is_lexicographic_and_monic():
    polys = list(enumerate_monic(3, 3))
    keys = [tuple(reversed(p.coeffs)) for p in polys]
    assert keys == sorted(keys) and len(set(keys)) == 27
    assert all(p.coeffs[-1] == 1 and p.degree == 3 for p in polys)


def test_caps_and_domain():
    with pytest.raises(CapExceeded):
        next(enumerate_monic(2, 15))
    with pytest.raises(CapExceeded):
        next(enumerate_monic(11, 2))
    with pytest.raises(DomainError):
        exhaustive_stats(4, 2)
    assert sum(1 for _ in enumerate_monic(11, 2, q_cap=11)) == 121


def test_factor_examples():
    x, x1 = FqPoly(2, (0, 1)), FqPoly(2, (1, 1))
    assert factor(FqPoly(2, (0, 1, 1))).factors == ((x, 1), (x1, 1))
    assert factor(FqPoly(2, (1, 0, 1))).factors == ((x1, 2),)
    quartic = FqPoly(2, (1, 1, 0, 0, 1))
    assert factor(quartic).factors == ((quartic, 1),)


def test_pth_power_handled():
    # derivative of (x^2 + x + 1)^2 * (x + 1)^4 vanishes identically over F_2
    f = FqPoly(2, (1, 1, 1)) ** 2 * FqPoly(2, (1, 1)) ** 4
    got = dict(factor(f).factors)
    assert got == {FqPoly(2, (1, 1, 1)): 2, FqPoly(2, (1, 1)): 4}
    g = FqPoly(3, (1, 0, 1)) ** 3
    assert factor(g).factors == ((FqPoly(3, (1, 0, 1)), 3),)


@pytest.mark.parametrize("q,n", [(2, 8), (3, 5), (5, 3), (7, 2)])
def test_reassembly_and_irreducibility(q, n):
    for m in range(1, n + 1):
        for p in enumerate_monic(q, m):
            fac = factor(p)
            assert fac.product() == p
            polys = [f for f, _ in fac.factors]
            assert len(set(polys)) == len(polys)
            for f, e in fac.factors:
                assert e >= 1
                assert factor(f).factors == ((f, 1),)


def test_irreducibles_small_degree():
    for q in (2, 3, 5):
        for k in (1, 2, 3):
            irr = irreducibles(q, k)
            for f in irr:
                assert f.degree == k
                if k <= 3:
                    assert k == 1 or not has_root(f)
    # degree <= 3: irreducible iff no root
    for p in enumerate_monic(3, 3):
        assert (p in irreducibles(3, 3)) == (not has_root(p))


def test_oracle_examples():
    assert exhaustive_stats(2, 4).pi[4] == 3
    assert exhaustive_stats(2, 2).conf[2] == 2
    assert exhaustive_stats(3, 2).conf[2] == 6


@pytest.mark.parametrize("q,n", [(2, 10), (3, 10), (5, 10)])
def test_counts_match_zeta(oracle_table, q, n):
    table = oracle_table(q, n)
    z = build_zeta(AffineSpace(q), n)
    assert table.pi[1:] == z.pi[1 : n + 1]
    assert table.sym == z.sym_counts[: n + 1]
    assert table.conf == z.conf_counts[: n + 1]


@pytest.mark.parametrize("q,n", [(2, 8), (3, 6), (5, 4), (7, 3)])
def test_engines_agree(q, n):
    a = exhaustive_stats(q, n, method="factor")
    b = exhaustive_stats(q, n, method="sieve")
    assert (a.pi, a.sym, a.conf) == (b.pi, b.sym, b.conf)
    assert a.partitions == b.partitions
    assert a.nu == b.nu
    assert a.to_csv() == b.to_csv()


def test_phi_psi_brute_force():
    q, n = 3, 6
    table = exhaustive_stats(q, n)
    for m in range(1, n + 1):
        degrees = [[f.degree for f, _ in factor(p).factors] for p in enumerate_monic(q, m)]
        for k in range(1, m + 1):
            assert table.phi(m, k) == sum(min(ds) >= k for ds in degrees)
            assert table.psi(m, k) == sum(max(ds) <= k for ds in degrees)


def test_profiles_and_nu_brute_force():
    q, n = 2, 7
    table = exhaustive_stats(q, n)
    for m in range(1, n + 1):
        for space in ("sym", "conf"):
            total = sum(table.partitions[space][m].values())
            assert total == table.total(m, space)
            assert sum(table.profile_probability(mu, space) for mu in partitions_of(m)) == 1
        for P in table.nu_points:
            hist = [0] * (m // P.degree + 1)
            for p in enumerate_monic(q, m):
                hist[dict(factor(p).factors).get(P, 0)] += 1
            while len(hist) > 1 and hist[-1] == 0:
                hist.pop()
            assert list(table.nu["sym"][P][m]) == hist


def test_charpoly_brute_force():
    q, n = 2, 6
    table = exhaustive_stats(q, n)
    from math import comb

    for lam in ((1,), (2,), (1, 1), (0, 0, 1)):
        for m in range(1, n + 1):
            acc = 0
            for p in enumerate_monic(q, m):
                X = [0] * (m + 1)
                for f, e in factor(p).factors:
                    X[f.degree] += e
                term = 1
                for k, lk in enumerate(lam, start=1):
                    term *= comb(X[k] if k <= m else 0, lk)
                acc += term
            assert table.charpoly(lam, m, "sym") == Fraction(acc, q**m)


def test_csv_export():
    table = exhaustive_stats(2, 6)
    text = table.to_csv()
    rows = list(csv.DictReader(io.StringIO(text)))
    assert list(rows[0]) == ["kind", "degree", "key", "space", "count"]
    pi = {int(r["degree"]): int(r["count"]) for r in rows if r["kind"] == "pi"}
    assert pi == {m: table.pi[m] for m in range(1, 7)}
    profile_total = sum(int(r["count"]) for r in rows if r["kind"] == "profile" and r["degree"] == "6" and r["space"] == "sym")
    assert profile_total == 64
    assert text == exhaustive_stats(2, 6).to_csv()
