from fractions import Fraction
from math import comb

import pytest

from cyclestat.errors import NoSuchPrimeDegree, RangeError
from cyclestat.oracle import exhaustive_stats
from cyclestat.prime_orders import (
    CharPolySpec,
    charpoly_expectation,
    charpoly_limit,
    independence_check,
    nu_distribution,
    nu_limit,
)
from cyclestat.zeta import AffineSpace, WeilPolynomials, build_zeta

# genus-2 curve over F_2 with no closed points of degree 2
POINTLESS_DEG2 = WeilPolynomials(2, 1, ((1,), (1, 3, 5, 6, 4), (1, -2)))


def test_nu_sym_example(a2):
    d = nu_distribution(a2, 1, 5, "sym")
    assert d[0] == Fraction(1, 2)
    assert d[1] == Fraction(1, 4)


def test_nu_conf_example(a2):
    d = nu_distribution(a2, 1, 3, "conf")
    assert d[1] == Fraction(1, 4)
    assert d[2] == 0


@pytest.mark.parametrize("k", [1, 2, 3])
def test_nu_n_equals_k(three_descriptors, k):
    for z in three_descriptors.values():
        d = nu_distribution(z, k, k, "sym")
        assert d[1] == Fraction(1, z.sym_counts[k])


@pytest.mark.parametrize("space", ["sym", "conf"])
def test_nu_sums_to_one(three_descriptors, space):
    for z in three_descriptors.values():
        for k in (1, 2, 3):
            for n in range(k, 25):
                d = nu_distribution(z, k, n, space)
                assert sum(d.probs) == 1
                assert all(p >= 0 for p in d.probs)
                if space == "conf":
                    assert all(p == 0 for p in d.probs[2:])


def test_nu_limit_examples(a2):
    assert nu_limit(a2, 1, "sym", 0) == Fraction(1, 2)
    assert nu_limit(a2, 1, "conf", 1) == Fraction(1, 3)
    z = build_zeta(AffineSpace(3, 2), 4)
    assert nu_limit(z, 1, "sym", 2) == Fraction(8, 729)


def test_affine_sym_matches_geometric_exactly(a2, a3):
    for z in (a2, a3):
        for k in (1, 2, 3):
            for n in range(k, 30):
                d = nu_distribution(z, k, n, "sym")
                for j in range(n // k):
                    if n >= (j + 1) * k:
                        assert d[j] == nu_limit(z, k, "sym", j)


def test_no_such_prime_degree():
    z = build_zeta(POINTLESS_DEG2, 8)
    assert z.pi[2] == 0
    with pytest.raises(NoSuchPrimeDegree):
        nu_distribution(z, 2, 4, "sym")
    with pytest.raises(RangeError):
        nu_distribution(z, 5, 4, "sym")


def test_independence_affine_exact(a2):
    rep = independence_check(a2, 1, 1, 6, "sym")
    assert rep.deviation == 0
    row = [r for r in rep.table if r[:2] == (1, 1)][0]
    assert row[2] == row[3] == Fraction(1, 4)


def test_independence_elliptic_decays(e20):
    devs = [independence_check(e20, 1, 2, n, "sym").deviation for n in (6, 8, 10, 12, 14)]
    assert devs[1] <= Fraction(1, 10)
    assert all(b < a for a, b in zip(devs, devs[1:]))


def test_independence_marginals(e20):
    rep = independence_check(e20, 1, 2, 8, "conf")
    for i, j, joint, prod in rep.table:
        if i == 0 or j == 0:
            assert joint == prod


def test_charpoly_examples(a2):
    assert charpoly_expectation(a2, (1,), 3, "conf") == Fraction(1, 2)
    assert charpoly_expectation(a2, CharPolySpec((2,)), 2, "sym") == Fraction(3, 4)
    assert charpoly_expectation(a2, (0, 0), 4, "sym") == 1
    assert charpoly_limit(a2, (1,), "conf") == Fraction(2, 3)
    assert charpoly_limit(a2, (1,), "sym") == 2
    assert charpoly_limit(a2, (3,), "conf") == 0


def test_charpoly_support_cap(a2):
    with pytest.raises(RangeError):
        charpoly_expectation(a2, (1, 1, 1), 6, "sym", max_support=2)


@pytest.mark.parametrize("space", ["sym", "conf"])
def test_charpoly_convergence(three_descriptors, space):
    for z in three_descriptors.values():
        for lam in ((1,), (2,), (0, 1), (1, 1), (1, 0, 1)):
            gap = abs(charpoly_expectation(z, lam, 40, space) - charpoly_limit(z, lam, space))
            assert gap < Fraction(1, 1000)


def _negbin_factorial_moment(pi, Q, r):
    # X = sum of pi geometric(1 - 1/Q) variables: E[binom(X, r)] = multichoose(pi, r) / (Q - 1)^r
    return Fraction(comb(pi + r - 1, r), (Q - 1) ** r)


def _bin_factorial_moment(pi, Q, r):
    return Fraction(comb(pi, r)) / (Q + 1) ** r


def test_marginal_laws_factorial_moments(a2, a3):
    for z in (a2, a3):
        for k in (1, 2):
            Q = z.q ** (z.d * k)
            for r in (1, 2, 3):
                lam = (0,) * (k - 1) + (r,)
                assert charpoly_limit(z, lam, "sym") == _negbin_factorial_moment(z.pi[k], Q, r)
                assert charpoly_limit(z, lam, "conf") == _bin_factorial_moment(z.pi[k], Q, r)


@pytest.mark.parametrize("q,n", [(2, 8), (3, 6)])
def test_against_exhaustive_oracle(q, n):
    table = exhaustive_stats(q, n)
    z = build_zeta(AffineSpace(q), n)
    for space in ("sym", "conf"):
        for m in range(1, n + 1):
            for P in table.nu_points:
                k = P.degree
                if k > m:
                    continue
                assert nu_distribution(z, k, m, space).probs[: len(table.nu[space][P][m])] == table.nu_distribution(P, m, space)
            for lam in ((1,), (2,), (0, 1), (1, 1), (0, 0, 1), (1, 1, 1)):
                assert charpoly_expectation(z, lam, m, space) == table.charpoly(lam, m, space)
