import pytest

from cyclestat.zeta import AffineSpace, EllipticCurve, ProjectiveSpace, build_zeta


@pytest.fixture(scope="session")
def a2():
    return build_zeta(AffineSpace(2), 200)


@pytest.fixture(scope="session")
def a3():
    return build_zeta(AffineSpace(3), 60)


@pytest.fixture(scope="session")
def p2():
    return build_zeta(ProjectiveSpace(2), 60)


@pytest.fixture(scope="session")
def e20():
    return build_zeta(EllipticCurve(2, 0), 60)


@pytest.fixture(scope="session")
def three_descriptors(a2, p2, e20):
    return {"A1/F2": a2, "P1/F2": p2, "E(2,0)": e20}


@pytest.fixture(scope="session")
def oracle_table():
    """Exhaustive tables shared across test files; the q=5, n=10 one takes seconds."""
    from functools import lru_cache

    from cyclestat.oracle import exhaustive_stats

    return lru_cache(maxsize=None)(lambda q, n: exhaustive_stats(q, n))
