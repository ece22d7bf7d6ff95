import json
import math
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cyclestat.errors import (
    InconsistentDescriptor,
    InvalidDescriptor,
    NotRational,
    RangeError,
    TruncationTooShort,
)
from cyclestat.series import euler_product
from cyclestat.zeta import (
    AffineSpace,
    EllipticCurve,
    PointCounts,
    ProjectiveSpace,
    WeilPolynomials,
    build_zeta,
    closed_point_counts,
    conf_counts,
    descriptor_from_dict,
    descriptor_to_dict,
    load_descriptor,
    mobius,
    pnt_report,
    ring_z_at,
    validate_descriptor,
)


def test_build_examples():
    assert build_zeta(AffineSpace(2), 4).sym_counts == (1, 2, 4, 8, 16)
    e = build_zeta(EllipticCurve(2, 0), 2)
    assert e.point_counts[1:] == (3, 9)
    assert e.sym_counts == (1, 3, 9)
    assert build_zeta(ProjectiveSpace(2), 3).sym_counts == (1, 3, 7, 15)


def test_closed_points():
    assert closed_point_counts(build_zeta(AffineSpace(2), 6))[1:] == (2, 1, 2, 3, 6, 9)
    assert build_zeta(EllipticCurve(2, 0), 2).pi[1:] == (3, 3)
    a, p = build_zeta(AffineSpace(2), 12), build_zeta(ProjectiveSpace(2), 12)
    assert p.pi[1] == 3
    assert p.pi[2:] == a.pi[2:]


def test_necklace_formula_for_affine_line():
    # independent count: (1/n) sum_{k | n} mu(k) q^{n/k}
    for q in (2, 3, 4, 5, 7, 9):
        z = build_zeta(AffineSpace(q), 15)
        for n in range(1, 16):
            expect = sum(mobius(k) * q ** (n // k) for k in range(1, n + 1) if n % k == 0) // n
            assert z.pi[n] == expect


def test_conf_counts_examples():
    assert conf_counts(build_zeta(AffineSpace(2), 4)) == (1, 2, 2, 4, 8)
    assert conf_counts(build_zeta(AffineSpace(3), 2))[2] == 6
    assert build_zeta(EllipticCurve(3, 1), 0).conf_counts == (1,)


@pytest.mark.parametrize("q", [2, 3, 5])
def test_affine_exact_counts(q):
    z = build_zeta(AffineSpace(q), 20)
    assert all(z.sym_counts[n] == q**n for n in range(21))
    assert all(z.conf_counts[n] == q**n - q ** (n - 1) for n in range(2, 21))


def test_ring_z_examples():
    assert ring_z_at(build_zeta(AffineSpace(5), 3)) == 1
    assert ring_z_at(build_zeta(ProjectiveSpace(2), 3)) == 2
    assert ring_z_at(build_zeta(EllipticCurve(2, 0), 3)) == 3


def test_ring_z_needs_rational_descriptor():
    z = build_zeta(PointCounts(2, 1, (2, 4, 8, 16)), 4)
    with pytest.raises(NotRational):
        ring_z_at(z)


def test_pnt_examples():
    rows = {r.n: r for r in pnt_report(build_zeta(AffineSpace(2), 6), range(1, 7))}
    assert rows[4].pi_ratio == Fraction(3, 16)
    assert rows[4].predicted == Fraction(1, 4)
    p = {r.n: r for r in pnt_report(build_zeta(ProjectiveSpace(2), 6), range(1, 7))}
    assert p[4].pi_ratio == Fraction(3, 31)
    assert p[4].predicted == Fraction(1, 8)


def test_pnt_needs_contiguous_range():
    with pytest.raises(RangeError):
        pnt_report(build_zeta(AffineSpace(2), 6), [1, 3])


def test_validation_examples():
    assert validate_descriptor(ProjectiveSpace(3, 2)).ok
    assert validate_descriptor(EllipticCurve(2, 0)).ok
    bad = WeilPolynomials(2, 1, ((1,), (1, -5), (1, -2)))
    rep = validate_descriptor(bad)
    assert not rep.ok
    assert "root_modulus" in {c.name for c in rep.failures}


def test_descriptor_invariants():
    with pytest.raises(InvalidDescriptor):
        EllipticCurve(2, 3)  # Hasse bound
    with pytest.raises(InvalidDescriptor):
        AffineSpace(6)
    with pytest.raises(InvalidDescriptor):
        WeilPolynomials(2, 1, ((1,), (1, 1), (1, -3)))
    with pytest.raises(InvalidDescriptor):
        WeilPolynomials(2, 1, ((2,), (1,), (1, -2)))


def test_point_counts_errors():
    with pytest.raises(TruncationTooShort):
        build_zeta(PointCounts(2, 1, (2, 4)), 3)
    with pytest.raises(InconsistentDescriptor):
        build_zeta(PointCounts(2, 1, (2, 5)), 2)  # pi_2 = 3/2


def test_point_counts_match_weil_route():
    e = build_zeta(EllipticCurve(3, 2), 12)
    z = build_zeta(PointCounts(3, 1, e.point_counts[1:]), 12)
    assert z.sym_counts == e.sym_counts
    assert z.conf_counts == e.conf_counts
    assert z.pi == e.pi


@given(st.integers(2, 7).filter(lambda q: q in (2, 3, 4, 5, 7)).flatmap(
    lambda q: st.tuples(st.just(q), st.integers(-math.isqrt(4 * q), math.isqrt(4 * q)))
))
@settings(max_examples=30, deadline=None)
def test_euler_consistency_on_elliptic_curves(qa):
    q, a = qa
    z = build_zeta(EllipticCurve(q, a), 25)
    assert euler_product(z.pi[1:], "multiset", 25).coeffs == z.sym_counts
    assert euler_product(z.pi[1:], "set", 25).coeffs == z.conf_counts
    assert all(c <= s for c, s in zip(z.conf_counts, z.sym_counts))
    assert all(k * z.pi[k] <= z.point_counts[k] for k in range(1, 26))


@pytest.mark.parametrize("desc", [ProjectiveSpace(2, 1), ProjectiveSpace(3, 2), EllipticCurve(2, 0), AffineSpace(2, 3)])
def test_sym_over_qnd_tends_to_ring_z(desc):
    z = build_zeta(desc, 40)
    rz = ring_z_at(z)
    gaps = [abs(Fraction(z.sym_counts[n], desc.q ** (n * desc.d)) - rz) for n in range(1, 41)]
    rises = sum(1 for a, b in zip(gaps, gaps[1:]) if b > a)
    assert gaps[-1] <= gaps[0]
    assert rises <= 3


def test_lang_weil_bounded(e20):
    # N_n = 2^n + 1 - (alpha^n + conj), |alpha| = sqrt 2, so the scaled deviation is <= 2 + 2^(-n/2)
    for n in range(1, 61):
        dev = abs(Fraction(e20.point_counts[n], 2**n) - 1)
        assert float(dev) * 2 ** (n / 2) <= 2 + 2 ** (-n / 2) + 1e-12


def test_descriptor_round_trip(tmp_path):
    descs = [
        AffineSpace(3, 2),
        ProjectiveSpace(2, 1),
        EllipticCurve(5, -3),
        WeilPolynomials(2, 1, ((1, -1), (1, 0, 2), (1, -2))),
        PointCounts(2, 1, (2, 4, 8)),
    ]
    for d in descs:
        data = descriptor_to_dict(d)
        assert descriptor_from_dict(json.loads(json.dumps(data))) == d
        path = tmp_path / "d.json"
        path.write_text(json.dumps(data))
        assert load_descriptor(path) == d


def test_descriptor_big_integers_as_strings():
    big = 2**80
    d = descriptor_from_dict({"kind": "point_counts", "q": "2", "d": "1", "counts": [str(big)]})
    assert d.counts == (big,)
    with pytest.raises(InvalidDescriptor):
        descriptor_from_dict({"kind": "affine", "q": "two", "d": 1})
    with pytest.raises(InvalidDescriptor):
        descriptor_from_dict({"kind": "torus", "q": 2, "d": 1})
