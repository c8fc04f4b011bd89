"""Dominance analysis, north-south data and ping-pong certificates."""

import json
from fractions import Fraction

import pytest

from quartic.construction import paper_generators
from quartic.errors import HypothesisViolated, NotHyperbolicLike
from quartic.linalg import RingMat2, regular_rep
from quartic.projective import (
    PingPongCertificate,
    ProjPoint,
    analyze_dominance,
    covector_annihilates,
    dominant_eigenvalue,
    free_pair_power,
    hyperbolic_like,
    noncommuting_check,
    pingpong_exponent,
    power_data,
    proj_dist,
    proj_equal,
    verify_certificate,
)
from quartic.ring import ONE, ZERO, QuarticElem

P, Q = paper_generators()
A2 = P.real_view(2)
B2 = Q.real_view(2)


@pytest.fixture(scope="module")
def certificate():
    return pingpong_exponent(A2, B2)


# ---------------------------------------------------------------------------
# dominance


def test_dominant_psi_p():
    rec = dominant_eigenvalue(regular_rep(P, 4))
    assert rec is not None
    assert rec.block_k == 2
    assert rec.interval.lo > 1


def test_dominant_psi_q_double_max():
    ana = analyze_dominance(regular_rep(Q, 4))
    assert ana.record is None
    assert ana.reason == "double maximal eigenvalue"


def test_dominant_identity_none():
    assert dominant_eigenvalue(RingMat2.identity()) is None


def test_dominant_rotation_none():
    h = Fraction(1, 2)
    rot = RingMat2(QuarticElem(0, 0, h), QuarticElem(0, 0, -h),
                   QuarticElem(0, 0, h), QuarticElem(0, 0, h))
    assert rot.det() == ONE
    assert dominant_eigenvalue(rot) is None


def test_hyperbolic_like_psi():
    assert hyperbolic_like(regular_rep(P, 4)) is not None
    assert hyperbolic_like(regular_rep(Q, 4)) is None


def test_hyperbolic_like_cross_membership():
    data = hyperbolic_like(regular_rep(P, 4))
    assert data.dim == 8
    assert covector_annihilates(data.cross_minus, data.attracting)
    assert covector_annihilates(data.cross_plus, data.repelling)
    assert not covector_annihilates(data.cross_plus, data.attracting)
    assert not covector_annihilates(data.cross_minus, data.repelling)


def test_hyperbolic_like_dim2_crosses_are_opposite_points():
    data = hyperbolic_like(B2)
    assert data.dim == 2
    assert proj_equal(data.cross_plus, data.repelling)
    assert proj_equal(data.cross_minus, data.attracting)
    assert not proj_equal(data.attracting, data.repelling)


def test_power_compatibility():
    base = hyperbolic_like(B2)
    squared = hyperbolic_like(B2 * B2)
    assert proj_equal(base.attracting, squared.attracting)
    assert proj_equal(base.repelling, squared.repelling)
    inverse = hyperbolic_like(B2.inv())
    assert proj_equal(base.attracting, inverse.repelling)
    assert proj_equal(base.repelling, inverse.attracting)
    att, rep = power_data(base, 5)
    assert proj_equal(att, base.attracting) and proj_equal(rep, base.repelling)
    att, rep = power_data(base, -5)
    assert proj_equal(att, base.repelling) and proj_equal(rep, base.attracting)
    with pytest.raises(ValueError):
        power_data(base, 0)


# ---------------------------------------------------------------------------
# chordal distance


def test_proj_dist_zero_for_equal_points():
    p = ProjPoint((ONE, QuarticElem(2)))
    q = ProjPoint((QuarticElem(3), QuarticElem(6)))
    d = proj_dist(p, q)
    assert d.lo == 0 == d.hi


def test_proj_dist_orthogonal():
    d = proj_dist(ProjPoint((ONE, ZERO)), ProjPoint((ZERO, ONE)))
    assert d.lo == 1 == d.hi


def test_proj_dist_diagonal_pair():
    d = proj_dist(ProjPoint((ONE, ONE)), ProjPoint((ONE, -ONE)))
    assert d.lo == 1 == d.hi


# ---------------------------------------------------------------------------
# ping-pong certificates


def test_certificate_found(certificate):
    assert 1 <= certificate.exponent <= 1 << 16
    ok, problems = verify_certificate(certificate)
    assert ok, problems


def test_certificate_roundtrip(certificate):
    blob = certificate.to_json_text()
    again = PingPongCertificate.from_json(json.loads(blob))
    ok, problems = verify_certificate(again)
    assert ok, problems
    assert again.exponent == certificate.exponent


def test_certificate_tamper_detected(certificate):
    blob = json.loads(certificate.to_json_text())
    blob["balls"][0]["radius"] = str(Fraction(1, 2))   # far too large
    tampered = PingPongCertificate.from_json(blob)
    ok, problems = verify_certificate(tampered)
    assert not ok and problems


def test_certificate_wrong_center_detected(certificate):
    blob = json.loads(certificate.to_json_text())
    blob["balls"][0]["center"]["v1"]["a"] = "17 0 0 0"
    tampered = PingPongCertificate.from_json(blob)
    ok, problems = verify_certificate(tampered)
    assert not ok


def test_pingpong_same_matrix_rejected():
    with pytest.raises(HypothesisViolated):
        pingpong_exponent(A2, A2)


def test_pingpong_elliptic_rejected():
    with pytest.raises(NotHyperbolicLike):
        pingpong_exponent(P, B2)   # P itself is elliptic in the identity view


def test_no_short_relations(certificate):
    """The certified pair satisfies no relation up to length 10."""
    n = certificate.exponent
    a = A2 ** n
    b = B2 ** n
    gens = [a, a.inv(), b, b.inv()]
    inverse = (1, 0, 3, 2)
    stack = [((c,), gens[c]) for c in range(4)]
    count = 0
    while stack:
        codes, mat = stack.pop()
        count += 1
        assert not mat.is_identity(), codes
        if len(codes) < 10:
            for c in range(4):
                if inverse[codes[-1]] == c:
                    continue
                stack.append((codes + (c,), mat * gens[c]))
    assert count == sum(4 * 3 ** (k - 1) for k in range(1, 11))


# ---------------------------------------------------------------------------
# commuting and freeness wrappers


def test_noncommuting_reference_pair():
    res = noncommuting_check(A2, B2)
    assert res and res.commutator_nontrivial


def test_noncommuting_power_pair_fails_hypotheses():
    res = noncommuting_check(A2, A2 * A2)
    assert not res
    assert "fixed" in res.reason


def test_noncommuting_inverse_pair_fails_hypotheses():
    res = noncommuting_check(B2, B2.inv())
    assert not res


def test_free_pair_power(certificate):
    fp = free_pair_power(P, Q)
    assert fp.exponent == certificate.exponent
    ok, _ = verify_certificate(fp.certificate)
    assert ok


def test_free_pair_power_rejects_shared_eigenvectors():
    with pytest.raises(HypothesisViolated):
        free_pair_power(P, P)


def test_free_pair_power_inverse_generator():
    fp = free_pair_power(P, Q.inv())
    assert fp.exponent >= 1
