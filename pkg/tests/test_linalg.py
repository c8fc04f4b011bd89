"""Matrices, classification, regular representations, eigen data."""

import pytest

from quartic.cubic import CubicElem, CubicMat2
from quartic.errors import (
    NotUnimodular,
    ParabolicNotSupported,
    ScalarMatrix,
    SingularMatrix,
    WrongSubring,
)
from quartic.extension import QuadExt
from quartic.linalg import (
    MatClass,
    RingMat2,
    as_paper_hyperbolic,
    charpoly_fraction,
    classify,
    eigen2,
    embedded_charpoly_product,
    entry_dist_sq,
    min_entry_dist_sq,
    regular_rep,
    share_eigenvector,
    spectrum_decomposition_holds,
)
from quartic.construction import paper_generators
from quartic.ring import ONE, QuarticElem, galois


P, Q = paper_generators()


def random_word(rng, max_len=6):
    gens = [P, P.inv(), Q, Q.inv()]
    out = RingMat2.identity()
    for _ in range(rng.randint(1, max_len)):
        out = out * gens[rng.randrange(4)]
    return out


# ---------------------------------------------------------------------------
# basic matrix algebra


def test_pow_zero_is_identity():
    assert (P ** 0).is_identity()


def test_q_times_inverse():
    assert (Q * Q.inv()).is_identity()


def test_q_squared_closed_form():
    t = QuarticElem(3, 0, 2, 0)
    expected = RingMat2(t * t - ONE, t, -t, QuarticElem(-1))
    assert Q ** 2 == expected


def test_negative_powers():
    assert Q ** -3 == (Q ** 3).inv()


def test_singular_inverse_raises():
    with pytest.raises(SingularMatrix):
        RingMat2(ONE, ONE, ONE, ONE).inv()


def test_matrix_text_roundtrip():
    assert RingMat2.parse(P.to_text()) == P
    assert RingMat2.from_json(P.to_json()) == P


# ---------------------------------------------------------------------------
# classification


def test_classification_table():
    expected = {
        ("P", 0): MatClass.ELLIPTIC,
        ("P", 1): MatClass.LOXODROMIC,
        ("P", 2): MatClass.HYPERBOLIC,
        ("P", 3): MatClass.LOXODROMIC,
        ("Q", 0): MatClass.HYPERBOLIC,
        ("Q", 1): MatClass.ELLIPTIC,
        ("Q", 2): MatClass.HYPERBOLIC,
        ("Q", 3): MatClass.ELLIPTIC,
    }
    for (name, k), want in expected.items():
        mat = P if name == "P" else Q
        assert classify(mat, k) == want, (name, k)


def test_loxodromic_counts_as_source_hyperbolic():
    assert as_paper_hyperbolic(classify(P, 1))
    assert not as_paper_hyperbolic(classify(P, 0))


def test_classify_requires_det_one():
    with pytest.raises(NotUnimodular):
        classify(RingMat2(QuarticElem(2), QuarticElem(0),
                          QuarticElem(0), QuarticElem(1)), 0)


def test_classify_conjugation_invariant(rng):
    for _ in range(15):
        a = random_word(rng, 4)
        w = random_word(rng, 4)
        conj = w * a * w.inv()
        for k in range(4):
            assert classify(conj, k) == classify(a, k)


def test_trace_commutes_with_embedding(rng):
    for _ in range(15):
        a = random_word(rng, 4)
        for k in range(4):
            assert galois(a.trace(), k) == a.embed(k).trace()


# ---------------------------------------------------------------------------
# regular representations


def test_psi_p_first_row():
    rr = regular_rep(P, 4)
    assert [int(c) for c in rr.entries[0]] == [5, -4, 2, -6, 1, 0, 0, 0]


def test_psi_identity():
    rr = regular_rep(RingMat2.identity(), 4)
    assert rr.is_identity()


def test_psi_inverse_product():
    assert (regular_rep(Q, 4) * regular_rep(Q.inv(), 4)).is_identity()


def test_psi_q_row_four_computed():
    rr = regular_rep(Q, 4)
    assert [int(c) for c in rr.entries[3]] == [0, 2, 0, 3, 0, 0, 0, 1]


def test_multiplicative_kappa4(rng):
    for _ in range(25):
        a = random_word(rng)
        b = random_word(rng)
        assert regular_rep(a * b, 4) == regular_rep(a, 4) * regular_rep(b, 4)


def test_det_one_kappa4(rng):
    for _ in range(200):
        assert regular_rep(random_word(rng), 4).det() == 1


def test_kappa2_requires_even_subring():
    with pytest.raises(WrongSubring):
        regular_rep(P, 2)
    rr = regular_rep(Q, 2)
    assert [int(c) for c in rr.entries[0]] == [3, 4, 1, 0]


def test_kappa3_uses_cubic_matrices(rng):
    with pytest.raises(WrongSubring):
        regular_rep(Q, 3)
    def rand_cubic():
        out = CubicMat2.identity()
        for _ in range(rng.randint(1, 3)):
            x = CubicElem(rng.randint(-3, 3), rng.randint(-3, 3),
                          rng.randint(-3, 3))
            if rng.random() < 0.5:
                out = out * CubicMat2(CubicElem(1), x, CubicElem(0), CubicElem(1))
            else:
                out = out * CubicMat2(CubicElem(1), CubicElem(0), x, CubicElem(1))
        return out
    for _ in range(15):
        a, b = rand_cubic(), rand_cubic()
        assert regular_rep(a * b, 3) == regular_rep(a, 3) * regular_rep(b, 3)
        assert regular_rep(a, 3).det() == 1


def test_spectrum_decomposition(rng):
    assert spectrum_decomposition_holds(P)
    assert spectrum_decomposition_holds(Q)
    for _ in range(10):
        assert spectrum_decomposition_holds(random_word(rng, 4))


def test_charpoly_leading_coefficients():
    coeffs = charpoly_fraction([list(r) for r in regular_rep(P, 4).entries])
    assert coeffs[0] == 1
    assert coeffs[-1] == 1          # det of an SL2 source block structure
    assert coeffs == embedded_charpoly_product(P)


# ---------------------------------------------------------------------------
# eigen data


def test_eigen_q_trace_identity():
    e = eigen2(Q, 0)
    lam, mu = e.lam_dominant, e.lam_recessive
    assert lam + mu == QuadExt.of_base(Q.trace(), lam.d)
    assert lam * mu == QuadExt.of_base(ONE, lam.d)
    assert 5 < e.lam_dominant_interval.lo < e.lam_dominant_interval.hi < 6


def test_eigen_p_sigma2_moduli():
    e = eigen2(P, 2)
    assert e.mat_class == MatClass.HYPERBOLIC
    assert e.lam_dominant_interval.lo > 1
    assert 0 < e.lam_recessive_interval.lo < e.lam_recessive_interval.hi < 1


def test_eigen_parabolic_rejected():
    with pytest.raises(ParabolicNotSupported):
        eigen2(RingMat2.identity(), 0)
    shear = RingMat2(ONE, ONE, QuarticElem(0), ONE)
    with pytest.raises(ParabolicNotSupported):
        eigen2(shear, 0)


def test_eigen_elliptic_reports_unit_circle():
    e = eigen2(P, 0)
    assert e.mat_class == MatClass.ELLIPTIC
    assert e.modulus_sq_interval.lo == 1 == e.modulus_sq_interval.hi


def test_eigen_loxodromic_modulus():
    e = eigen2(P, 1)
    assert e.mat_class == MatClass.LOXODROMIC
    assert e.modulus_sq_interval.lo > 1


# ---------------------------------------------------------------------------
# shared eigenvectors


def test_share_eigenvector_reference_pair():
    assert share_eigenvector(P, Q, 2) is False


def test_share_eigenvector_self_and_inverse():
    assert share_eigenvector(P, P, 2) is True
    assert share_eigenvector(Q, Q.inv(), 0) is True


def test_share_eigenvector_scalar_raises():
    with pytest.raises(ScalarMatrix):
        share_eigenvector(RingMat2.identity(), Q, 0)


def test_share_eigenvector_embedding_independent(rng):
    for _ in range(10):
        a = random_word(rng, 4)
        b = random_word(rng, 4)
        if a.is_scalar() or b.is_scalar():
            continue
        verdicts = {share_eigenvector(a, b, k) for k in range(4)}
        assert len(verdicts) == 1


def test_entry_dist_is_exact_square():
    d = entry_dist_sq(Q, RingMat2.identity(), 0)
    # entries of Q - I: 2 + 2 b^2, 1, -1, -1; the largest square wins
    assert d == (QuarticElem(2, 0, 2, 0)) ** 2


def test_min_entry_dist():
    # the smallest distance from the identity over Q's entries is 1
    d = min_entry_dist_sq(Q, RingMat2.identity(), 0)
    assert d == QuarticElem(1)
