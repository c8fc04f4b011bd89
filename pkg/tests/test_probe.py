"""Word enumeration, margins, freeness, torsion, dual smallness."""

from fractions import Fraction

import pytest

from quartic.construction import paper_generators
from quartic.errors import DepthTooLarge
from quartic.linalg import RingMat2, entry_dist_sq
from quartic.probe import (
    ReducedWord,
    discreteness_margin,
    dual_smallness_scan,
    enumerate_words,
    evaluate_word,
    freeness_certificate,
    torsion_probe,
    word_count,
)
from quartic.ring import QuarticElem, Sign

P, Q = paper_generators()


# ---------------------------------------------------------------------------
# words


def test_word_counts():
    assert word_count(0) == 1
    assert word_count(1) == 5
    assert word_count(3) == 53
    assert len(list(enumerate_words(0))) == 1
    assert len(list(enumerate_words(1))) == 5
    assert len(list(enumerate_words(3))) == 53


def test_words_are_unique_and_reduced():
    seen = set()
    for w in enumerate_words(4):
        assert w.codes not in seen
        seen.add(w.codes)
        ReducedWord(w.codes)    # revalidates free reduction


def test_reduced_word_rejects_cancellation():
    with pytest.raises(ValueError):
        ReducedWord((0, 1))


def test_parse_and_str_roundtrip():
    w = ReducedWord.parse("f g f^-1 g^-1")
    assert str(w) == "f g f^-1 g^-1"
    assert w.inverse() == ReducedWord.parse("g f g^-1 f^-1")


def test_evaluate_word_examples():
    assert evaluate_word(ReducedWord(), 5).is_identity()
    comm = evaluate_word(ReducedWord.parse("f g f^-1 g^-1"), 1)
    assert not comm.is_identity()
    assert evaluate_word(ReducedWord.parse("f f"), 1) == P ** 2


def test_evaluate_word_homomorphism(rng):
    words = [w for w in enumerate_words(3) if len(w) > 0]
    for _ in range(500):
        u = words[rng.randrange(len(words))]
        v = words[rng.randrange(len(words))]
        assert (evaluate_word(u.concat(v), 2)
                == evaluate_word(u, 2) * evaluate_word(v, 2))


# ---------------------------------------------------------------------------
# margins


def test_margin_depth_one_is_min_over_generators():
    rep = discreteness_margin(2, 1)
    ident = RingMat2.identity()
    gens = [P ** 2, (P ** 2).inv(), Q ** 2, (Q ** 2).inv()]
    best = None
    for g in gens:
        d0 = entry_dist_sq(g, ident, 0)
        d1 = entry_dist_sq(g, ident, 1)
        m = d1 if (d1 - d0).sign() == Sign.POSITIVE else d0
        if best is None or (m - best).sign() == Sign.NEGATIVE:
            best = m
    assert rep.margin_sq == best


def test_margin_monotone_and_positive():
    rep = discreteness_margin(2, 4)
    assert rep.margin.lo > 0
    values = [iv.hi for _, iv in rep.per_depth]
    assert all(a >= b for a, b in zip(values, values[1:]))


def test_margin_witness_ties_include_inverse():
    rep = discreteness_margin(2, 3)
    words = {str(w) for w in rep.ties}
    assert str(rep.witness) in words
    assert str(rep.witness.inverse()) in words


def test_margin_threads_agree():
    a = discreteness_margin(2, 3, threads=1)
    b = discreteness_margin(2, 3, threads=2)
    assert a.margin_sq == b.margin_sq
    assert str(a.witness) == str(b.witness)
    assert [str(w) for w in a.ties] == [str(w) for w in b.ties]


def test_margin_depth_cap():
    with pytest.raises(DepthTooLarge):
        discreteness_margin(1, 13)


def test_margin_json_schema_fields():
    rep = discreteness_margin(2, 2)
    blob = rep.to_json()
    assert set(blob) >= {"N", "L", "margin", "witness", "factors"}
    assert set(blob["factors"]) == {"s0", "s1", "s2"}


# ---------------------------------------------------------------------------
# freeness certificate


def test_freeness_certificate_rejects_zero():
    with pytest.raises(ValueError):
        freeness_certificate(0)


def test_freeness_certificate_smoke():
    cert = freeness_certificate(3, crosscheck_depth=5)
    assert cert.ok()
    assert cert.words_checked == word_count(5) - 1
    assert cert.pingpong.exponent == 3


# ---------------------------------------------------------------------------
# torsion


def test_torsion_minus_identity():
    neg = RingMat2(QuarticElem(-1), QuarticElem(0), QuarticElem(0), QuarticElem(-1))
    res = torsion_probe(neg, 0, 10)
    assert res.torsion and res.order == 2 and res.order_mod_center == 1


def test_torsion_quarter_rotation():
    rot = RingMat2(QuarticElem(0), QuarticElem(1), QuarticElem(-1), QuarticElem(0))
    res = torsion_probe(rot, 0, 10)
    assert res.torsion and res.order == 4 and res.order_mod_center == 2
    assert res.sign_at_first_hit == -1


def test_torsion_trace_heuristic_agreement():
    # order-6 rotation: trace 1 = 2 cos(pi/3)
    rot6 = RingMat2(QuarticElem(1), QuarticElem(-1), QuarticElem(1), QuarticElem(0))
    res = torsion_probe(rot6, 0, 20)
    assert res.torsion and res.order == 6


def test_torsion_p_short_horizon():
    res = torsion_probe(P, 0, 500)
    assert not res.torsion


def test_torsion_rejects_bad_embedding():
    with pytest.raises(ValueError):
        torsion_probe(P, 7, 10)


# ---------------------------------------------------------------------------
# dual smallness


def test_dual_smallness_rows_have_norm_bound():
    table = dual_smallness_scan(2, 3, 4)
    assert table.rows, "expected some rows at a generous threshold"
    for row in table.rows:
        assert row.escape_bound_ok
        assert all(v >= 1 for v in row.entry_norms)
        assert len(row.word) >= 1


def test_dual_smallness_escape_visible():
    # close in the first factor forces large third-view magnitudes
    table = dual_smallness_scan(2, 3, 2)
    for row in table.rows:
        assert row.d_sigma2.hi > row.d_sigma0.lo


def test_dual_smallness_tiny_eps_empty():
    table = dual_smallness_scan(2, 2, Fraction(1, 1000))
    assert table.rows == []
