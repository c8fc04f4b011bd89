"""Finite experiments on the generated group: word enumeration, the
discreteness margin, freeness certification, torsion probing and the
dual-smallness scan.

The margin is computed exactly: the squared sup-distance of every word
matrix from the identity is an element of Q(beta), so the minimizer and
all ties are found by exact sign comparisons.  Intervals appear only in
the report.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction

from .construction import paper_generators
from .errors import DepthTooLarge
from .intervals import DEFAULT_BITS, Interval, interval_json
from .linalg import RingMat2, entry_dist_sq, sqrt_of_square_interval
from .projective import PingPongCertificate, certify_exponent
from .ring import QuarticElem, Sign, field_quantity_N

LETTER_NAMES = ("f", "f^-1", "g", "g^-1")
_INVERSE = (1, 0, 3, 2)
DEFAULT_DEPTH_CAP = 12


class ReducedWord:
    """Freely reduced word over {f, f^-1, g, g^-1}, stored as letter codes."""

    __slots__ = ("codes",)

    def __init__(self, codes=()):
        codes = tuple(codes)
        for a, b in zip(codes, codes[1:]):
            if _INVERSE[a] == b:
                raise ValueError("word is not freely reduced")
        self.codes = codes

    @classmethod
    def parse(cls, text: str) -> "ReducedWord":
        text = text.strip()
        if not text:
            return cls()
        codes = []
        for tok in text.split():
            if tok not in LETTER_NAMES:
                raise ValueError(f"unknown letter {tok!r}")
            codes.append(LETTER_NAMES.index(tok))
        return cls(codes)

    def __len__(self) -> int:
        return len(self.codes)

    def __eq__(self, other) -> bool:
        if not isinstance(other, ReducedWord):
            return NotImplemented
        return self.codes == other.codes

    def __hash__(self):
        return hash(self.codes)

    def __str__(self) -> str:
        return " ".join(LETTER_NAMES[c] for c in self.codes) or "<empty>"

    def __repr__(self) -> str:
        return f"ReducedWord({str(self)!r})"

    def inverse(self) -> "ReducedWord":
        return ReducedWord(tuple(_INVERSE[c] for c in reversed(self.codes)))

    def concat(self, other: "ReducedWord") -> "ReducedWord":
        codes = list(self.codes)
        for c in other.codes:
            if codes and _INVERSE[codes[-1]] == c:
                codes.pop()
            else:
                codes.append(c)
        return ReducedWord(codes)


def word_count(depth: int) -> int:
    """1 + sum over k of 4 * 3^(k-1): freely reduced words of length <= depth."""
    return 1 + sum(4 * 3 ** (k - 1) for k in range(1, depth + 1))


def enumerate_words(depth: int):
    """All freely reduced words of length <= depth, shortest first, each
    exactly once, lexicographic in the letter order f < f^-1 < g < g^-1."""
    if depth < 0:
        raise ValueError("depth must be nonnegative")
    yield ReducedWord()
    level = [()]
    for _ in range(depth):
        nxt = []
        for codes in level:
            for c in range(4):
                if codes and _INVERSE[codes[-1]] == c:
                    continue
                w = codes + (c,)
                nxt.append(w)
                yield ReducedWord(w)
        level = nxt


def _generator_powers(n: int, pair=None) -> list[RingMat2]:
    if pair is None:
        pair = paper_generators()
    p, q = pair
    pn = p ** n
    qn = q ** n
    return [pn, pn.inv(), qn, qn.inv()]


def evaluate_word(word: ReducedWord, n: int, pair=None) -> RingMat2:
    """Exact product with f -> P^n and g -> Q^n."""
    gens = _generator_powers(n, pair)
    out = RingMat2.identity()
    for c in word.codes:
        out = out * gens[c]
    return out


@dataclass
class MarginReport:
    n: int
    depth: int
    margin_sq: QuarticElem
    margin: Interval
    witness: ReducedWord
    ties: list[ReducedWord]
    factors: dict[str, Interval]
    per_depth: list[tuple[int, Interval]]
    views: tuple[int, int] = (0, 1)

    def to_json(self) -> dict:
        return {
            "N": self.n,
            "L": self.depth,
            "margin": interval_json(self.margin),
            "witness": str(self.witness),
            "ties": [str(w) for w in self.ties],
            "factors": {k: interval_json(v) for k, v in self.factors.items()},
            "per_depth": [
                {"L": d, "margin": interval_json(iv)} for d, iv in self.per_depth
            ],
            "views": list(self.views),
        }


def _scan_subtree(gens: list[RingMat2], first: int, depth: int,
                  views: tuple[int, int]):
    """Exact minimum of the squared product-metric distance over all reduced
    words of length <= depth starting with the given letter.

    Returns (min_sq, tie words, per-length minima as elements)."""
    ident = RingMat2.identity()
    best: QuarticElem | None = None
    ties: list[tuple[int, ...]] = []
    per_len: dict[int, QuarticElem] = {}
    stack = [((first,), gens[first])]
    while stack:
        codes, mat = stack.pop()
        d_sq = entry_dist_sq(mat, ident, views[0])
        d1_sq = entry_dist_sq(mat, ident, views[1])
        if (d1_sq - d_sq).sign() == Sign.POSITIVE:
            d_sq = d1_sq
        length = len(codes)
        cur = per_len.get(length)
        if cur is None or (d_sq - cur).sign() == Sign.NEGATIVE:
            per_len[length] = d_sq
        if best is None:
            best = d_sq
            ties = [codes]
        else:
            s = (d_sq - best).sign()
            if s == Sign.NEGATIVE:
                best = d_sq
                ties = [codes]
            elif s == Sign.ZERO:
                ties.append(codes)
        if length < depth:
            for c in range(3, -1, -1):
                if _INVERSE[codes[-1]] == c:
                    continue
                stack.append((codes + (c,), mat * gens[c]))
    return best, ties, per_len


def _scan_subtree_task(args):
    gen_texts, first, depth, views = args
    gens = [RingMat2.parse(t) for t in gen_texts]
    best, ties, per_len = _scan_subtree(gens, first, depth, views)
    return (best.to_text(), [list(t) for t in ties],
            {k: v.to_text() for k, v in per_len.items()})


def discreteness_margin(n: int, depth: int, pair=None, threads: int = 1,
                        depth_cap: int = DEFAULT_DEPTH_CAP,
                        views: tuple[int, int] = (0, 1),
                        bits: int = DEFAULT_BITS) -> MarginReport:
    """Minimum over nonempty reduced words of length <= depth of the
    product-metric distance max(d(view0(W), I), d(view1(W), I)), exact."""
    if n < 1 or depth < 1:
        raise ValueError("need N >= 1 and L >= 1")
    if depth > depth_cap:
        raise DepthTooLarge(f"L = {depth} beyond cap {depth_cap}")
    gens = _generator_powers(n, pair)

    results = []
    if threads > 1:
        gen_texts = [g.to_text() for g in gens]
        tasks = [(gen_texts, first, depth, views) for first in range(4)]
        with ProcessPoolExecutor(max_workers=min(threads, 4)) as pool:
            for best_text, tie_lists, per_len_text in pool.map(_scan_subtree_task, tasks):
                results.append((
                    QuarticElem.parse(best_text),
                    [tuple(t) for t in tie_lists],
                    {k: QuarticElem.parse(v) for k, v in per_len_text.items()},
                ))
    else:
        for first in range(4):
            results.append(_scan_subtree(gens, first, depth, views))

    best = None
    ties: list[tuple[int, ...]] = []
    per_len: dict[int, QuarticElem] = {}
    for b, t, pl in results:
        if best is None or (b - best).sign() == Sign.NEGATIVE:
            best = b
            ties = list(t)
        elif (b - best).sign() == Sign.ZERO:
            ties.extend(t)
        for length, v in pl.items():
            cur = per_len.get(length)
            if cur is None or (v - cur).sign() == Sign.NEGATIVE:
                per_len[length] = v

    ties.sort(key=lambda codes: (len(codes), codes))
    witness = ReducedWord(ties[0])
    wmat = evaluate_word(witness, n, pair)
    ident = RingMat2.identity()
    factors = {
        "s0": sqrt_of_square_interval(entry_dist_sq(wmat, ident, 0), bits),
        "s1": sqrt_of_square_interval(entry_dist_sq(wmat, ident, 1), bits),
        "s2": sqrt_of_square_interval(entry_dist_sq(wmat, ident, 2), bits),
    }
    cumulative = []
    running = None
    for length in range(1, depth + 1):
        v = per_len.get(length)
        if v is not None:
            if running is None or (v - running).sign() == Sign.NEGATIVE:
                running = v
        cumulative.append((length, sqrt_of_square_interval(running, bits)))
    return MarginReport(
        n=n, depth=depth, margin_sq=best,
        margin=sqrt_of_square_interval(best, bits),
        witness=witness,
        ties=[ReducedWord(t) for t in ties],
        factors=factors,
        per_depth=cumulative,
        views=views,
    )


@dataclass
class FreenessCertificate:
    n: int
    pingpong: PingPongCertificate
    crosscheck_depth: int
    words_checked: int
    identity_hits: list[str]

    def ok(self) -> bool:
        return not self.identity_hits


def freeness_certificate(n: int, pair=None,
                         crosscheck_depth: int = 8) -> FreenessCertificate:
    """Ping-pong certificate at the given exponent for the sigma2 views,
    cross-checked by exhaustive exact evaluation: no nonempty reduced word
    up to the cross-check depth may evaluate to plus or minus identity."""
    if n < 1:
        raise ValueError("exponent must be a positive integer")
    if pair is None:
        pair = paper_generators()
    p, q = pair
    cert = certify_exponent(p.real_view(2), q.real_view(2), n)
    if cert is None:
        raise ValueError(f"no ping-pong certificate at exponent {n}")
    gens = _generator_powers(n, pair)
    hits: list[str] = []
    count = 0
    stack = [((c,), gens[c]) for c in range(3, -1, -1)]
    while stack:
        codes, mat = stack.pop()
        count += 1
        if mat.is_plus_minus_identity():
            hits.append(str(ReducedWord(codes)))
        if len(codes) < crosscheck_depth:
            for c in range(3, -1, -1):
                if _INVERSE[codes[-1]] == c:
                    continue
                stack.append((codes + (c,), mat * gens[c]))
    return FreenessCertificate(n, cert, crosscheck_depth, count, hits)


# ---------------------------------------------------------------------------
# torsion


@dataclass
class TorsionResult:
    torsion: bool
    n_max: int
    order: int | None = None              # least n with A^n = I
    order_mod_center: int | None = None   # least n with A^n = +-I
    sign_at_first_hit: int | None = None

    def describe(self) -> str:
        if not self.torsion:
            return f"no power up to {self.n_max} equals +-identity"
        return (f"A^{self.order_mod_center} = "
                f"{'+' if self.sign_at_first_hit > 0 else '-'}I, "
                f"absolute order {self.order}")


def _trace_tuple(x: QuarticElem):
    return tuple(int(c) for c in x.coeffs())


def _mul4(a, b):
    a0, a1, a2, a3 = a
    b0, b1, b2, b3 = b
    return (
        a0 * b0 + 2 * (a1 * b3 + a2 * b2 + a3 * b1),
        a0 * b1 + a1 * b0 + 2 * (a2 * b3 + a3 * b2),
        a0 * b2 + a1 * b1 + a2 * b0 + 2 * a3 * b3,
        a0 * b3 + a1 * b2 + a2 * b1 + a3 * b0,
    )


def torsion_probe(a: RingMat2, k: int, n_max: int) -> TorsionResult:
    """First n <= n_max with a^n = +-I, exactly, else a non-torsion verdict.

    The trace sequence t_n = tr(a^n) obeys t_{n+1} = t_1 t_n - t_{n-1};
    candidates with t_n = +-2 are confirmed by an exact binary power.
    The verdict is independent of the embedding index (the Galois maps are
    injective); k is validated for interface compatibility.
    """
    if k not in (0, 1, 2, 3):
        raise ValueError("embedding index must be 0..3")
    if n_max < 1:
        raise ValueError("n_max must be positive")
    if not a.is_integral():
        prev = QuarticElem(2)
        cur = a.trace()
        t1 = a.trace()
        for n in range(1, n_max + 1):
            if cur == QuarticElem(2) or cur == QuarticElem(-2):
                res = _confirm_torsion(a, n, n_max)
                if res is not None:
                    return res
            prev, cur = cur, t1 * cur - prev
        return TorsionResult(False, n_max)
    t1 = _trace_tuple(a.trace())
    prev = (2, 0, 0, 0)
    cur = t1
    plus2 = (2, 0, 0, 0)
    minus2 = (-2, 0, 0, 0)
    for n in range(1, n_max + 1):
        if cur == plus2 or cur == minus2:
            res = _confirm_torsion(a, n, n_max)
            if res is not None:
                return res
        nxt = tuple(t1_c - p for t1_c, p in zip(_mul4(t1, cur), prev))
        prev, cur = cur, nxt
    return TorsionResult(False, n_max)


def _confirm_torsion(a: RingMat2, n: int, n_max: int) -> TorsionResult | None:
    power = a ** n
    if power.is_identity():
        return TorsionResult(True, n_max, order=n, order_mod_center=n,
                             sign_at_first_hit=1)
    if power.is_neg_identity():
        return TorsionResult(True, n_max, order=2 * n, order_mod_center=n,
                             sign_at_first_hit=-1)
    return None


# ---------------------------------------------------------------------------
# dual smallness


@dataclass
class DualSmallnessRow:
    word: ReducedWord
    d_sigma0: Interval
    d_sigma1: Interval
    d_sigma2: Interval
    entry_norms: list[Fraction]
    escape_bound_ok: bool

    def to_json(self) -> dict:
        return {
            "word": str(self.word),
            "d_sigma0": interval_json(self.d_sigma0),
            "d_sigma1": interval_json(self.d_sigma1),
            "d_sigma2": interval_json(self.d_sigma2),
            "entry_conjugate_norms": [str(v) for v in self.entry_norms],
            "escape_bound_ok": self.escape_bound_ok,
        }


@dataclass
class DualSmallnessTable:
    n: int
    depth: int
    eps: Fraction
    rows: list[DualSmallnessRow]

    def to_json(self) -> dict:
        return {
            "N": self.n, "L": self.depth, "eps": str(self.eps),
            "rows": [r.to_json() for r in self.rows],
        }


def dual_smallness_scan(n: int, depth: int, eps,
                        pair=None, bits: int = DEFAULT_BITS) -> DualSmallnessTable:
    """Words whose first-factor view is eps-close to the identity, with the
    conjugate-norm escape bound checked exactly on every nonzero entry
    difference from the identity."""
    eps = Fraction(eps)
    if eps <= 0:
        raise ValueError("eps must be positive")
    gens = _generator_powers(n, pair)
    ident = RingMat2.identity()
    eps_sq = QuarticElem(eps * eps)
    rows: list[DualSmallnessRow] = []
    stack = [((c,), gens[c]) for c in range(3, -1, -1)]
    order: list[tuple[tuple[int, ...], RingMat2]] = []
    while stack:
        codes, mat = stack.pop()
        order.append((codes, mat))
        if len(codes) < depth:
            for c in range(3, -1, -1):
                if _INVERSE[codes[-1]] == c:
                    continue
                stack.append((codes + (c,), mat * gens[c]))
    order.sort(key=lambda item: (len(item[0]), item[0]))
    for codes, mat in order:
        d0_sq = entry_dist_sq(mat, ident, 0)
        if (d0_sq - eps_sq).sign() != Sign.NEGATIVE:
            continue
        diff_entries = (mat - ident).entries()
        norms = []
        bound_ok = True
        for x in diff_entries:
            if x.is_zero():
                continue
            nv = field_quantity_N(x)
            norms.append(nv)
            if nv < 1:
                bound_ok = False
        rows.append(DualSmallnessRow(
            word=ReducedWord(codes),
            d_sigma0=sqrt_of_square_interval(d0_sq, bits),
            d_sigma1=sqrt_of_square_interval(entry_dist_sq(mat, ident, 1), bits),
            d_sigma2=sqrt_of_square_interval(entry_dist_sq(mat, ident, 2), bits),
            entry_norms=norms,
            escape_bound_ok=bound_ok,
        ))
    return DualSmallnessTable(n, depth, eps, rows)
