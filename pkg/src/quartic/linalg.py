"""2x2 matrices over Q(beta), trace classification, and the regular
representations into GL(2k, Q) for k = 2, 3, 4.

Everything is exact.  Embedded views reuse the scalar Galois machinery;
classification is a trace test; the block form of the regular
representation is the matrix of left multiplication on the coefficient
module, so multiplicativity is a theorem the tests re-check rather than
an approximation.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
import enum

from .cubic import CubicMat2
from .errors import (
    NotUnimodular,
    ParabolicNotSupported,
    ScalarMatrix,
    SingularMatrix,
    WrongSubring,
)
from .extension import QuadExt
from .intervals import DEFAULT_BITS, Interval
from .ring import (
    ONE,
    ZERO,
    EmbeddedComplex,
    QuadRat,
    QuarticElem,
    Sign,
    galois,
)

_ZERO_QUADRAT = QuadRat(0)


class MatClass(enum.Enum):
    ELLIPTIC = "elliptic"
    PARABOLIC = "parabolic"
    HYPERBOLIC = "hyperbolic"
    LOXODROMIC = "loxodromic"


def as_paper_hyperbolic(cls: MatClass) -> bool:
    """Loxodromic elements of SL(2,C) count as hyperbolic in the source
    terminology; report both under one predicate."""
    return cls in (MatClass.HYPERBOLIC, MatClass.LOXODROMIC)


class RingMat2:
    """2x2 matrix over Q(beta), row major."""

    __slots__ = ("e11", "e12", "e21", "e22")

    def __init__(self, e11, e12, e21, e22):
        self.e11 = _q(e11)
        self.e12 = _q(e12)
        self.e21 = _q(e21)
        self.e22 = _q(e22)

    @classmethod
    def identity(cls) -> "RingMat2":
        return cls(ONE, ZERO, ZERO, ONE)

    @classmethod
    def parse(cls, text: str) -> "RingMat2":
        """Wire format: 'q0 q1 q2 q3; q0 q1 q2 q3; ...' four entries."""
        parts = [p.strip() for p in text.split(";")]
        if len(parts) != 4:
            raise ValueError(f"expected 4 entries separated by ';' in {text!r}")
        return cls(*(QuarticElem.parse(p) for p in parts))

    @classmethod
    def from_json(cls, rows: list) -> "RingMat2":
        flat = [Fraction(c) for entry in rows for c in entry]
        if len(flat) != 16:
            raise ValueError("matrix JSON must be 4 entries of 4 coefficients")
        es = [QuarticElem(*flat[i:i + 4]) for i in range(0, 16, 4)]
        return cls(*es)

    def entries(self):
        return (self.e11, self.e12, self.e21, self.e22)

    def to_text(self) -> str:
        return "; ".join(e.to_text() for e in self.entries())

    def to_json(self) -> list:
        return [[str(c) for c in e.coeffs()] for e in self.entries()]

    def __repr__(self) -> str:
        return f"RingMat2({self.to_text()!r})"

    def __eq__(self, other) -> bool:
        if not isinstance(other, RingMat2):
            return NotImplemented
        return self.entries() == other.entries()

    def __hash__(self):
        return hash(self.entries())

    def __mul__(self, other: "RingMat2") -> "RingMat2":
        return RingMat2(
            self.e11 * other.e11 + self.e12 * other.e21,
            self.e11 * other.e12 + self.e12 * other.e22,
            self.e21 * other.e11 + self.e22 * other.e21,
            self.e21 * other.e12 + self.e22 * other.e22,
        )

    def __add__(self, other: "RingMat2") -> "RingMat2":
        return RingMat2(self.e11 + other.e11, self.e12 + other.e12,
                        self.e21 + other.e21, self.e22 + other.e22)

    def __sub__(self, other: "RingMat2") -> "RingMat2":
        return RingMat2(self.e11 - other.e11, self.e12 - other.e12,
                        self.e21 - other.e21, self.e22 - other.e22)

    def __neg__(self) -> "RingMat2":
        return RingMat2(-self.e11, -self.e12, -self.e21, -self.e22)

    def scale(self, c) -> "RingMat2":
        return RingMat2(self.e11 * c, self.e12 * c, self.e21 * c, self.e22 * c)

    def det(self) -> QuarticElem:
        return self.e11 * self.e22 - self.e12 * self.e21

    def trace(self) -> QuarticElem:
        return self.e11 + self.e22

    def inv(self) -> "RingMat2":
        d = self.det()
        if d.is_zero():
            raise SingularMatrix("matrix is singular")
        dinv = d.inv()
        return RingMat2(self.e22 * dinv, -self.e12 * dinv,
                        -self.e21 * dinv, self.e11 * dinv)

    def __pow__(self, n: int) -> "RingMat2":
        if n < 0:
            return self.inv() ** (-n)
        result = RingMat2.identity()
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def is_identity(self) -> bool:
        return (self.e11.is_one() and self.e12.is_zero()
                and self.e21.is_zero() and self.e22.is_one())

    def is_neg_identity(self) -> bool:
        return (self.e11 == QuarticElem(-1) and self.e12.is_zero()
                and self.e21.is_zero() and self.e22 == QuarticElem(-1))

    def is_plus_minus_identity(self) -> bool:
        return self.is_identity() or self.is_neg_identity()

    def is_scalar(self) -> bool:
        return self.e12.is_zero() and self.e21.is_zero() and self.e11 == self.e22

    def is_integral(self) -> bool:
        return all(e.is_integral() for e in self.entries())

    def real_view(self, k: int) -> "RingMat2":
        """The matrix with the real embedding k (0 or 2) applied entrywise."""
        if k not in (0, 2):
            raise ValueError("real views exist only for k = 0 and k = 2")
        if k == 0:
            return self
        return RingMat2(*(e.conj_even() for e in self.entries()))

    def embed(self, k: int) -> "EmbeddedMat2":
        return EmbeddedMat2(tuple(galois(e, k) for e in self.entries()), k)

    def conjugate_by(self, w: "RingMat2") -> "RingMat2":
        return w * self * w.inv()

    def commutator(self, other: "RingMat2") -> "RingMat2":
        return self * other * self.inv() * other.inv()


def _q(x) -> QuarticElem:
    if isinstance(x, QuarticElem):
        return x
    return QuarticElem(x)


@dataclass(frozen=True)
class EmbeddedMat2:
    """Entrywise Galois image of a RingMat2; k records the embedding.

    Products are defined whenever both factors live in one embedded field
    (the scalar multiplication guards this); inverses are restricted to
    determinant one, where the adjugate needs no division.
    """

    entries: tuple[EmbeddedComplex, EmbeddedComplex, EmbeddedComplex, EmbeddedComplex]
    k: int

    def trace(self) -> EmbeddedComplex:
        return self.entries[0] + self.entries[3]

    def det(self) -> EmbeddedComplex:
        e = self.entries
        return e[0] * e[3] - e[1] * e[2]

    def is_real(self) -> bool:
        return all(e.is_real() for e in self.entries)

    def __mul__(self, other: "EmbeddedMat2") -> "EmbeddedMat2":
        a = self.entries
        b = other.entries
        return EmbeddedMat2((
            a[0] * b[0] + a[1] * b[2],
            a[0] * b[1] + a[1] * b[3],
            a[2] * b[0] + a[3] * b[2],
            a[2] * b[1] + a[3] * b[3],
        ), self.k)

    def adjugate_inv(self) -> "EmbeddedMat2":
        one = EmbeddedComplex(ONE, _ZERO_QUADRAT)
        if self.det() != one:
            raise NotUnimodular("embedded inverse implemented for det 1 only")
        e = self.entries
        return EmbeddedMat2((e[3], -e[1], -e[2], e[0]), self.k)

    def commutator(self, other: "EmbeddedMat2") -> "EmbeddedMat2":
        return self * other * self.adjugate_inv() * other.adjugate_inv()

    def is_identity(self) -> bool:
        e = self.entries
        return (e[0].re.is_one() and e[0].im_scale.is_zero()
                and e[1].is_zero() and e[2].is_zero()
                and e[3].re.is_one() and e[3].im_scale.is_zero())

    def entry_intervals(self, bits: int = DEFAULT_BITS):
        return [e.intervals(bits) for e in self.entries]


def mat_mul(a: RingMat2, b: RingMat2) -> RingMat2:
    return a * b


def mat_inv(a: RingMat2) -> RingMat2:
    return a.inv()


def mat_pow(a: RingMat2, n: int) -> RingMat2:
    return a ** n


def classify(a: RingMat2, k: int) -> MatClass:
    """Trace classification of the k-th embedded view; requires det = 1."""
    if a.det() != ONE:
        raise NotUnimodular(f"det is {a.det().to_text()}, expected 1")
    t = galois(a.trace(), k)
    if not t.is_real():
        return MatClass.LOXODROMIC
    s = (t.re * t.re - QuarticElem(4)).sign()
    if s == Sign.NEGATIVE:
        return MatClass.ELLIPTIC
    if s == Sign.ZERO:
        return MatClass.PARABOLIC
    return MatClass.HYPERBOLIC


# ---------------------------------------------------------------------------
# regular representations


@dataclass(frozen=True)
class RegularRep:
    """2k x 2k rational matrix, the image of a 2x2 matrix over Z[2^(1/k)]."""

    kappa: int
    entries: tuple[tuple[Fraction, ...], ...]
    source: object = None

    def __mul__(self, other: "RegularRep") -> "RegularRep":
        if self.kappa != other.kappa:
            raise ValueError("mixed block sizes")
        n = 2 * self.kappa
        a, b = self.entries, other.entries
        rows = tuple(
            tuple(sum(a[i][l] * b[l][j] for l in range(n)) for j in range(n))
            for i in range(n))
        return RegularRep(self.kappa, rows)

    def __eq__(self, other) -> bool:
        if not isinstance(other, RegularRep):
            return NotImplemented
        return self.kappa == other.kappa and self.entries == other.entries

    def is_identity(self) -> bool:
        n = 2 * self.kappa
        return all(self.entries[i][j] == (1 if i == j else 0)
                   for i in range(n) for j in range(n))

    def det(self) -> Fraction:
        return det_fraction([list(r) for r in self.entries])

    def to_int_grid(self) -> list[list]:
        return [[c if c.denominator != 1 else int(c) for c in row]
                for row in self.entries]


def _block(coeffs, kappa: int):
    """Matrix of multiplication by sum(coeffs[i] * r^i) on the basis
    {1, r, .., r^(kappa-1)} with r^kappa = 2."""
    return [[coeffs[(i - j) % kappa] * (2 if i < j else 1)
             for j in range(kappa)] for i in range(kappa)]


def regular_rep(a, kappa: int) -> RegularRep:
    """The 2k x 2k rational image of a; kappa selects the ground ring.

    kappa = 4 takes a RingMat2 over Q(beta); kappa = 2 requires the entries
    to lie in Q(sqrt2); kappa = 3 takes a CubicMat2 over Q(2^(1/3)).
    """
    if kappa == 3:
        if not isinstance(a, CubicMat2):
            raise WrongSubring("kappa = 3 needs a matrix over Q(2^(1/3))")
        blocks = [_block(e.coeffs(), 3) for e in a.entries()]
    elif kappa in (2, 4):
        if not isinstance(a, RingMat2):
            raise WrongSubring(f"kappa = {kappa} needs a matrix over Q(beta)")
        coeff_lists = []
        for e in a.entries():
            if kappa == 2:
                if not e.in_even_subring():
                    raise WrongSubring(
                        f"entry {e.to_text()} is not in Q(sqrt2)")
                coeff_lists.append((e.q0, e.q2))
            else:
                coeff_lists.append(e.coeffs())
        blocks = [_block(cs, kappa) for cs in coeff_lists]
    else:
        raise ValueError(f"kappa must be 2, 3 or 4, not {kappa}")

    b11, b12, b21, b22 = blocks
    rows = []
    for i in range(kappa):
        rows.append(tuple(b11[i]) + tuple(b12[i]))
    for i in range(kappa):
        rows.append(tuple(b21[i]) + tuple(b22[i]))
    return RegularRep(kappa, tuple(tuple(Fraction(c) for c in r) for r in rows),
                      source=a)


# ---------------------------------------------------------------------------
# exact rational matrix helpers


def det_fraction(rows) -> Fraction:
    """Determinant by fraction-free-ish Gaussian elimination."""
    n = len(rows)
    m = [[Fraction(x) for x in row] for row in rows]
    det = Fraction(1)
    for col in range(n):
        pivot = None
        for r in range(col, n):
            if m[r][col] != 0:
                pivot = r
                break
        if pivot is None:
            return Fraction(0)
        if pivot != col:
            m[col], m[pivot] = m[pivot], m[col]
            det = -det
        det *= m[col][col]
        inv = 1 / m[col][col]
        for r in range(col + 1, n):
            if m[r][col] == 0:
                continue
            f = m[r][col] * inv
            for c in range(col, n):
                m[r][c] -= f * m[col][c]
    return det


def charpoly_fraction(rows) -> list[Fraction]:
    """Coefficients [1, c1, .., cn] of det(tI - M) via Faddeev-LeVerrier."""
    n = len(rows)
    m = [[Fraction(x) for x in row] for row in rows]
    coeffs = [Fraction(1)]
    mk = [row[:] for row in m]
    for k in range(1, n + 1):
        ck = -sum(mk[i][i] for i in range(n)) / k
        coeffs.append(ck)
        if k == n:
            break
        for i in range(n):
            mk[i][i] += ck
        mk = [[sum(m[i][l] * mk[l][j] for l in range(n)) for j in range(n)]
              for i in range(n)]
    return coeffs


def _poly_mul(p, q):
    out = [ZERO] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        if a.is_zero():
            continue
        for j, b in enumerate(q):
            out[i + j] = out[i + j] + a * b
    return out


def embedded_charpoly_product(a: RingMat2) -> list[Fraction]:
    """Product of the char polys of the four embedded 2x2 views of a.

    The sigma0/sigma2 pair and the sigma1/sigma3 pair each multiply to a
    quartic with real coefficients in Q(beta); the full product must have
    rational coefficients, which is checked.  Requires det(a) = 1.
    """
    if a.det() != ONE:
        raise NotUnimodular("spectrum decomposition stated for SL2 input")
    tau = a.trace()
    # coefficient lists by increasing degree; both factors are palindromic
    p02 = _poly_mul([ONE, -tau, ONE], [ONE, -tau.conj_even(), ONE])
    s13 = galois(tau, 1)
    tr_sum = s13.re + s13.re            # sigma1 + sigma3 of the trace
    tr_prod = s13.abs2()                # sigma1 * sigma3 of the trace
    p13 = [ONE, -tr_sum, tr_prod + QuarticElem(2), -tr_sum, ONE]
    full = _poly_mul(p02, p13)
    out = []
    for c in reversed(full):            # leading coefficient first
        if not c.is_rational():
            raise WrongSubring("embedded char poly product must be rational")
        out.append(c.q0)
    return out


def spectrum_decomposition_holds(a: RingMat2) -> bool:
    """char(Psi(a)) equals the product of the four embedded char polys."""
    lhs = charpoly_fraction([list(r) for r in regular_rep(a, 4).entries])
    rhs = embedded_charpoly_product(a)
    return lhs == rhs


# ---------------------------------------------------------------------------
# eigen data for 2x2 views


@dataclass
class BlockEig:
    """Per-embedding eigen summary used by the dominance analysis.

    u is |lambda|^2 + |lambda|^-2 for the block's eigenvalue pair, encoded
    exactly: either an element of Q(beta) or (a + sqrt(w)) / 2 with a, w in
    Q(beta).  Equal u means equal extreme moduli.
    """

    k: int
    mat_class: MatClass
    trace: EmbeddedComplex
    u_base: QuarticElem | None = None
    u_rad: tuple[QuarticElem, QuarticElem] | None = None   # (a, w): u = (a + sqrt w)/2
    real_trace: QuarticElem | None = None

    def u_interval(self, bits: int = DEFAULT_BITS) -> Interval:
        if self.u_base is not None:
            return self.u_base.interval(bits)
        a, w = self.u_rad
        return (a.interval(bits) + w.interval(bits).sqrt(bits)).scaled(Fraction(1, 2))


def block_eig(a: RingMat2, k: int) -> BlockEig:
    cls = classify(a, k)
    t = galois(a.trace(), k)
    if not t.is_real():
        abs2 = t.abs2()
        im2 = t.abs2() - t.re * t.re            # (Im tau)^2 as a quartic value
        w = (abs2 - QuarticElem(4)) ** 2 + 16 * im2
        return BlockEig(k, cls, t, u_rad=(abs2, w))
    r = t.re
    if cls == MatClass.HYPERBOLIC:
        return BlockEig(k, cls, t, u_base=r * r - QuarticElem(2), real_trace=r)
    # elliptic and parabolic blocks have both moduli equal to 1
    return BlockEig(k, cls, t, u_base=QuarticElem(2), real_trace=r)


def compare_u(x: BlockEig, y: BlockEig) -> Sign:
    """Exact sign of u(x) - u(y)."""
    if x.u_base is not None and y.u_base is not None:
        return (x.u_base - y.u_base).sign()
    if x.u_base is not None:
        return Sign(-int(_cmp_rad_base(y.u_rad, x.u_base)))
    if y.u_base is not None:
        return Sign(int(_cmp_rad_base(x.u_rad, y.u_base)))
    return _cmp_rad_rad(x.u_rad, y.u_rad)


def _cmp_rad_base(rad, base: QuarticElem) -> int:
    """sign of (a + sqrt w)/2 - base."""
    a, w = rad
    s = 2 * base - a                      # compare sqrt(w) with s
    if s.sign() != Sign.POSITIVE:
        if s.sign() == Sign.ZERO and w.is_zero():
            return 0
        return 1
    t = (w - s * s).sign()
    return int(t)


def _cmp_rad_rad(r1, r2) -> Sign:
    """sign of (a1 + sqrt w1)/2 - (a2 + sqrt w2)/2, all w >= 0."""
    a1, w1 = r1
    a2, w2 = r2
    tp = a1 - a2
    s_root = (w1 - w2).sign()             # sign of sqrt(w1) - sqrt(w2)
    st = tp.sign()
    if st == Sign.ZERO:
        return s_root
    if s_root == Sign.ZERO:
        return st
    if st == s_root:
        return st
    # opposite signs: compare |tp| against |sqrt w1 - sqrt w2|
    g = w1 + w2 - tp * tp
    if g.sign() == Sign.NEGATIVE:
        return st
    q = (g * g - 4 * w1 * w2).sign()
    if q == Sign.ZERO:
        return Sign.ZERO
    return s_root if q == Sign.POSITIVE else st


@dataclass
class Eigen2:
    """User-facing eigen data for one embedded 2x2 view."""

    k: int
    mat_class: MatClass
    trace: EmbeddedComplex
    lam_dominant: QuadExt | None = None
    lam_recessive: QuadExt | None = None
    lam_dominant_interval: Interval | None = None
    lam_recessive_interval: Interval | None = None
    vec_dominant: tuple[QuadExt, QuadExt] | None = None
    vec_recessive: tuple[QuadExt, QuadExt] | None = None
    modulus_sq_interval: Interval | None = None
    note: str = ""


def _eigvec_pair(a: RingMat2, lam: QuadExt) -> tuple[QuadExt, QuadExt]:
    """Eigenvector (v1, v2) of the real matrix a for eigenvalue lam."""
    d = lam.d
    b = QuadExt.of_base(a.e12, d)
    top = lam - QuadExt.of_base(a.e11, d)
    if not (b.is_zero() and top.is_zero()):
        return (b, top)
    # first row degenerate: use the second one
    return (lam - QuadExt.of_base(a.e22, d), QuadExt.of_base(a.e21, d))


def eigen2(a: RingMat2, k: int, bits: int = DEFAULT_BITS) -> Eigen2:
    """Eigenvalues of the k-th view: exact quadratic-extension data for the
    real hyperbolic case, interval data otherwise; parabolic is rejected."""
    blk = block_eig(a, k)
    cls = blk.mat_class
    if cls == MatClass.PARABOLIC:
        raise ParabolicNotSupported("double eigenvalue")
    rec = Eigen2(k=k, mat_class=cls, trace=blk.trace)
    if cls == MatClass.HYPERBOLIC:
        t = blk.real_trace
        disc = t * t - QuarticElem(4)
        half = Fraction(1, 2)
        sgn = 1 if t.sign() == Sign.POSITIVE else -1
        lam_dom = QuadExt(t * half, QuarticElem(sgn) * half, disc)
        lam_rec = lam_dom.conj_sqrt()
        if not (lam_dom * lam_rec == QuadExt.of_base(ONE, disc)):
            raise ParabolicNotSupported("eigenvalue product is not 1")
        view = a.real_view(k) if k in (0, 2) else None
        rec.lam_dominant = lam_dom
        rec.lam_recessive = lam_rec
        rec.lam_dominant_interval = lam_dom.interval(bits)
        rec.lam_recessive_interval = lam_rec.interval(bits)
        if view is not None:
            rec.vec_dominant = _eigvec_pair(view, lam_dom)
            rec.vec_recessive = _eigvec_pair(view, lam_rec)
        rec.note = "real hyperbolic pair lambda, 1/lambda"
    elif cls == MatClass.ELLIPTIC:
        rec.note = "complex conjugate pair on the unit circle"
        rec.modulus_sq_interval = Interval(1)
    else:
        a_u, w_u = blk.u_rad
        u_iv = blk.u_interval(bits)
        m2 = (u_iv + (u_iv * u_iv - Interval(4)).sqrt(bits)).scaled(Fraction(1, 2))
        rec.modulus_sq_interval = m2
        rec.note = "non-real eigenvalue pair lambda, 1/lambda"
    return rec


def fixed_slope_form(a: RingMat2) -> tuple[QuarticElem, QuarticElem, QuarticElem]:
    """Binary form c z^2 + (d - a) z - b whose roots are fixed slopes."""
    return (a.e21, a.e22 - a.e11, -a.e12)


def resultant_quadratics(f, g) -> QuarticElem:
    f2, f1, f0 = f
    g2, g1, g0 = g
    m = f2 * g0 - g2 * f0
    return m * m - (f2 * g1 - g2 * f1) * (f1 * g0 - g1 * f0)


def share_eigenvector(a: RingMat2, b: RingMat2, k: int) -> bool:
    """True iff the k-th views share a projective fixed point, decided by an
    exact resultant.  Galois embeddings are injective, so the verdict does
    not depend on k; the index is validated and kept for the caller."""
    if k not in (0, 1, 2, 3):
        raise ValueError("embedding index must be 0..3")
    if a.is_scalar() or b.is_scalar():
        raise ScalarMatrix("fixed slopes undefined for scalar matrices")
    return resultant_quadratics(fixed_slope_form(a), fixed_slope_form(b)).is_zero()


# ---------------------------------------------------------------------------
# entrywise distances of embedded views


def entry_dist_sq(a: RingMat2, b: RingMat2, k: int) -> QuarticElem:
    """Exact squared sup-distance max_ij |sigma_k(a_ij - b_ij)|^2."""
    best = None
    for x, y in zip(a.entries(), b.entries()):
        e = galois(x - y, k)
        v = e.re * e.re if e.is_real() else e.abs2()
        if best is None or (v - best).sign() == Sign.POSITIVE:
            best = v
    return best


def nonneg_interval(x: QuarticElem, bits: int = DEFAULT_BITS,
                    cap: int = 1 << 14) -> Interval:
    """Enclosure of a provably nonnegative value; refines past the
    cancellation that can push a coarse lower endpoint below zero."""
    b = bits
    while True:
        iv = x.interval(b)
        if iv.lo >= 0:
            return iv
        if b >= cap:
            return Interval(Fraction(0), max(Fraction(0), iv.hi))
        b *= 2


def sqrt_of_square_interval(x: QuarticElem, bits: int = DEFAULT_BITS) -> Interval:
    return nonneg_interval(x, bits).sqrt(bits)


def dist_interval(a: RingMat2, b: RingMat2, k: int,
                  bits: int = DEFAULT_BITS) -> Interval:
    return sqrt_of_square_interval(entry_dist_sq(a, b, k), bits)


def norm_from_identity_sq(a: RingMat2, k: int) -> QuarticElem:
    return entry_dist_sq(a, RingMat2.identity(), k)


def min_entry_dist_sq(a: RingMat2, b: RingMat2, k: int) -> QuarticElem:
    """Exact squared min-distance min_ij |sigma_k(a_ij - b_ij)|^2."""
    best = None
    for x, y in zip(a.entries(), b.entries()):
        e = galois(x - y, k)
        v = e.re * e.re if e.is_real() else e.abs2()
        if best is None or (v - best).sign() == Sign.NEGATIVE:
            best = v
    return best
