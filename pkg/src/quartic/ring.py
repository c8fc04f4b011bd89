"""Exact arithmetic in Q(beta), beta = 2^(1/4), and in its subfield Q(sqrt2).

Elements are stored on the basis {1, beta, beta^2, beta^3} with Fraction
coefficients; products reduce by beta^4 = 2.  The four Galois embeddings
send beta to beta * i^k.  Sign determination is exact: zero is decided
symbolically (the basis is linearly independent over Q), every nonzero
element is separated from zero by adaptive dyadic refinement.
"""

from __future__ import annotations

import enum
from fractions import Fraction
from math import lcm

from .errors import InternalMismatch, NonIntegralInput, UnsignedElement
from .intervals import (
    DEFAULT_BITS,
    Interval,
    beta3_bounds,
    beta_bounds,
    from_dyadic_pair,
    sqrt2_bounds,
    sqrt2_interval,
)


class Sign(enum.IntEnum):
    NEGATIVE = -1
    ZERO = 0
    POSITIVE = 1


class Signedness(enum.Enum):
    POSITIVE = "positive"
    NEGATIVE = "negative"
    UNSIGNED = "unsigned"


def _frac(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    raise TypeError(f"cannot coerce {type(x).__name__} to Fraction")


class QuadRat:
    """u + v*sqrt(2) with rational u, v.  Sign is decided algebraically."""

    __slots__ = ("u", "v")

    def __init__(self, u, v=0):
        self.u = _frac(u)
        self.v = _frac(v)

    def __repr__(self) -> str:
        return f"QuadRat({self.u}, {self.v})"

    def __str__(self) -> str:
        return f"{self.u} + {self.v}*sqrt2"

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = QuadRat(other)
        if not isinstance(other, QuadRat):
            return NotImplemented
        return self.u == other.u and self.v == other.v

    def __hash__(self):
        return hash((self.u, self.v))

    def __add__(self, other):
        if isinstance(other, (int, Fraction)):
            other = QuadRat(other)
        return QuadRat(self.u + other.u, self.v + other.v)

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, (int, Fraction)):
            other = QuadRat(other)
        return QuadRat(self.u - other.u, self.v - other.v)

    def __rsub__(self, other):
        return (-self) + other

    def __neg__(self):
        return QuadRat(-self.u, -self.v)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return QuadRat(self.u * other, self.v * other)
        if not isinstance(other, QuadRat):
            return NotImplemented
        return QuadRat(self.u * other.u + 2 * self.v * other.v,
                       self.u * other.v + self.v * other.u)

    __rmul__ = __mul__

    def conj(self) -> "QuadRat":
        """Galois conjugate u - v*sqrt(2)."""
        return QuadRat(self.u, -self.v)

    def norm(self) -> Fraction:
        """u^2 - 2 v^2, the field norm down to Q."""
        return self.u * self.u - 2 * self.v * self.v

    def inv(self) -> "QuadRat":
        n = self.norm()
        if n == 0:
            raise ZeroDivisionError("inverse of zero in Q(sqrt2)")
        return QuadRat(self.u / n, -self.v / n)

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return QuadRat(self.u / other, self.v / other)
        return self * other.inv()

    def is_zero(self) -> bool:
        return self.u == 0 and self.v == 0

    def is_integral(self) -> bool:
        return self.u.denominator == 1 and self.v.denominator == 1

    def sign(self) -> Sign:
        su = (self.u > 0) - (self.u < 0)
        sv = (self.v > 0) - (self.v < 0)
        if sv == 0:
            return Sign(su)
        if su == 0:
            return Sign(sv)
        if su == sv:
            return Sign(su)
        # opposite rational and sqrt2 parts: compare u^2 with 2 v^2
        t = self.u * self.u - 2 * self.v * self.v
        if t == 0:
            return Sign.ZERO  # impossible for u, v rational unless both zero
        return Sign(su if t > 0 else sv)

    def __lt__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = QuadRat(other)
        return (self - other).sign() == Sign.NEGATIVE

    def __le__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = QuadRat(other)
        return (self - other).sign() != Sign.POSITIVE

    def abs(self) -> "QuadRat":
        return -self if self.sign() == Sign.NEGATIVE else self

    def interval(self, bits: int = DEFAULT_BITS) -> Interval:
        s_lo, s_hi = sqrt2_bounds(bits)
        base = from_dyadic_pair(s_lo, s_hi, bits).scaled(self.v)
        return base + Interval(self.u)

    def as_quartic(self) -> "QuarticElem":
        return QuarticElem(self.u, 0, self.v, 0)


ZERO_Q = QuadRat(0)
ONE_Q = QuadRat(1)
SQRT2 = QuadRat(0, 1)


class QuarticElem:
    """q0 + q1*beta + q2*beta^2 + q3*beta^3 with rational coefficients."""

    __slots__ = ("q0", "q1", "q2", "q3")

    def __init__(self, q0=0, q1=0, q2=0, q3=0):
        self.q0 = _frac(q0)
        self.q1 = _frac(q1)
        self.q2 = _frac(q2)
        self.q3 = _frac(q3)

    @classmethod
    def from_int(cls, n) -> "QuarticElem":
        return cls(n, 0, 0, 0)

    @classmethod
    def parse(cls, text: str) -> "QuarticElem":
        """Parse the wire format: four space-separated rationals 'q0 q1 q2 q3'."""
        parts = text.split()
        if len(parts) != 4:
            raise ValueError(
                f"expected 4 coefficients, got {len(parts)} in {text!r}")
        return cls(*(Fraction(p) for p in parts))

    def coeffs(self) -> tuple[Fraction, Fraction, Fraction, Fraction]:
        return (self.q0, self.q1, self.q2, self.q3)

    def to_text(self) -> str:
        return " ".join(str(c) for c in self.coeffs())

    def __repr__(self) -> str:
        return f"QuarticElem({self.to_text()!r})"

    def __str__(self) -> str:
        names = ("", "b", "b^2", "b^3")
        parts = []
        for c, n in zip(self.coeffs(), names):
            if c == 0:
                continue
            term = str(c) if not n else (n if abs(c) == 1 else f"{abs(c)}*{n}")
            if n and c < 0:
                term = "-" + term
            parts.append(term if not parts or term.startswith("-") else "+" + term)
        return "".join(parts) or "0"

    def __eq__(self, other) -> bool:
        other = _coerce(other)
        if other is None:
            return NotImplemented
        return self.coeffs() == other.coeffs()

    def __hash__(self):
        return hash(self.coeffs())

    def __add__(self, other):
        other = _coerce(other)
        if other is None:
            return NotImplemented
        return QuarticElem(self.q0 + other.q0, self.q1 + other.q1,
                           self.q2 + other.q2, self.q3 + other.q3)

    __radd__ = __add__

    def __sub__(self, other):
        other = _coerce(other)
        if other is None:
            return NotImplemented
        return QuarticElem(self.q0 - other.q0, self.q1 - other.q1,
                           self.q2 - other.q2, self.q3 - other.q3)

    def __rsub__(self, other):
        return (-self) + other

    def __neg__(self):
        return QuarticElem(-self.q0, -self.q1, -self.q2, -self.q3)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return QuarticElem(self.q0 * other, self.q1 * other,
                               self.q2 * other, self.q3 * other)
        other = _coerce(other)
        if other is None:
            return NotImplemented
        a0, a1, a2, a3 = self.coeffs()
        b0, b1, b2, b3 = other.coeffs()
        # beta^4 = 2 folds degrees 4..6 back down
        return QuarticElem(
            a0 * b0 + 2 * (a1 * b3 + a2 * b2 + a3 * b1),
            a0 * b1 + a1 * b0 + 2 * (a2 * b3 + a3 * b2),
            a0 * b2 + a1 * b1 + a2 * b0 + 2 * a3 * b3,
            a0 * b3 + a1 * b2 + a2 * b1 + a3 * b0,
        )

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "QuarticElem":
        if n < 0:
            return self.inv() ** (-n)
        result = ONE
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def is_zero(self) -> bool:
        return self.coeffs() == (0, 0, 0, 0)

    def is_one(self) -> bool:
        return self.coeffs() == (1, 0, 0, 0)

    def is_rational(self) -> bool:
        return self.q1 == 0 and self.q2 == 0 and self.q3 == 0

    def is_integral(self) -> bool:
        return all(c.denominator == 1 for c in self.coeffs())

    def in_even_subring(self) -> bool:
        """True when the element lies in Q(sqrt2), i.e. no beta or beta^3 part."""
        return self.q1 == 0 and self.q3 == 0

    def even_part(self) -> "QuarticElem":
        return QuarticElem(self.q0, 0, self.q2, 0)

    def odd_part(self) -> "QuarticElem":
        return QuarticElem(0, self.q1, 0, self.q3)

    def even_quadrat(self) -> QuadRat:
        """The element as u + v*sqrt2; requires the odd part to vanish."""
        if not self.in_even_subring():
            raise InternalMismatch(f"{self!r} is not in Q(sqrt2)")
        return QuadRat(self.q0, self.q2)

    def split_quadrat(self) -> tuple[QuadRat, QuadRat]:
        """(E, O) with self = E + beta*O and E, O in Q(sqrt2)."""
        return QuadRat(self.q0, self.q2), QuadRat(self.q1, self.q3)

    def conj_even(self) -> "QuarticElem":
        """beta -> -beta, the automorphism fixing Q(sqrt2)."""
        return QuarticElem(self.q0, -self.q1, self.q2, -self.q3)

    def inv(self) -> "QuarticElem":
        """Field inverse via the tower Q(beta) / Q(sqrt2) / Q."""
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero in Q(beta)")
        y = self.conj_even()
        z = (self * y).even_quadrat()      # relative norm, lives in Q(sqrt2)
        n = z.norm()                       # rational and nonzero for nonzero self
        zc = z.conj().as_quartic()
        return (y * zc) * (Fraction(1) / n)

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return self * (Fraction(1) / Fraction(other))
        other = _coerce(other)
        return self * other.inv()

    def interval(self, bits: int = DEFAULT_BITS) -> Interval:
        lo, hi = self._scaled_bounds(bits)
        den = lcm(self.q0.denominator, self.q1.denominator,
                  self.q2.denominator, self.q3.denominator)
        s = den << bits
        return Interval(Fraction(lo, s), Fraction(hi, s))

    def _scaled_bounds(self, bits: int) -> tuple[int, int]:
        """Integer bounds for value * lcm(dens) * 2^bits."""
        den = lcm(self.q0.denominator, self.q1.denominator,
                  self.q2.denominator, self.q3.denominator)
        c0 = int(self.q0 * den)
        c1 = int(self.q1 * den)
        c2 = int(self.q2 * den)
        c3 = int(self.q3 * den)
        b1 = beta_bounds(bits)
        b2 = sqrt2_bounds(bits)
        b3 = beta3_bounds(bits)
        scale = 1 << bits
        lo = c0 * scale
        hi = lo
        for c, (plo, phi) in ((c1, b1), (c2, b2), (c3, b3)):
            if c >= 0:
                lo += c * plo
                hi += c * phi
            else:
                lo += c * phi
                hi += c * plo
        return lo, hi

    def sign(self) -> Sign:
        """Exact sign.  Zero is symbolic; nonzero refines until separated."""
        if self.is_zero():
            return Sign.ZERO
        if self.q1 == 0 and self.q3 == 0:
            return QuadRat(self.q0, self.q2).sign()
        bits = DEFAULT_BITS
        while True:
            lo, hi = self._scaled_bounds(bits)
            if lo > 0:
                return Sign.POSITIVE
            if hi < 0:
                return Sign.NEGATIVE
            bits *= 2

    def abs(self) -> "QuarticElem":
        return -self if self.sign() == Sign.NEGATIVE else self

    def __lt__(self, other) -> bool:
        other = _coerce(other)
        return (self - other).sign() == Sign.NEGATIVE

    def __le__(self, other) -> bool:
        other = _coerce(other)
        return (self - other).sign() != Sign.POSITIVE


def _coerce(x) -> QuarticElem | None:
    if isinstance(x, QuarticElem):
        return x
    if isinstance(x, (int, Fraction)):
        return QuarticElem(x)
    if isinstance(x, QuadRat):
        return x.as_quartic()
    return None


ZERO = QuarticElem(0)
ONE = QuarticElem(1)
BETA = QuarticElem(0, 1)
BETA2 = QuarticElem(0, 0, 1)
BETA3 = QuarticElem(0, 0, 0, 1)


class EmbeddedComplex:
    """Exact image of a quartic element under one Galois embedding.

    Stored as re + beta * im_scale * i where re is a real element of Q(beta)
    and im_scale lies in Q(sqrt2).  For the complex embeddings (k = 1, 3)
    the real part always lands in the Q(sqrt2) subring; for the real
    embeddings (k = 0, 2) im_scale is zero and re carries the whole image.
    Arithmetic stays inside a single embedded field.
    """

    __slots__ = ("re", "im_scale")

    def __init__(self, re: QuarticElem, im_scale: QuadRat):
        self.re = re
        self.im_scale = im_scale

    def __repr__(self) -> str:
        return f"EmbeddedComplex({self.re!r}, {self.im_scale!r})"

    def __eq__(self, other) -> bool:
        if not isinstance(other, EmbeddedComplex):
            return NotImplemented
        return self.re == other.re and self.im_scale == other.im_scale

    def __hash__(self):
        return hash((self.re, self.im_scale))

    def is_real(self) -> bool:
        return self.im_scale.is_zero()

    def is_zero(self) -> bool:
        return self.re.is_zero() and self.im_scale.is_zero()

    def conj(self) -> "EmbeddedComplex":
        return EmbeddedComplex(self.re, -self.im_scale)

    def __add__(self, other: "EmbeddedComplex") -> "EmbeddedComplex":
        return EmbeddedComplex(self.re + other.re, self.im_scale + other.im_scale)

    def __sub__(self, other: "EmbeddedComplex") -> "EmbeddedComplex":
        return EmbeddedComplex(self.re - other.re, self.im_scale - other.im_scale)

    def __neg__(self) -> "EmbeddedComplex":
        return EmbeddedComplex(-self.re, -self.im_scale)

    def __mul__(self, other: "EmbeddedComplex") -> "EmbeddedComplex":
        # (r1 + b s1 i)(r2 + b s2 i) = r1 r2 - sqrt2 s1 s2 + b (r1 s2 + r2 s1) i
        re = self.re * other.re - (SQRT2 * self.im_scale * other.im_scale).as_quartic()
        im_q = self.re * other.im_scale.as_quartic() + other.re * self.im_scale.as_quartic()
        if not im_q.in_even_subring():
            raise InternalMismatch(
                "product left the embedded field; operands came from "
                "different embeddings")
        return EmbeddedComplex(re, im_q.even_quadrat())

    def abs2(self) -> QuarticElem:
        """Squared modulus re^2 + sqrt2 * im_scale^2, a real quartic element."""
        return self.re * self.re + (SQRT2 * self.im_scale * self.im_scale).as_quartic()

    def abs2_quadrat(self) -> QuadRat:
        return self.abs2().even_quadrat()

    def re_quadrat(self) -> QuadRat:
        return self.re.even_quadrat()

    def abs_interval(self, bits: int = DEFAULT_BITS) -> Interval:
        return self.abs2().interval(bits).sqrt(bits)

    def intervals(self, bits: int = DEFAULT_BITS) -> tuple[Interval, Interval]:
        """(re, im) enclosures; im includes the beta factor."""
        im = self.im_scale.interval(bits) * from_dyadic_pair(*beta_bounds(bits), bits)
        return self.re.interval(bits), im


def galois(x: QuarticElem, k: int) -> EmbeddedComplex:
    """Image of x under the embedding beta -> beta * i^k, k in 0..3."""
    if k not in (0, 1, 2, 3):
        raise ValueError(f"embedding index must be 0..3, got {k}")
    if k == 0:
        return EmbeddedComplex(x, ZERO_Q)
    if k == 2:
        return EmbeddedComplex(x.conj_even(), ZERO_Q)
    e, o = x.split_quadrat()
    if k == 1:
        return EmbeddedComplex(e.conj().as_quartic(), o.conj())
    return EmbeddedComplex(e.conj().as_quartic(), -o.conj())


def sign_of(x: QuarticElem) -> Sign:
    return x.sign()


def compare(x: QuarticElem, y: QuarticElem) -> Sign:
    return (x - y).sign()


def signedness(x: QuarticElem) -> Signedness:
    cs = x.coeffs()
    if all(c >= 0 for c in cs) and not x.is_zero():
        return Signedness.POSITIVE
    if all(c <= 0 for c in cs) and not x.is_zero():
        return Signedness.NEGATIVE
    return Signedness.UNSIGNED


def field_quantity_N(x: QuarticElem) -> Fraction:
    """|product of the four Galois conjugates|, by two independent routes.

    The closed form (a^2 + 2p^2 - 4me)^2 - 2(2ap - m^2 - 2e^2)^2 must agree
    with the literal conjugate product; a mismatch raises InternalMismatch.
    At least 1 for nonzero integral input.
    """
    a, m, p, e = x.coeffs()
    u = a * a + 2 * p * p - 4 * m * e
    v = 2 * a * p - m * m - 2 * e * e
    closed = abs(u * u - 2 * v * v)

    prod02 = (x * x.conj_even()).even_quadrat()
    z13 = galois(x, 1) * galois(x, 3)
    if not z13.is_real():
        raise InternalMismatch("sigma1(x) * sigma3(x) should be real")
    prod13 = z13.re.even_quadrat()
    full = prod02 * prod13
    if full.v != 0:
        raise InternalMismatch("full conjugate product should be rational")
    oracle = abs(full.u)

    if closed != oracle:
        raise InternalMismatch(
            f"N({x.to_text()}): closed form {closed} != product {oracle}")
    return closed


def _term_elems(x: QuarticElem) -> tuple[QuarticElem, ...]:
    """The four monomial terms (a, m*beta, p*beta^2, e*beta^3) as elements."""
    return (QuarticElem(x.q0), QuarticElem(0, x.q1),
            QuarticElem(0, 0, x.q2), QuarticElem(0, 0, 0, x.q3))


def _min_elem(terms: tuple[QuarticElem, ...]) -> QuarticElem:
    best = terms[0]
    for t in terms[1:]:
        if (t - best).sign() == Sign.NEGATIVE:
            best = t
    return best


def gamma(x: QuarticElem) -> QuarticElem:
    """4 * min of the four monomial terms, extended oddly to negative x.

    Zero input is allowed and yields zero (continuity); mixed signs raise.
    """
    if x.is_zero():
        return ZERO
    s = signedness(x)
    if s == Signedness.UNSIGNED:
        raise UnsignedElement(f"gamma of mixed-sign element {x.to_text()}")
    if s == Signedness.NEGATIVE:
        return -gamma(-x)
    return 4 * _min_elem(_term_elems(x))


def delta(x: QuarticElem) -> QuarticElem:
    return x - gamma(x)


def gamma1(x: QuarticElem) -> QuarticElem:
    """2 * min of the even-part terms {a, p*beta^2}, oddly extended."""
    if x.is_zero():
        return ZERO
    s = signedness(x)
    if s == Signedness.UNSIGNED:
        raise UnsignedElement(f"gamma1 of mixed-sign element {x.to_text()}")
    if s == Signedness.NEGATIVE:
        return -gamma1(-x)
    return 2 * _min_elem((QuarticElem(x.q0), QuarticElem(0, 0, x.q2)))


def gamma2(x: QuarticElem) -> QuarticElem:
    """2 * min of the odd-part terms {m*beta, e*beta^3}, oddly extended."""
    if x.is_zero():
        return ZERO
    s = signedness(x)
    if s == Signedness.UNSIGNED:
        raise UnsignedElement(f"gamma2 of mixed-sign element {x.to_text()}")
    if s == Signedness.NEGATIVE:
        return -gamma2(-x)
    return 2 * _min_elem((QuarticElem(0, x.q1), QuarticElem(0, 0, 0, x.q3)))


def delta1(x: QuarticElem) -> QuarticElem:
    return x.even_part() - gamma1(x)


def delta2(x: QuarticElem) -> QuarticElem:
    return x.odd_part() - gamma2(x)


def coeff_norm(x: QuarticElem) -> Fraction:
    """max of the absolute coefficient values."""
    return max(abs(c) for c in x.coeffs())


def coeff_norm_terms(x: QuarticElem) -> tuple[QuarticElem, ...]:
    return _term_elems(x)


def in_S(x: QuarticElem, eps, c) -> bool:
    """Membership in {x integral : 0 < |x| < eps, |sigma1(x)| < c}, exact."""
    eps = _frac(eps)
    c = _frac(c)
    if eps <= 0 or c <= 0:
        raise ValueError("thresholds must be positive")
    if not x.is_integral():
        raise NonIntegralInput(f"in_S needs integer coefficients: {x.to_text()}")
    if x.is_zero():
        return False
    if (x * x - QuarticElem(eps * eps)).sign() != Sign.NEGATIVE:
        return False
    m2 = galois(x, 1).abs2_quadrat()
    return (m2 - QuadRat(c * c)).sign() == Sign.NEGATIVE


def delta_submultiplicative_witness(x: QuarticElem, y: QuarticElem):
    """Check |delta(xy)| <= |delta(x) delta(y)| for signed x, y.

    Returns None when the inequality holds, otherwise a dict describing the
    violation (surfaced, never swallowed).
    """
    lhs = delta(x * y).abs()
    rhs = (delta(x) * delta(y)).abs()
    if (lhs - rhs).sign() == Sign.POSITIVE:
        return {
            "x": x.to_text(),
            "y": y.to_text(),
            "delta_xy": lhs.to_text(),
            "delta_x_delta_y": rhs.to_text(),
        }
    return None


def product_split_diagnostic(x: QuarticElem, y: QuarticElem) -> dict:
    """Raw quantities for the product split xy = z + u with z = x*gamma(y).

    Diagnostic only: reports ||u|| against 8 ||x|| |delta(y)| without
    asserting the bound.
    """
    z = x * gamma(y)
    u = x * delta(y)
    bound = 8 * coeff_norm(x) * delta(y).abs().interval().hi
    return {
        "z": z.to_text(),
        "u": u.to_text(),
        "u_norm": coeff_norm(u),
        "bound_upper": bound,
        "within_bound": coeff_norm(u) <= bound,
    }

