"""Values a + b * sqrt(d) over the quartic base field.

Eigenvalues and eigenvector slopes of the 2x2 matrices live here: d is the
trace discriminant, an element of Q(beta).  Sign determination reduces to
quartic signs, so every comparison is exact even when d happens to be a
square in the field.
"""

from __future__ import annotations

from .errors import InternalMismatch
from .intervals import DEFAULT_BITS, Interval
from .ring import ONE, ZERO, QuarticElem, Sign, _coerce


class QuadExt:
    """a + b*sqrt(d), a, b, d in Q(beta), d >= 0 shared by both operands."""

    __slots__ = ("a", "b", "d")

    def __init__(self, a, b, d):
        self.a = _as_quartic(a)
        self.b = _as_quartic(b)
        self.d = _as_quartic(d)

    def __repr__(self) -> str:
        return f"QuadExt({self.a.to_text()!r}, {self.b.to_text()!r}, d={self.d.to_text()!r})"

    @classmethod
    def of_base(cls, x, d) -> "QuadExt":
        return cls(x, ZERO, d)

    def _check_compatible(self, other: "QuadExt") -> None:
        if not self.b.is_zero() and not other.b.is_zero() and self.d != other.d:
            raise InternalMismatch("mixing incompatible quadratic extensions")

    def _common_d(self, other: "QuadExt") -> QuarticElem:
        return self.d if not self.b.is_zero() or other.b.is_zero() else other.d

    def __add__(self, other):
        other = _as_ext(other, self.d)
        self._check_compatible(other)
        return QuadExt(self.a + other.a, self.b + other.b, self._common_d(other))

    __radd__ = __add__

    def __sub__(self, other):
        other = _as_ext(other, self.d)
        self._check_compatible(other)
        return QuadExt(self.a - other.a, self.b - other.b, self._common_d(other))

    def __rsub__(self, other):
        return (-self) + other

    def __neg__(self):
        return QuadExt(-self.a, -self.b, self.d)

    def __mul__(self, other):
        other = _as_ext(other, self.d)
        self._check_compatible(other)
        d = self._common_d(other)
        return QuadExt(self.a * other.a + self.b * other.b * d,
                       self.a * other.b + self.b * other.a, d)

    __rmul__ = __mul__

    def conj_sqrt(self) -> "QuadExt":
        return QuadExt(self.a, -self.b, self.d)

    def norm_base(self) -> QuarticElem:
        """a^2 - b^2 d, the norm down to Q(beta)."""
        return self.a * self.a - self.b * self.b * self.d

    def inv(self) -> "QuadExt":
        n = self.norm_base()
        if n.is_zero():
            # sqrt(d) lies in the base field here; fall back on the value
            raise ZeroDivisionError("inverse through a degenerate extension")
        ninv = n.inv()
        return QuadExt(self.a * ninv, -self.b * ninv, self.d)

    def sign(self) -> Sign:
        sa = self.a.sign()
        if self.b.is_zero():
            return sa
        sd = self.d.sign()
        if sd == Sign.ZERO:
            return sa
        sb = self.b.sign()
        if sa == Sign.ZERO:
            return sb
        if sa == sb:
            return sa
        t = (self.a * self.a - self.b * self.b * self.d).sign()
        if t == Sign.ZERO:
            return Sign.ZERO
        return sa if t == Sign.POSITIVE else sb

    def is_zero(self) -> bool:
        return self.sign() == Sign.ZERO

    def __eq__(self, other) -> bool:
        if isinstance(other, (QuadExt, QuarticElem, int)):
            other = _as_ext(other, self.d)
            return (self - other).is_zero()
        return NotImplemented

    def __hash__(self):
        raise TypeError("QuadExt is unhashable; compare by value")

    def __lt__(self, other) -> bool:
        other = _as_ext(other, self.d)
        return (self - other).sign() == Sign.NEGATIVE

    def __le__(self, other) -> bool:
        other = _as_ext(other, self.d)
        return (self - other).sign() != Sign.POSITIVE

    def abs(self) -> "QuadExt":
        return -self if self.sign() == Sign.NEGATIVE else self

    def interval(self, bits: int = DEFAULT_BITS) -> Interval:
        base = self.a.interval(bits)
        if self.b.is_zero():
            return base
        root = self.d.interval(bits).sqrt(bits)
        b_iv = self.b.interval(bits)
        return base + b_iv * root


def _as_quartic(x) -> QuarticElem:
    q = _coerce(x)
    if q is None:
        raise TypeError(f"cannot use {type(x).__name__} in QuadExt")
    return q


def _as_ext(x, d) -> QuadExt:
    if isinstance(x, QuadExt):
        return x
    return QuadExt(_as_quartic(x), ZERO, d)


def sqrt_of(d) -> QuadExt:
    return QuadExt(ZERO, ONE, d)
