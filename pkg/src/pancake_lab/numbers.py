"""Exact scalars for the geometry kernel.

Linear geometry lives entirely in :class:`fractions.Fraction`.  Points where a
circle meets something are degree-2 algebraic numbers; we keep them exactly as
``a + b*sqrt(d)`` (:class:`Surd`) and fall back to certified interval
enclosures only when two different quadratic fields have to be compared.
"""

from __future__ import annotations

import math
from decimal import Decimal
from fractions import Fraction
from typing import Callable, Union

import mpmath


class AmbiguousOrderError(ArithmeticError):
    """Two quantities could not be separated at the finest certified width."""


Scalar = Fraction
Number = Union[Fraction, "Surd"]

# finest relative width we refine to before giving up (10**-30)
MIN_CERT_WIDTH = Fraction(1, 10**30)
DEFAULT_CERT_WIDTH = Fraction(1, 10**12)


def as_fraction(value) -> Fraction:
    """Exact conversion; strings accept ``p/q`` and decimal notation."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        text = value.strip()
        if "/" in text:
            num, den = text.split("/", 1)
            return Fraction(as_fraction(num)) / as_fraction(den)
        return Fraction(Decimal(text))
    if isinstance(value, float):
        # binary floats are exact rationals too, but configs never go this way
        return Fraction(value)
    if isinstance(value, Decimal):
        return Fraction(value)
    raise TypeError(f"cannot make an exact scalar from {value!r}")


def _rational_sqrt(q: Fraction):
    """Return sqrt(q) as a Fraction when q is a rational square, else None."""
    if q < 0:
        return None
    n, d = q.numerator, q.denominator
    rn, rd = math.isqrt(n), math.isqrt(d)
    if rn * rn == n and rd * rd == d:
        return Fraction(rn, rd)
    return None


def sqrt_bounds(q: Fraction, bits: int) -> tuple[Fraction, Fraction]:
    """Certified enclosure lo <= sqrt(q) <= hi with width about 2**-bits / den."""
    if q < 0:
        raise ValueError("negative radicand")
    n, d = q.numerator, q.denominator
    s = math.isqrt(n * d << (2 * bits))
    scale = d << bits
    if s * s == n * d << (2 * bits):
        v = Fraction(s, scale)
        return v, v
    return Fraction(s, scale), Fraction(s + 1, scale)


class Interval:
    """Closed interval with Fraction endpoints; just enough arithmetic for signs."""

    __slots__ = ("lo", "hi")

    def __init__(self, lo, hi=None):
        self.lo = lo
        self.hi = lo if hi is None else hi

    @staticmethod
    def _wrap(x):
        return x if isinstance(x, Interval) else Interval(Fraction(x))

    def __add__(self, other):
        o = self._wrap(other)
        return Interval(self.lo + o.lo, self.hi + o.hi)

    __radd__ = __add__

    def __neg__(self):
        return Interval(-self.hi, -self.lo)

    def __sub__(self, other):
        return self + (-self._wrap(other))

    def __rsub__(self, other):
        return self._wrap(other) - self

    def __mul__(self, other):
        o = self._wrap(other)
        c = (self.lo * o.lo, self.lo * o.hi, self.hi * o.lo, self.hi * o.hi)
        return Interval(min(c), max(c))

    __rmul__ = __mul__

    @property
    def width(self):
        return self.hi - self.lo

    def magnitude(self):
        return max(abs(self.lo), abs(self.hi))

    def __repr__(self):
        return f"Interval({float(self.lo)!r}, {float(self.hi)!r})"


class Surd:
    """The real number ``a + b*sqrt(d)`` with rational a, b, d and d > 0 non-square.

    Construct through :func:`surd`, which collapses rational cases back to a
    plain Fraction.  Arithmetic is closed within one field (same ``d``).
    """

    __slots__ = ("a", "b", "d")

    def __init__(self, a: Fraction, b: Fraction, d: Fraction):
        self.a, self.b, self.d = a, b, d

    # -- field arithmetic -------------------------------------------------
    def _same_field(self, other) -> "Surd":
        if isinstance(other, Surd):
            if other.d == self.d:
                return other
            k = _rational_sqrt(self.d * other.d)
            if k is None:
                raise ValueError("operands live in different quadratic fields")
            # sqrt(d') = k / d * sqrt(d)
            return Surd(other.a, other.b * k / self.d, self.d)
        return Surd(Fraction(other), Fraction(0), self.d)

    def __add__(self, other):
        o = self._same_field(other)
        return surd(self.a + o.a, self.b + o.b, self.d)

    __radd__ = __add__

    def __neg__(self):
        return Surd(-self.a, -self.b, self.d)

    def __sub__(self, other):
        o = self._same_field(other)
        return surd(self.a - o.a, self.b - o.b, self.d)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._same_field(other)
        return surd(self.a * o.a + self.b * o.b * self.d, self.a * o.b + self.b * o.a, self.d)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, Surd):
            o = self._same_field(other)
            norm = o.a * o.a - o.b * o.b * self.d
            conj = Surd(o.a / norm, -o.b / norm, self.d)
            return self * conj
        return surd(self.a / other, self.b / other, self.d)

    # -- exact predicates -------------------------------------------------
    def sign(self) -> int:
        sa = (self.a > 0) - (self.a < 0)
        sb = (self.b > 0) - (self.b < 0)
        if sa == sb or sa == 0:
            return sb
        if sb == 0:
            return sa
        # d is not a square, so a**2 != b**2 * d
        return sa if self.a * self.a > self.b * self.b * self.d else sb

    def enclose(self, bits: int) -> Interval:
        lo, hi = sqrt_bounds(self.d, bits)
        if self.b >= 0:
            return Interval(self.a + self.b * lo, self.a + self.b * hi)
        return Interval(self.a + self.b * hi, self.a + self.b * lo)

    def __float__(self):
        return float(self.a) + float(self.b) * math.sqrt(float(self.d))

    def to_mpf(self):
        return mpmath.mpf(self.a.numerator) / self.a.denominator + (
            mpmath.mpf(self.b.numerator) / self.b.denominator
        ) * mpmath.sqrt(mpmath.mpf(self.d.numerator) / self.d.denominator)

    def __eq__(self, other):
        return exact_equal(self, other)

    def __hash__(self):
        return hash((self.a, self.b, self.d))

    def __repr__(self):
        return f"Surd({self.a} + {self.b}*sqrt({self.d}))"


def surd(a, b, d) -> Number:
    """Normalising constructor: returns a Fraction whenever the value is rational."""
    a, b, d = Fraction(a), Fraction(b), Fraction(d)
    if b == 0 or d == 0:
        return a
    r = _rational_sqrt(d)
    if r is not None:
        return a + b * r
    return Surd(a, b, d)


def sign(x: Number) -> int:
    if isinstance(x, Surd):
        return x.sign()
    return (x > 0) - (x < 0)


def enclose(x, bits: int) -> Interval:
    if isinstance(x, Surd):
        return x.enclose(bits)
    if isinstance(x, Interval):
        return x
    return Interval(Fraction(x))


def to_float(x) -> float:
    return float(x)


def exact_equal(x: Number, y: Number) -> bool:
    """Decide x == y exactly for rationals and quadratic surds.

    Two surds over fields Q(sqrt d1) != Q(sqrt d2) are equal only if both are
    rational, because 1, sqrt d1, sqrt d2 are linearly independent over Q.
    """
    xs, ys = isinstance(x, Surd), isinstance(y, Surd)
    if not xs and not ys:
        return x == y
    if xs and ys:
        if x.d == y.d:
            return x.a == y.a and x.b == y.b
        k = _rational_sqrt(x.d * y.d)
        if k is None:
            return False
        return x.a == y.a and x.b == y.b * k / x.d
    return False  # a normalised Surd is irrational


def compare(x: Number, y: Number, scale: Fraction = Fraction(1)) -> int:
    """Certified sign of x - y."""
    if exact_equal(x, y):
        return 0
    try:
        return sign(x - y)
    except ValueError:
        pass
    return certified_sign(lambda ev: ev(x) - ev(y), scale)


def certified_sign(fn: Callable, scale: Fraction = Fraction(1),
                   min_width: Fraction = MIN_CERT_WIDTH) -> int:
    """Sign of an expression built from surds, by interval refinement.

    ``fn`` receives an evaluator mapping each operand to an Interval and must
    return an Interval.  Precision doubles until the sign is certain or the
    enclosure is narrower than ``min_width * scale`` (then the value is treated
    as indistinguishable from zero and AmbiguousOrderError is raised).
    """
    scale = abs(Fraction(scale)) or Fraction(1)
    bits = 64
    while True:
        iv = fn(lambda v, b=bits: enclose(v, b))
        if not isinstance(iv, Interval):
            iv = Interval(Fraction(iv))
        if iv.lo > 0:
            return 1
        if iv.hi < 0:
            return -1
        if iv.lo == 0 and iv.hi == 0:
            return 0
        if iv.width < min_width * scale:
            raise AmbiguousOrderError(f"cannot separate value from zero (width {float(iv.width):.3g})")
        bits *= 2


# -- rational directions ------------------------------------------------------

def unit_from_tan_half(t: Fraction) -> tuple[Fraction, Fraction]:
    """Rational point on the unit circle with tan(angle/2) = t."""
    t2 = t * t
    return (1 - t2) / (1 + t2), 2 * t / (1 + t2)


def rational_direction(angle, tol: float = 1e-6) -> tuple[Fraction, Fraction]:
    """Exact rational unit vector within ``tol`` radians of ``angle``.

    Uses best rational approximations of tan(angle/2) (Fraction.limit_denominator
    walks the Stern-Brocot tree), growing the denominator until close enough.
    Angles are reduced to (-pi, pi]; the antipode is handled by negation.
    """
    a = float(mpmath.atan2(mpmath.sin(angle), mpmath.cos(angle)))
    flip = False
    if abs(a) > math.pi / 2:
        a = a - math.pi if a > 0 else a + math.pi
        flip = True
    target = mpmath.tan(mpmath.mpf(a) / 2)
    exact = Fraction(Decimal(mpmath.nstr(target, 40, strip_zeros=False)))
    limit = 16
    while True:
        t = exact.limit_denominator(limit)
        c, s = unit_from_tan_half(t)
        err = abs(math.atan2(float(s), float(c)) - a)
        if err <= tol or limit > 10**40:
            break
        limit *= 16
    return (-c, -s) if flip else (c, s)


def precise_direction(angle: Fraction, digits: int = 40) -> tuple[Fraction, Fraction]:
    """Rational unit vector for an exact decimal angle, accurate to ~10**-digits."""
    with mpmath.workdps(digits + 10):
        phi = mpmath.mpf(angle.numerator) / angle.denominator
        flip = False
        a = mpmath.atan2(mpmath.sin(phi), mpmath.cos(phi))
        if abs(a) > mpmath.pi / 2:
            a = a - mpmath.pi if a > 0 else a + mpmath.pi
            flip = True
        t = Fraction(Decimal(mpmath.nstr(mpmath.tan(a / 2), digits, strip_zeros=False)))
    t = t.limit_denominator(10**digits)
    c, s = unit_from_tan_half(t)
    return (-c, -s) if flip else (c, s)
