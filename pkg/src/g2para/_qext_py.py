"""Pure-Python elements of Q(sqrt(n)).

A value is stored as ``(p + q*sqrt(n)) / d`` with ``d > 0`` and
``gcd(p, q, d) == 1``; this is the canonical form, so equality is a
field-by-field comparison.  ``_ccore.pyx`` mirrors this class exactly.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd, isqrt

from .errors import MalformedScalarError, MixedRadicandError

DEFAULT_RADICAND = 2
_SQRT_BITS = 256


def to_float(p, q, d, n):
    """Correctly signed, accurate float of (p + q*sqrt(n)) / d, even under cancellation."""
    if q == 0:
        return p / d
    r = Fraction(isqrt(n * q * q << 2 * _SQRT_BITS), 1 << _SQRT_BITS)
    if q < 0:
        r = -r
    if p == 0 or (p > 0) == (q > 0):
        return float((p + r) / d)
    # opposite signs: use the conjugate so nothing cancels
    return float(Fraction(p * p - n * q * q) / ((p - r) * d))


class QuadExt:
    __slots__ = ("_p", "_q", "_d", "_n")

    def __init__(self, p=0, q=0, d=1, n=DEFAULT_RADICAND):
        if d == 0:
            raise MalformedScalarError("zero denominator")
        if d < 0:
            p, q, d = -p, -q, -d
        g = gcd(gcd(p, q), d)
        if g > 1:
            p //= g
            q //= g
            d //= g
        self._p = p
        self._q = q
        self._d = d
        self._n = n

    # -- construction -------------------------------------------------------

    @classmethod
    def from_parts(cls, rat, rad=0, n=DEFAULT_RADICAND):
        """Build ``rat + rad*sqrt(n)`` from two rationals."""
        rat = Fraction(rat)
        rad = Fraction(rad)
        d = rat.denominator * rad.denominator // gcd(rat.denominator, rad.denominator)
        return cls(rat.numerator * (d // rat.denominator),
                   rad.numerator * (d // rad.denominator), d, n)

    @classmethod
    def sqrt_radicand(cls, n=DEFAULT_RADICAND):
        return cls(0, 1, 1, n)

    # -- accessors ----------------------------------------------------------

    @property
    def p(self):
        return self._p

    @property
    def q(self):
        return self._q

    @property
    def d(self):
        return self._d

    @property
    def n(self):
        return self._n

    @property
    def rat(self):
        return Fraction(self._p, self._d)

    @property
    def rad(self):
        return Fraction(self._q, self._d)

    def is_rational(self):
        return self._q == 0

    def conjugate(self):
        return QuadExt(self._p, -self._q, self._d, self._n)

    def norm(self):
        """Field norm ``rat**2 - n*rad**2`` as a Fraction."""
        return Fraction(self._p * self._p - self._n * self._q * self._q, self._d * self._d)

    # -- coercion -----------------------------------------------------------

    def _coerce(self, other):
        if isinstance(other, QuadExt):
            return other
        if isinstance(other, int):
            return QuadExt(other, 0, 1, self._n)
        if isinstance(other, Fraction):
            return QuadExt(other.numerator, 0, other.denominator, self._n)
        return None

    def _radicand_with(self, other):
        if self._q == 0:
            return other._n
        if other._q == 0 or other._n == self._n:
            return self._n
        raise MixedRadicandError(f"sqrt({self._n}) mixed with sqrt({other._n})")

    # -- arithmetic ---------------------------------------------------------

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            if isinstance(other, float):
                return float(self) + other
            return NotImplemented
        n = self._radicand_with(o)
        if self._d == o._d:
            return QuadExt(self._p + o._p, self._q + o._q, self._d, n)
        return QuadExt(self._p * o._d + o._p * self._d,
                       self._q * o._d + o._q * self._d,
                       self._d * o._d, n)

    __radd__ = __add__

    def __neg__(self):
        return QuadExt(-self._p, -self._q, self._d, self._n)

    def __pos__(self):
        return self

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            if isinstance(other, float):
                return float(self) - other
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            if isinstance(other, float):
                return other - float(self)
            return NotImplemented
        return o + (-self)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            if isinstance(other, float):
                return float(self) * other
            return NotImplemented
        n = self._radicand_with(o)
        return QuadExt(self._p * o._p + n * self._q * o._q,
                       self._p * o._q + self._q * o._p,
                       self._d * o._d, n)

    __rmul__ = __mul__

    def inverse(self):
        num = self._p * self._p - self._n * self._q * self._q
        if num == 0:
            if self._p == 0 and self._q == 0:
                raise ZeroDivisionError("inverse of zero")
            raise AssertionError(f"zero norm for nonzero element; radicand {self._n} not square-free")
        return QuadExt(self._d * self._p, -self._d * self._q, num, self._n)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            if isinstance(other, float):
                return float(self) / other
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            if isinstance(other, float):
                return other / float(self)
            return NotImplemented
        return o * self.inverse()

    def __pow__(self, k):
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return self.inverse() ** (-k)
        result = QuadExt(1, 0, 1, self._n)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    # -- comparison / conversion -------------------------------------------

    def __eq__(self, other):
        o = self._coerce(other)
        if o is None:
            if isinstance(other, float):
                return float(self) == other
            return NotImplemented
        if self._q == 0 and o._q == 0:
            return self._p == o._p and self._d == o._d
        return (self._p == o._p and self._q == o._q and self._d == o._d
                and self._n == o._n)

    def __hash__(self):
        if self._q == 0:
            return hash(Fraction(self._p, self._d))
        return hash((self._p, self._q, self._d, self._n))

    def __bool__(self):
        return self._p != 0 or self._q != 0

    def __float__(self):
        return to_float(self._p, self._q, self._d, self._n)

    def sign(self):
        """Exact sign (-1, 0, 1) of the real number represented."""
        # sign of p + q*sqrt(n), compared via squares
        sp = (self._p > 0) - (self._p < 0)
        sq = (self._q > 0) - (self._q < 0)
        if sq == 0:
            return sp
        if sp == 0 or sp == sq:
            return sq
        diff = self._p * self._p - self._n * self._q * self._q
        return sp if diff > 0 else sq

    def __lt__(self, other):
        return (self - other).sign() < 0

    def __le__(self, other):
        return (self - other).sign() <= 0

    def __gt__(self, other):
        return (self - other).sign() > 0

    def __ge__(self, other):
        return (self - other).sign() >= 0

    def __abs__(self):
        return -self if self.sign() < 0 else self

    def __reduce__(self):
        return (QuadExt, (self._p, self._q, self._d, self._n))

    def __repr__(self):
        return f"QuadExt({self._p}, {self._q}, {self._d}, n={self._n})"

    def __str__(self):
        return format_scalar(self._p, self._q, self._d, self._n)


def format_scalar(p, q, d, n):
    """Render in the literal grammar accepted by :func:`g2para.scalar.parse_scalar`."""

    def term(num, den, radical):
        g = gcd(abs(num), den)
        num //= g
        den //= g
        base = str(num) if den == 1 else f"{num}/{den}"
        return f"{base}*sqrt({n})" if radical else base

    if q == 0:
        return term(p, d, False)
    rad = term(q, d, True)
    if p == 0:
        return rad
    rat = term(p, d, False)
    if rad.startswith("-"):
        return f"{rat}-{rad[1:]}"
    return f"{rat}+{rad}"
