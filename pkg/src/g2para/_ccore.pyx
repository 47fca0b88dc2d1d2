# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled core: QuadExt and the flat tensor kernels.

Behaviour is identical to ``_qext_py`` and ``_kernels_py``; the test-suite
runs both.  Integers stay Python objects (arbitrary precision); the gain
comes from typed loops and slot dispatch on a cdef class.
"""

from fractions import Fraction
from math import gcd

from g2para.errors import MalformedScalarError, MixedRadicandError
from g2para._qext_py import format_scalar, to_float

DEF DIM = 7
DEF DIM2 = 49
DEF DIM3 = 343

cdef long DEFAULT_RADICAND = 2


cdef inline QuadExt _make(object p, object q, object d, long n):
    cdef QuadExt r = QuadExt.__new__(QuadExt)
    cdef object g
    if d < 0:
        p = -p
        q = -q
        d = -d
    g = gcd(gcd(p, q), d)
    if g != 1:
        p = p // g
        q = q // g
        d = d // g
    r.p = p
    r.q = q
    r.d = d
    r.n = n
    return r


cdef class QuadExt:
    cdef readonly object p
    cdef readonly object q
    cdef readonly object d
    cdef readonly long n

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
        self.p = p
        self.q = q
        self.d = d
        self.n = n

    @classmethod
    def from_parts(cls, rat, rad=0, n=DEFAULT_RADICAND):
        rat = Fraction(rat)
        rad = Fraction(rad)
        d = rat.denominator * rad.denominator // gcd(rat.denominator, rad.denominator)
        return cls(rat.numerator * (d // rat.denominator),
                   rad.numerator * (d // rad.denominator), d, n)

    @classmethod
    def sqrt_radicand(cls, n=DEFAULT_RADICAND):
        return cls(0, 1, 1, n)

    @property
    def rat(self):
        return Fraction(self.p, self.d)

    @property
    def rad(self):
        return Fraction(self.q, self.d)

    def is_rational(self):
        return self.q == 0

    def conjugate(self):
        return _make(self.p, -self.q, self.d, self.n)

    def norm(self):
        return Fraction(self.p * self.p - self.n * self.q * self.q, self.d * self.d)

    cdef QuadExt _coerce(self, object other):
        if isinstance(other, QuadExt):
            return <QuadExt>other
        if isinstance(other, int):
            return _make(other, 0, 1, self.n)
        if isinstance(other, Fraction):
            return _make(other.numerator, 0, other.denominator, self.n)
        return None

    cdef long _radicand_with(self, QuadExt o) except -1:
        if self.q == 0:
            return o.n
        if o.q == 0 or o.n == self.n:
            return self.n
        raise MixedRadicandError(f"sqrt({self.n}) mixed with sqrt({o.n})")

    cdef QuadExt _add(self, QuadExt o):
        cdef long n = self._radicand_with(o)
        if self.d == o.d:
            return _make(self.p + o.p, self.q + o.q, self.d, n)
        return _make(self.p * o.d + o.p * self.d, self.q * o.d + o.q * self.d,
                     self.d * o.d, n)

    cdef QuadExt _mul(self, QuadExt o):
        cdef long n = self._radicand_with(o)
        return _make(self.p * o.p + n * self.q * o.q, self.p * o.q + self.q * o.p,
                     self.d * o.d, n)

    def __add__(self, other):
        cdef QuadExt o = self._coerce(other)
        if o is None:
            if isinstance(other, float):
                return float(self) + other
            return NotImplemented
        return self._add(o)

    def __radd__(self, other):
        return self.__add__(other)

    def __neg__(self):
        return _make(-self.p, -self.q, self.d, self.n)

    def __pos__(self):
        return self

    def __sub__(self, other):
        cdef QuadExt o = self._coerce(other)
        if o is None:
            if isinstance(other, float):
                return float(self) - other
            return NotImplemented
        return self._add(_make(-o.p, -o.q, o.d, o.n))

    def __rsub__(self, other):
        cdef QuadExt o = self._coerce(other)
        if o is None:
            if isinstance(other, float):
                return other - float(self)
            return NotImplemented
        return o._add(_make(-self.p, -self.q, self.d, self.n))

    def __mul__(self, other):
        cdef QuadExt o = self._coerce(other)
        if o is None:
            if isinstance(other, float):
                return float(self) * other
            return NotImplemented
        return self._mul(o)

    def __rmul__(self, other):
        return self.__mul__(other)

    def inverse(self):
        num = self.p * self.p - self.n * self.q * self.q
        if num == 0:
            if self.p == 0 and self.q == 0:
                raise ZeroDivisionError("inverse of zero")
            raise AssertionError(f"zero norm for nonzero element; radicand {self.n} not square-free")
        return _make(self.d * self.p, -self.d * self.q, num, self.n)

    def __truediv__(self, other):
        cdef QuadExt o = self._coerce(other)
        if o is None:
            if isinstance(other, float):
                return float(self) / other
            return NotImplemented
        return self._mul(o.inverse())

    def __rtruediv__(self, other):
        cdef QuadExt o = self._coerce(other)
        if o is None:
            if isinstance(other, float):
                return other / float(self)
            return NotImplemented
        return o._mul(self.inverse())

    def __pow__(self, k, mod):
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return self.inverse() ** (-k)
        cdef QuadExt result = _make(1, 0, 1, self.n)
        cdef QuadExt base = self
        while k:
            if k & 1:
                result = result._mul(base)
            base = base._mul(base)
            k >>= 1
        return result

    def __eq__(self, other):
        cdef QuadExt o = self._coerce(other)
        if o is None:
            if isinstance(other, float):
                return float(self) == other
            return NotImplemented
        if self.q == 0 and o.q == 0:
            return self.p == o.p and self.d == o.d
        return self.p == o.p and self.q == o.q and self.d == o.d and self.n == o.n

    def __ne__(self, other):
        r = self.__eq__(other)
        if r is NotImplemented:
            return r
        return not r

    def __hash__(self):
        if self.q == 0:
            return hash(Fraction(self.p, self.d))
        return hash((self.p, self.q, self.d, self.n))

    def __bool__(self):
        return self.p != 0 or self.q != 0

    def __float__(self):
        return to_float(self.p, self.q, self.d, self.n)

    def sign(self):
        sp = (self.p > 0) - (self.p < 0)
        sq = (self.q > 0) - (self.q < 0)
        if sq == 0:
            return sp
        if sp == 0 or sp == sq:
            return sq
        diff = self.p * self.p - self.n * self.q * self.q
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
        return (QuadExt, (self.p, self.q, self.d, self.n))

    def __repr__(self):
        return f"QuadExt({self.p}, {self.q}, {self.d}, n={self.n})"

    def __str__(self):
        return format_scalar(self.p, self.q, self.d, self.n)


# -- kernels ----------------------------------------------------------------

def matvec(A, v):
    cdef list out = [0] * DIM
    cdef int i, a
    cdef list Al = list(A)
    for i in range(DIM):
        vi = v[i]
        if not vi:
            continue
        for a in range(DIM):
            c = Al[a * DIM + i]
            if c:
                out[a] = out[a] + c * vi
    return out


def matmul(A, B):
    cdef list out = [0] * DIM2
    cdef list Al = list(A)
    cdef list Bl = list(B)
    cdef int i, j, k
    for k in range(DIM):
        for j in range(DIM):
            b = Bl[k * DIM + j]
            if not b:
                continue
            for i in range(DIM):
                a = Al[i * DIM + k]
                if a:
                    out[i * DIM + j] = out[i * DIM + j] + a * b
    return out


def bilinear(M, x, y):
    cdef list Ml = list(M)
    cdef int i, j
    total = 0
    for i in range(DIM):
        xi = x[i]
        if not xi:
            continue
        for j in range(DIM):
            yj = y[j]
            if not yj:
                continue
            m = Ml[i * DIM + j]
            if m:
                total = total + m * xi * yj
    return total


def eval3(T, x, y, z):
    cdef list Tl = list(T)
    cdef int i, j, k, base
    total = 0
    for i in range(DIM):
        xi = x[i]
        if not xi:
            continue
        for j in range(DIM):
            yj = y[j]
            if not yj:
                continue
            xy = xi * yj
            base = i * DIM2 + j * DIM
            for k in range(DIM):
                zk = z[k]
                if not zk:
                    continue
                t = Tl[base + k]
                if t:
                    total = total + t * xy * zk
    return total


cdef list _pull_slot(list cur, list M, int slot):
    cdef list nxt = [0] * DIM3
    cdef int idx, i, j, k, rem, src, stride, base, row, m, pos
    for idx in range(DIM3):
        t = cur[idx]
        if not t:
            continue
        i = idx // DIM2
        rem = idx - i * DIM2
        j = rem // DIM
        k = rem - j * DIM
        if slot == 0:
            src = i
            stride = DIM2
            base = j * DIM + k
        elif slot == 1:
            src = j
            stride = DIM
            base = i * DIM2 + k
        else:
            src = k
            stride = 1
            base = i * DIM2 + j * DIM
        row = src * DIM
        for m in range(DIM):
            c = M[row + m]
            if c:
                pos = base + m * stride
                nxt[pos] = nxt[pos] + c * t
    return nxt


def pullback3(T, A, B, C):
    cdef list cur = list(T)
    if A is not None:
        cur = _pull_slot(cur, list(A), 0)
    if B is not None:
        cur = _pull_slot(cur, list(B), 1)
    if C is not None:
        cur = _pull_slot(cur, list(C), 2)
    return cur


def contract_first(T, x):
    cdef list out = [0] * DIM2
    cdef list Tl = list(T)
    cdef int i, r, base
    for i in range(DIM):
        xi = x[i]
        if not xi:
            continue
        base = i * DIM2
        for r in range(DIM2):
            t = Tl[base + r]
            if t:
                out[r] = out[r] + xi * t
    return out
