"""Scalars: exact elements of Q(sqrt(n)) with a float backend behind the same operators.

Exact values are :class:`QuadExt` instances (compiled or pure-Python, see
``_backend``); float values are plain ``float``.  Every other module only
uses ``+ - * /`` and :func:`is_zero`, so either kind flows through unchanged.
Structural zeros produced by the kernels are the int ``0``.
"""

from __future__ import annotations

import re
from decimal import Decimal, localcontext
from fractions import Fraction

from ._backend import BACKEND, QuadExt
from .errors import MalformedScalarError, MixedRadicandError

__all__ = [
    "BACKEND",
    "FLOAT_TOL",
    "QuadExt",
    "div",
    "exact",
    "format_scalar",
    "invert",
    "is_squarefree",
    "is_zero",
    "normalize",
    "nth_root_exact",
    "parse_scalar",
    "sqrt_radicand",
    "to_float",
]

#: Absolute zero threshold in float mode.
FLOAT_TOL = 1e-9


def is_squarefree(n: int) -> bool:
    if n < 2:
        return False
    f = 2
    while f * f <= n:
        if n % (f * f) == 0:
            return False
        f += 1
    return True


def sqrt_radicand(n: int = 2) -> QuadExt:
    return QuadExt(0, 1, 1, n)


def exact(x, radicand: int = 2) -> QuadExt:
    """Coerce an int, Fraction or QuadExt to QuadExt."""
    if isinstance(x, QuadExt):
        return x
    if isinstance(x, int):
        return QuadExt(x, 0, 1, radicand)
    if isinstance(x, Fraction):
        return QuadExt(x.numerator, 0, x.denominator, radicand)
    raise TypeError(f"cannot represent {x!r} exactly")


def is_zero(x, tol: float = FLOAT_TOL) -> bool:
    """Exact zero test for exact scalars, ``|x| <= tol`` for floats."""
    if isinstance(x, float):
        return abs(x) <= tol
    return not x


def div(a, b):
    """a / b, staying exact when both are ints or Fractions."""
    if isinstance(a, (int, Fraction)) and isinstance(b, (int, Fraction)):
        return Fraction(a) / b
    return a / b


def to_float(x) -> float:
    return float(x)


def normalize(q, radicand: int = 2) -> QuadExt:
    """Canonical form of a scalar.

    ``q`` is a QuadExt (returned canonicalised) or raw parts
    ``(rat_num, rat_den, rad_num, rad_den)``.
    """
    if isinstance(q, QuadExt) or all(hasattr(q, a) for a in "pqdn"):
        return QuadExt(q.p, q.q, q.d, q.n)
    try:
        rn, rd, sn, sd = q
    except (TypeError, ValueError):
        raise MalformedScalarError(f"expected 4 integer parts, got {q!r}") from None
    if rd == 0 or sd == 0:
        raise MalformedScalarError("zero denominator")
    return QuadExt.from_parts(Fraction(rn, rd), Fraction(sn, sd), radicand)


def invert(q: QuadExt) -> QuadExt:
    if not q:
        raise ZeroDivisionError("inverse of zero")
    return q.inverse()


# -- exact roots ------------------------------------------------------------

def _int_root(m: int, k: int):
    """Exact integer k-th root of m >= 0, or None."""
    if m < 0:
        return None
    if m < 2:
        return m
    r = int(round(m ** (1.0 / k))) if m < 2**1000 else 1 << (m.bit_length() // k)
    # Newton refinement on integers
    while True:
        nxt = ((k - 1) * r + m // r ** (k - 1)) // k
        if nxt >= r:
            break
        r = nxt
    for cand in (r - 1, r, r + 1):
        if cand >= 0 and cand**k == m:
            return cand
    return None


def _rational_root(x: Fraction, k: int):
    if x < 0:
        if k % 2 == 0:
            return None
        r = _rational_root(-x, k)
        return None if r is None else -r
    num = _int_root(x.numerator, k)
    den = _int_root(x.denominator, k)
    if num is None or den is None:
        return None
    return Fraction(num, den)


def nth_root_exact(q: QuadExt, k: int):
    """Return ``r`` in the field of ``q`` with ``r**k == q``, or ``None``.

    Real roots only.  For a rational ``q`` the rational root is preferred,
    then a pure radical ``s*sqrt(n)``; otherwise candidate pairs of real
    roots of ``q`` and its conjugate are recovered to high precision,
    rationalised and verified exactly.
    """
    if k < 1:
        raise ValueError("k must be a positive integer")
    q = exact(q)
    if k == 1:
        return q
    n = q.n
    if not q:
        return q
    if q.is_rational():
        r = _rational_root(q.rat, k)
        if r is not None:
            return exact(r, n)
        if k % 2 == 0:
            # (s*sqrt(n))**k = s**k * n**(k/2)
            s = _rational_root(q.rat / Fraction(n) ** (k // 2), k)
            if s is not None:
                cand = QuadExt.from_parts(0, s, n)
                if cand**k == q:
                    return cand
        return None
    with localcontext() as ctx:
        ctx.prec = 80
        sqrt_n = Decimal(n).sqrt()
        val = (Decimal(q.p) + Decimal(q.q) * sqrt_n) / Decimal(q.d)
        conj = (Decimal(q.p) - Decimal(q.q) * sqrt_n) / Decimal(q.d)

        def real_roots(v):
            if v == 0:
                return [Decimal(0)]
            if v > 0:
                base = v ** (Decimal(1) / Decimal(k))
                return [base, -base] if k % 2 == 0 else [base]
            if k % 2 == 0:
                return []
            return [-((-v) ** (Decimal(1) / Decimal(k)))]

        for r1 in real_roots(val):
            for r2 in real_roots(conj):
                a = Fraction((r1 + r2) / 2).limit_denominator(10**30)
                b = Fraction((r1 - r2) / (2 * sqrt_n)).limit_denominator(10**30)
                cand = QuadExt.from_parts(a, b, n)
                if cand**k == q:
                    return cand
    return None


# -- literal grammar --------------------------------------------------------

_TERM = re.compile(
    r"""([+-]?)                       # sign
        (?:(\d+)(?:/(\d+))?)?          # INT or INT/INT
        (\*?sqrt\((\d+)\))?            # optional *sqrt(N)
    """,
    re.VERBOSE,
)


def parse_scalar(text: str, radicand: int = 2, mode: str = "exact"):
    """Parse ``INT``, ``INT/INT``, ``INT*sqrt(N)``, ``INT/INT*sqrt(N)`` and sums/differences.

    Whitespace is ignored.  ``N`` must equal ``radicand``.  In float mode the
    exact value is converted at the end.
    """
    if not isinstance(text, str):
        if isinstance(text, (int, Fraction)) and not isinstance(text, bool):
            value = exact(text, radicand)
            return float(value) if mode == "float" else value
        if isinstance(text, float) and mode == "float":
            return text
        raise MalformedScalarError(f"not a scalar literal: {text!r}")
    s = "".join(text.split())
    if not s:
        raise MalformedScalarError("empty scalar literal")
    total = QuadExt(0, 0, 1, radicand)
    pos = 0
    first = True
    while pos < len(s):
        m = _TERM.match(s, pos)
        if m is None or m.end() == pos:
            raise MalformedScalarError(f"bad scalar literal {text!r} at offset {pos}")
        sign, num, den, rad, rad_n = m.groups()
        if not sign and not first:
            raise MalformedScalarError(f"missing operator in {text!r} at offset {pos}")
        if num is None and rad is None:
            raise MalformedScalarError(f"bad scalar literal {text!r} at offset {pos}")
        if num is None and rad is not None and rad.startswith("*"):
            raise MalformedScalarError(f"dangling '*' in {text!r}")
        if num is not None and rad is not None and not rad.startswith("*"):
            raise MalformedScalarError(f"missing '*' before sqrt in {text!r}")
        if den is not None and int(den) == 0:
            raise MalformedScalarError(f"zero denominator in {text!r}")
        coeff = Fraction(int(num) if num else 1, int(den) if den else 1)
        if sign == "-":
            coeff = -coeff
        if rad is None:
            total = total + QuadExt.from_parts(coeff, 0, radicand)
        else:
            n = int(rad_n)
            if n != radicand:
                raise MixedRadicandError(f"sqrt({n}) in {text!r}; context radicand is {radicand}")
            total = total + QuadExt.from_parts(0, coeff, radicand)
        pos = m.end()
        first = False
    return float(total) if mode == "float" else total


def format_scalar(x) -> str:
    """Render a scalar; exact values round-trip through :func:`parse_scalar`."""
    if isinstance(x, float):
        return repr(x)
    if isinstance(x, int):
        return str(x)
    if isinstance(x, Fraction):
        return str(x)
    return str(x)
