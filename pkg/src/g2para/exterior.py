"""Exterior algebra and metrics on the fixed 7-dimensional space with basis f_1..f_7.

Vectors are dense 7-tuples.  Forms are sparse maps from strictly increasing
1-based index tuples to nonzero scalars, so ``KForm.basis(1, 2, 7)`` is
f^{127}.  Interior products contract the first slot; on a monomial the
j-th slot carries the sign (-1)**(j-1).
"""

from __future__ import annotations

import re
from itertools import combinations

from . import _backend as K
from .errors import DegenerateMetricError, ValidationError
from .scalar import div, exact, format_scalar, is_zero, parse_scalar

DIM = 7


class Vector(tuple):
    """Immutable 7-component vector with componentwise arithmetic."""

    def __new__(cls, coords=(0,) * DIM):
        coords = tuple(coords)
        if len(coords) != DIM:
            raise ValueError(f"vector needs {DIM} components, got {len(coords)}")
        return super().__new__(cls, coords)

    @classmethod
    def basis(cls, i: int) -> "Vector":
        """f_i for 1 <= i <= 7."""
        return cls(1 if k == i - 1 else 0 for k in range(DIM))

    @classmethod
    def zero(cls) -> "Vector":
        return cls()

    def __add__(self, other):
        return Vector(a + b for a, b in zip(self, other))

    def __sub__(self, other):
        return Vector(a - b for a, b in zip(self, other))

    def __neg__(self):
        return Vector(-a for a in self)

    def __mul__(self, c):
        if isinstance(c, tuple):
            return NotImplemented
        return Vector(a * c if a else 0 for a in self)

    __rmul__ = __mul__

    def is_zero(self, tol=None) -> bool:
        return all(is_zero(a) if tol is None else is_zero(a, tol) for a in self)

    def __repr__(self):
        return f"Vector({self.render()})"

    def render(self, name: str = "f") -> str:
        parts = []
        for i, c in enumerate(self):
            if c:
                parts.append(f"({format_scalar(c)}){name}{i + 1}")
        return " + ".join(parts) if parts else "0"


def basis_vectors():
    return [Vector.basis(i) for i in range(1, DIM + 1)]


def _merge_sign(ka, kb):
    """Sign of the shuffle sorting ka + kb (both increasing), 0 on overlap."""
    inversions = 0
    for x in ka:
        for y in kb:
            if x == y:
                return 0
            if x > y:
                inversions += 1
    return -1 if inversions & 1 else 1


def _sort_sign(idx):
    """Sign of the permutation sorting ``idx``, 0 if an index repeats."""
    if len(set(idx)) != len(idx):
        return 0
    inv = 0
    for a in range(len(idx)):
        for b in range(a + 1, len(idx)):
            if idx[a] > idx[b]:
                inv += 1
    return -1 if inv & 1 else 1


class KForm:
    """Alternating k-form stored sparsely over increasing 1-based multi-indices."""

    __slots__ = ("degree", "terms")

    def __init__(self, degree: int, terms=None):
        if degree < 0 or (degree > DIM and terms):
            raise ValueError(f"degree {degree} outside 0..{DIM}")
        self.degree = degree
        clean = {}
        for idx, c in (terms or {}).items():
            idx = tuple(idx)
            if len(idx) != degree:
                raise ValueError(f"index {idx} has wrong length for degree {degree}")
            if any(not 1 <= i <= DIM for i in idx):
                raise ValueError(f"index {idx} out of range 1..{DIM}")
            s = _sort_sign(idx)
            if s == 0 or not c:
                continue
            key = tuple(sorted(idx))
            val = clean.get(key, 0) + (c if s > 0 else -c)
            if val:
                clean[key] = val
            else:
                clean.pop(key, None)
        self.terms = clean

    @classmethod
    def basis(cls, *idx) -> "KForm":
        """f^{i1...ik}; unsorted input is reordered with its sign."""
        return cls(len(idx), {tuple(idx): 1})

    @classmethod
    def scalar(cls, c) -> "KForm":
        return cls(0, {(): c})

    def coefficient(self, *idx):
        s = _sort_sign(idx)
        if s == 0:
            return 0
        c = self.terms.get(tuple(sorted(idx)), 0)
        return c if s > 0 else -c

    def __len__(self):
        return len(self.terms)

    def __iter__(self):
        return iter(sorted(self.terms.items()))

    def __eq__(self, other):
        if not isinstance(other, KForm):
            return NotImplemented
        return self.degree == other.degree and self.terms == other.terms

    def __hash__(self):
        return hash((self.degree, frozenset(self.terms.items())))

    def __add__(self, other):
        if other.degree != self.degree:
            raise ValueError("cannot add forms of different degree")
        out = dict(self.terms)
        for k, c in other.terms.items():
            out[k] = out.get(k, 0) + c
        return KForm(self.degree, out)

    def __neg__(self):
        return KForm(self.degree, {k: -c for k, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, c):
        if isinstance(c, KForm):
            return NotImplemented
        return KForm(self.degree, {k: v * c for k, v in self.terms.items()})

    __rmul__ = __mul__

    def __xor__(self, other):
        return wedge(self, other)

    def is_zero(self) -> bool:
        return all(is_zero(c) for c in self.terms.values())

    def __repr__(self):
        return f"KForm({self.degree}, {self.render()})"

    def render(self, name: str = "f") -> str:
        if not self.terms:
            return "0"
        parts = []
        for idx, c in sorted(self.terms.items()):
            label = "".join(str(i) for i in idx)
            parts.append(f"({format_scalar(c)}){name}^{{{label}}}" if idx else format_scalar(c))
        return " + ".join(parts)


def wedge(a: KForm, b: KForm) -> KForm:
    deg = a.degree + b.degree
    if deg > DIM:
        return KForm(deg)
    out = {}
    for ka, ca in a.terms.items():
        for kb, cb in b.terms.items():
            s = _merge_sign(ka, kb)
            if s == 0:
                continue
            key = tuple(sorted(ka + kb))
            prod = ca * cb
            out[key] = out.get(key, 0) + (prod if s > 0 else -prod)
    return KForm(deg, out)


def interior(v, a: KForm) -> KForm:
    """Contract ``v`` into the first slot of ``a``."""
    if a.degree < 1:
        raise ValueError("interior product needs degree >= 1")
    out = {}
    for idx, c in a.terms.items():
        for pos, i in enumerate(idx):
            vi = v[i - 1]
            if not vi:
                continue
            key = idx[:pos] + idx[pos + 1:]
            term = vi * c
            out[key] = out.get(key, 0) + (-term if pos & 1 else term)
    return KForm(a.degree - 1, out)


def eval_form(a: KForm, vs) -> object:
    """``a(v_1, ..., v_k)`` by iterated first-slot contraction."""
    if len(vs) != a.degree:
        raise ValueError(f"form of degree {a.degree} given {len(vs)} vectors")
    cur = a
    for v in vs:
        cur = interior(v, cur)
    return cur.terms.get((), 0)


def form_to_tensor3(a: KForm):
    """Dense flat 343-list of a 3-form's components ``a(f_i, f_j, f_k)``."""
    if a.degree != 3:
        raise ValueError("expected a 3-form")
    T = [0] * 343
    for (i, j, k), c in a.terms.items():
        i, j, k = i - 1, j - 1, k - 1
        for (x, y, z), s in (((i, j, k), 1), ((j, k, i), 1), ((k, i, j), 1),
                             ((j, i, k), -1), ((i, k, j), -1), ((k, j, i), -1)):
            T[x * 49 + y * 7 + z] = c if s > 0 else -c
    return T


def covector_form(c) -> KForm:
    """1-form from a list of 7 components."""
    return KForm(1, {(i + 1,): ci for i, ci in enumerate(c) if ci})


# -- metrics ----------------------------------------------------------------

def _is_float_matrix(m):
    return any(isinstance(x, float) for x in m)


def _lift(values):
    """Promote ints so elimination never falls back to int division."""
    if _is_float_matrix(values):
        return [float(x) for x in values]
    return [exact(x) for x in values]


def _solve(matrix, rhs_cols):
    """Gauss-Jordan on a flat 7x7 ``matrix`` (row-major) against column list."""
    n = DIM
    use_float = _is_float_matrix(matrix)
    matrix = _lift(matrix)
    rows = [list(matrix[r * n:(r + 1) * n]) + [col[r] for col in rhs_cols] for r in range(n)]
    for c in range(n):
        if use_float:
            piv = max(range(c, n), key=lambda r: abs(float(rows[r][c])))
            if is_zero(rows[piv][c], 1e-14):
                raise DegenerateMetricError("singular metric")
        else:
            piv = next((r for r in range(c, n) if rows[r][c]), None)
            if piv is None:
                raise DegenerateMetricError("singular metric")
        rows[c], rows[piv] = rows[piv], rows[c]
        inv = div(1, rows[c][c])
        rows[c] = [x * inv if x else 0 for x in rows[c]]
        for r in range(n):
            if r != c and rows[r][c]:
                f = rows[r][c]
                rows[r] = [x - f * y if y else x for x, y in zip(rows[r], rows[c])]
    return [[rows[r][n + j] for r in range(n)] for j in range(len(rhs_cols))]


class Metric:
    """Symmetric bilinear form on the 7-space, stored as a flat row-major tuple."""

    __slots__ = ("matrix", "_inverse", "_signature")

    def __init__(self, matrix):
        m = tuple(matrix)
        if len(m) == DIM and all(len(row) == DIM for row in m):
            m = tuple(x for row in m for x in row)
        if len(m) != DIM * DIM:
            raise ValueError("metric needs 7x7 entries")
        for i in range(DIM):
            for j in range(i + 1, DIM):
                a, b = m[i * DIM + j], m[j * DIM + i]
                if not is_zero(a - b):
                    raise ValidationError(f"metric not symmetric at ({i + 1},{j + 1})")
        self.matrix = m
        self._inverse = None
        self._signature = None

    @classmethod
    def diagonal(cls, diag):
        return cls([diag[i] if i == j else 0 for i in range(DIM) for j in range(DIM)])

    @classmethod
    def from_entries(cls, entries):
        """Build from ``{(i, j): value}`` with 1-based indices; (i, j) sets both g_ij and g_ji."""
        m = [0] * (DIM * DIM)
        for (i, j), v in entries.items():
            if not (1 <= i <= DIM and 1 <= j <= DIM):
                raise ValidationError(f"metric index ({i},{j}) out of range")
            m[(i - 1) * DIM + (j - 1)] = v
            m[(j - 1) * DIM + (i - 1)] = v
        return cls(m)

    @classmethod
    def standard(cls):
        """g_{4,3} = diag(-1,-1,-1,-1,1,1,1)."""
        return cls.diagonal([-1, -1, -1, -1, 1, 1, 1])

    def entry(self, i: int, j: int):
        """g(f_i, f_j), 1-based."""
        return self.matrix[(i - 1) * DIM + (j - 1)]

    def __call__(self, X, Y):
        return K.bilinear(self.matrix, X, Y)

    apply = __call__

    def __eq__(self, other):
        if not isinstance(other, Metric):
            return NotImplemented
        return all(is_zero(a - b) for a, b in zip(self.matrix, other.matrix))

    def __hash__(self):
        return hash(self.matrix)

    def __neg__(self):
        return Metric([-x for x in self.matrix])

    def __mul__(self, c):
        return Metric([x * c if x else 0 for x in self.matrix])

    __rmul__ = __mul__

    def lower(self, X):
        """Covector components ``g(X, f_i)``."""
        return K.matvec(self.matrix, X)

    def inverse(self):
        if self._inverse is None:
            cols = _solve(self.matrix, [[1 if r == c else 0 for r in range(DIM)] for c in range(DIM)])
            # cols[c] is column c of the inverse
            self._inverse = tuple(cols[c][r] for r in range(DIM) for c in range(DIM))
        return self._inverse

    def raise_(self, covector):
        """The vector X with g(X, f_i) = covector[i]; accepts a 1-form or 7 components."""
        if isinstance(covector, KForm):
            if covector.degree != 1:
                raise ValueError("raise needs a 1-form")
            covector = [covector.terms.get((i + 1,), 0) for i in range(DIM)]
        return Vector(K.matvec(self.inverse(), covector))

    def det(self):
        return _det(self.matrix)

    def signature(self):
        """(negatives, positives) by exact congruence diagonalisation."""
        if self._signature is None:
            self._signature = sylvester_signature(self.matrix)
        return self._signature

    def render(self, name: str = "f") -> str:
        parts = []
        for i in range(DIM):
            for j in range(i, DIM):
                c = self.matrix[i * DIM + j]
                if c:
                    parts.append(f"({format_scalar(c)}){name}^{i + 1}.{name}^{j + 1}")
        return " + ".join(parts) if parts else "0"

    def __repr__(self):
        return f"Metric({self.render()})"


def _sign(x):
    if isinstance(x, float):
        return (x > 0) - (x < 0)
    if isinstance(x, int):
        return (x > 0) - (x < 0)
    return x.sign()


def _det(matrix):
    n = DIM
    use_float = _is_float_matrix(matrix)
    matrix = _lift(matrix)
    rows = [list(matrix[r * n:(r + 1) * n]) for r in range(n)]
    det = 1
    for c in range(n):
        if use_float:
            piv = max(range(c, n), key=lambda r: abs(float(rows[r][c])))
            if rows[piv][c] == 0:
                return 0.0
        else:
            piv = next((r for r in range(c, n) if rows[r][c]), None)
            if piv is None:
                return 0
        if piv != c:
            rows[c], rows[piv] = rows[piv], rows[c]
            det = -det
        p = rows[c][c]
        det = det * p
        for r in range(c + 1, n):
            if rows[r][c]:
                f = div(rows[r][c], p)
                rows[r] = [x - f * y if y else x for x, y in zip(rows[r], rows[c])]
    return det


def sylvester_signature(matrix, tol: float = 1e-12):
    """Count negative and positive pivots of a symmetric congruence reduction.

    Zero diagonals are handled by the congruence row_i += row_j, col_i += col_j,
    which puts 2*a_ij on the diagonal.
    """
    n = int(round(len(matrix) ** 0.5))
    matrix = _lift(matrix)
    A = [list(matrix[r * n:(r + 1) * n]) for r in range(n)]
    active = list(range(n))
    neg = pos = 0

    def nz(x):
        return not is_zero(x, tol) if isinstance(x, float) else bool(x)

    while active:
        piv = next((i for i in active if nz(A[i][i])), None)
        if piv is None:
            pair = next(((i, j) for i in active for j in active if i != j and nz(A[i][j])), None)
            if pair is None:
                break  # remaining block is zero: degenerate directions
            i, j = pair
            for k in range(n):
                A[i][k] = A[i][k] + A[j][k]
            for k in range(n):
                A[k][i] = A[k][i] + A[k][j]
            piv = i
        p = A[piv][piv]
        if _sign(p) < 0:
            neg += 1
        else:
            pos += 1
        active.remove(piv)
        for r in active:
            if nz(A[r][piv]):
                f = div(A[r][piv], p)
                for c in range(n):
                    if nz(A[piv][c]):
                        A[r][c] = A[r][c] - f * A[piv][c]
        for r in active:
            A[piv][r] = 0
            A[r][piv] = 0
    return neg, pos


_SYM_TERM = re.compile(r"([+-]?[^+-]*?)\*?f\^(\d)\.f\^(\d)")


def parse_symmetric_product(text: str, radicand: int = 2, mode: str = "exact") -> Metric:
    """Parse ``c f^i.f^j + ...`` into a metric.

    For i != j the term sets g_ij = g_ji = c (the product stands for
    f^i (x) f^j + f^j (x) f^i); for i == j it sets g_ii = c.
    """
    s = "".join(text.split())
    entries = {}
    pos = 0
    for m in _SYM_TERM.finditer(s):
        if m.start() != pos:
            raise ValidationError(f"cannot parse metric near {s[pos:m.start()]!r}")
        coeff, i, j = m.groups()
        if coeff in ("", "+"):
            coeff = "1"
        elif coeff == "-":
            coeff = "-1"
        i, j = int(i), int(j)
        key = (min(i, j), max(i, j))
        entries[key] = entries.get(key, 0) + parse_scalar(coeff.lstrip("+") or "1", radicand, mode)
        pos = m.end()
    if pos != len(s):
        raise ValidationError(f"cannot parse metric tail {s[pos:]!r}")
    return Metric.from_entries(entries)


def all_index_tuples(k: int):
    return list(combinations(range(1, DIM + 1), k))
