"""Lie algebras on f_1..f_7 and the Levi-Civita connection of a left-invariant metric.

All fields are left-invariant, so covariant derivatives are bilinear in the
constant coefficients and directional-derivative terms vanish.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

from . import _backend as K
from .exterior import DIM, KForm, Metric, Vector
from .scalar import div, is_zero

__all__ = [
    "Connection",
    "JacobiReport",
    "LieAlgebra",
    "check_jacobi",
    "levi_civita",
    "nabla_form",
    "nabla_vec",
]


class LieAlgebra:
    """Brackets [f_i, f_j] for i < j, extended antisymmetrically.

    ``brackets`` maps 1-based pairs to vectors (or 7-sequences); pairs with
    i > j are accepted and stored negated.
    """

    def __init__(self, brackets=None):
        C = [0] * (DIM ** 3)
        for (i, j), v in (brackets or {}).items():
            if not (1 <= i <= DIM and 1 <= j <= DIM):
                raise ValueError(f"bracket index ({i},{j}) out of range")
            if i == j:
                raise ValueError(f"[f_{i}, f_{i}] must vanish")
            v = Vector(v)
            if i > j:
                i, j, v = j, i, -v
            for k in range(DIM):
                if v[k]:
                    C[(i - 1) * 49 + (j - 1) * 7 + k] = v[k]
                    C[(j - 1) * 49 + (i - 1) * 7 + k] = -v[k]
        self.structure = tuple(C)

    @classmethod
    def abelian(cls):
        return cls({})

    def bracket_basis(self, i: int, j: int) -> Vector:
        """[f_i, f_j], 1-based."""
        base = (i - 1) * 49 + (j - 1) * 7
        return Vector(self.structure[base:base + 7])

    def bracket(self, X, Y) -> Vector:
        out = [0] * DIM
        for i in range(DIM):
            if not X[i]:
                continue
            for j in range(DIM):
                if not Y[j]:
                    continue
                c = X[i] * Y[j]
                base = i * 49 + j * 7
                for k in range(DIM):
                    s = self.structure[base + k]
                    if s:
                        out[k] = out[k] + c * s
        return Vector(out)

    def nonzero_brackets(self):
        out = {}
        for i, j in combinations(range(1, DIM + 1), 2):
            v = self.bracket_basis(i, j)
            if not v.is_zero():
                out[(i, j)] = v
        return out

    def is_abelian(self) -> bool:
        return not any(self.structure)

    def __eq__(self, other):
        if not isinstance(other, LieAlgebra):
            return NotImplemented
        return all(is_zero(a - b) for a, b in zip(self.structure, other.structure))

    def __hash__(self):
        return hash(self.structure)

    def __repr__(self):
        body = ", ".join(f"[f{i},f{j}]={v.render()}" for (i, j), v in self.nonzero_brackets().items())
        return f"LieAlgebra({body})"


@dataclass(frozen=True)
class JacobiReport:
    ok: bool
    triple: tuple | None = None
    residual: Vector | None = None


def check_jacobi(L: LieAlgebra) -> JacobiReport:
    """Check the cyclic sum [[f_i,f_j],f_k] + [[f_j,f_k],f_i] + [[f_k,f_i],f_j] on all 35 triples."""
    e = [Vector.basis(i) for i in range(1, DIM + 1)]
    for i, j, k in combinations(range(DIM), 3):
        r = (L.bracket(L.bracket(e[i], e[j]), e[k])
             + L.bracket(L.bracket(e[j], e[k]), e[i])
             + L.bracket(L.bracket(e[k], e[i]), e[j]))
        if not r.is_zero():
            return JacobiReport(False, (i + 1, j + 1, k + 1), r)
    return JacobiReport(True)


class Connection:
    """Christoffel table: ``gamma[i][j]`` is nabla_{f_i} f_j (0-based lists)."""

    def __init__(self, gamma):
        self.gamma = tuple(tuple(Vector(v) for v in row) for row in gamma)
        # nabla_{f_i} as a matrix whose column j is nabla_{f_i} f_j
        self._mats = tuple(
            tuple(self.gamma[i][j][a] for a in range(DIM) for j in range(DIM))
            for i in range(DIM)
        )

    @classmethod
    def zero(cls):
        return cls([[Vector.zero()] * DIM for _ in range(DIM)])

    def __call__(self, i: int, j: int) -> Vector:
        """nabla_{f_i} f_j, 1-based."""
        return self.gamma[i - 1][j - 1]

    def matrix(self, X):
        """Flat matrix of nabla_X (column j = nabla_X f_j)."""
        out = [0] * (DIM * DIM)
        for i in range(DIM):
            xi = X[i]
            if not xi:
                continue
            M = self._mats[i]
            for r in range(DIM * DIM):
                if M[r]:
                    out[r] = out[r] + xi * M[r]
        return out

    def nonzero(self):
        """``{(i, j): nabla_{f_i} f_j}`` over nonzero entries, 1-based."""
        return {(i + 1, j + 1): v for i, row in enumerate(self.gamma)
                for j, v in enumerate(row) if not v.is_zero()}

    def __eq__(self, other):
        if not isinstance(other, Connection):
            return NotImplemented
        return all(a == b or (a - b).is_zero()
                   for ra, rb in zip(self.gamma, other.gamma) for a, b in zip(ra, rb))

    def __repr__(self):
        body = ", ".join(f"nabla_f{i} f{j}={v.render()}" for (i, j), v in self.nonzero().items())
        return f"Connection({body})"


def levi_civita(L: LieAlgebra, g: Metric) -> Connection:
    """Koszul formula for left-invariant fields.

    2 g(nabla_X Y, Z) = g([X,Y],Z) - g([Y,Z],X) + g([Z,X],Y), solved for each
    nabla_{f_i} f_j by raising the covector Z -> right-hand side / 2.
    """
    G = g.matrix
    # lowered brackets: lb[i][j][k] = g([f_i, f_j], f_k)
    lb = [[K.matvec(G, L.bracket_basis(i + 1, j + 1)) for j in range(DIM)] for i in range(DIM)]
    g.inverse()  # fail early on a degenerate metric
    gamma = []
    for i in range(DIM):
        row = []
        for j in range(DIM):
            cov = []
            for k in range(DIM):
                v = lb[i][j][k] - lb[j][k][i] + lb[k][i][j]
                cov.append(div(v, 2) if v else 0)
            row.append(g.raise_(cov) if any(cov) else Vector.zero())
        gamma.append(row)
    return Connection(gamma)


def nabla_vec(conn: Connection, X, Y) -> Vector:
    """nabla_X Y for constant-coefficient fields."""
    return Vector(K.matvec(conn.matrix(X), Y))


def nabla_form(conn: Connection, X, a: KForm) -> KForm:
    """Covariant derivative of a constant-coefficient form along X.

    Acts as a derivation: nabla_X f^m = -sum_j (nabla_X f_j)^m f^j, so that
    (nabla_X a)(V_1..V_k) = -sum_i a(V_1, .., nabla_X V_i, .., V_k).
    """
    if a.degree == 0:
        return KForm(0)
    A = conn.matrix(X)
    out = {}
    for idx, c in a.terms.items():
        for pos, m in enumerate(idx):
            row = (m - 1) * DIM
            for j in range(DIM):
                coeff = A[row + j]
                if not coeff:
                    continue
                new = idx[:pos] + (j + 1,) + idx[pos + 1:]
                if len(set(new)) != len(new):
                    continue
                # KForm sorts the index with its sign; accumulate raw entries by tuple
                out.setdefault(new, 0)
                out[new] = out[new] - coeff * c
    result = KForm(a.degree)
    for idx, c in out.items():
        if c:
            result = result + KForm(a.degree, {idx: c})
    return result
