"""Almost paracontact metric structure induced by a unit timelike field, and F = nabla Phi.

Given a bundle (phi, g43, P) and xi with g43(xi, xi) = -1:
phi_endo(X) = P(xi, X), eta = g(xi, .), g = -g43, Phi(X, Y) = g(phi_endo X, Y).
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from fractions import Fraction

from . import _backend as K
from .errors import ConsistencyError, NonTimelikeUnitError
from .exterior import DIM, KForm, Metric, Vector, covector_form, interior
from .g2star import G2Bundle
from .liealg import Connection, nabla_form
from .scalar import FLOAT_TOL, div, is_zero

__all__ = [
    "APCMS",
    "AuditReport",
    "AxiomResult",
    "FTensor",
    "axiom_audit",
    "f_tensor",
    "induce",
    "is_killing",
    "killing_defect",
    "sample_unit_timelike",
]


def _has_float(xs):
    return any(isinstance(x, float) for x in xs)


@dataclass(frozen=True)
class APCMS:
    xi: Vector
    eta: KForm
    phi_endo: tuple  # flat 7x7, column j = phi(f_j)
    g: Metric
    bundle: G2Bundle

    @property
    def eta_vec(self):
        """eta as 7 components."""
        return tuple(self.eta.terms.get((i + 1,), 0) for i in range(DIM))

    def phi(self, X) -> Vector:
        return Vector(K.matvec(self.phi_endo, X))

    def phi2(self, X) -> Vector:
        return self.phi(self.phi(X))

    def eta_of(self, X):
        return K.bilinear(self.g.matrix, self.xi, X)

    @property
    def is_float(self) -> bool:
        return _has_float(self.xi) or _has_float(self.g.matrix)


def induce(bundle: G2Bundle, xi, rescale: bool = False, tol: float = FLOAT_TOL) -> APCMS:
    """Build (phi, xi, eta, g) from ``bundle`` and ``xi``.

    Exact input must satisfy g43(xi, xi) = -1 exactly.  Float input is
    accepted within ``tol``; with ``rescale`` a timelike xi is divided by
    sqrt(-g43(xi, xi)) first.
    """
    xi = Vector(xi)
    norm = bundle.g(xi, xi)
    if isinstance(norm, float) or _has_float(xi):
        norm = float(norm)
        if rescale and norm < 0 and abs(norm + 1) > tol:
            xi = xi * (1.0 / math.sqrt(-norm))
            norm = float(bundle.g(xi, xi))
        if abs(norm + 1) > tol:
            raise NonTimelikeUnitError(norm)
    elif norm != -1:
        raise NonTimelikeUnitError(norm)
    g = -bundle.g
    cols = [bundle.cross(xi, Vector.basis(j + 1)) for j in range(DIM)]
    phi_endo = tuple(cols[j][a] for a in range(DIM) for j in range(DIM))
    eta = covector_form(g.lower(xi))
    return APCMS(xi, eta, phi_endo, g, bundle)


# -- axiom audit ------------------------------------------------------------

@dataclass(frozen=True)
class AxiomResult:
    ok: bool
    witness: tuple | None = None
    detail: str = ""


@dataclass(frozen=True)
class AuditReport:
    results: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return all(r.ok for r in self.results.values())

    def __getitem__(self, name):
        return self.results[name]

    def failed(self):
        return [k for k, r in self.results.items() if not r.ok]


def _zero(x, tol):
    return is_zero(x, tol)


def axiom_audit(s: APCMS, tol: float = FLOAT_TOL) -> AuditReport:
    """Check phi^2 = I - eta (x) xi, compatibility, eta o phi = 0 and skewness of Phi on the basis."""
    e = [Vector.basis(i) for i in range(1, DIM + 1)]
    res = {}

    wit = None
    for i in range(DIM):
        lhs = s.phi2(e[i])
        rhs = e[i] - s.xi * s.eta_of(e[i])
        if not all(_zero(a - b, tol) for a, b in zip(lhs, rhs)):
            wit = (i + 1,)
            detail = f"phi^2(f{i + 1}) = {lhs.render()}, expected {rhs.render()}"
            break
    res["phi_squared"] = AxiomResult(wit is None, wit, detail if wit else "")

    wit = None
    phis = [s.phi(v) for v in e]
    for i in range(DIM):
        for j in range(i, DIM):
            lhs = s.g(phis[i], phis[j])
            rhs = -s.g(e[i], e[j]) + s.eta_of(e[i]) * s.eta_of(e[j])
            if not _zero(lhs - rhs, tol):
                wit = (i + 1, j + 1)
                detail = f"g(phi f{i + 1}, phi f{j + 1}) = {lhs}, expected {rhs}"
                break
        if wit:
            break
    res["compatibility"] = AxiomResult(wit is None, wit, detail if wit else "")

    wit = None
    for i in range(DIM):
        v = s.eta_of(phis[i])
        if not _zero(v, tol):
            wit = (i + 1,)
            detail = f"eta(phi f{i + 1}) = {v}"
            break
    res["eta_phi"] = AxiomResult(wit is None, wit, detail if wit else "")

    wit = None
    for i in range(DIM):
        for j in range(i, DIM):
            a = s.g(phis[i], e[j])
            b = s.g(phis[j], e[i])
            if not _zero(a + b, tol):
                wit = (i + 1, j + 1)
                detail = f"Phi(f{i + 1},f{j + 1}) + Phi(f{j + 1},f{i + 1}) = {a + b}"
                break
        if wit:
            break
    res["phi_skew"] = AxiomResult(wit is None, wit, detail if wit else "")
    return AuditReport(res)


# -- F = nabla Phi ----------------------------------------------------------

class FTensor:
    """Three-tensor on basis triples: ``values[i*49 + j*7 + k] = F(f_i, f_j, f_k)`` (0-based)."""

    __slots__ = ("values", "tol")

    def __init__(self, values, tol: float = FLOAT_TOL):
        values = tuple(values)
        if len(values) != DIM ** 3:
            raise ValueError("FTensor needs 343 entries")
        self.values = values
        self.tol = tol

    @classmethod
    def zero(cls):
        return cls((0,) * DIM ** 3)

    @classmethod
    def from_function(cls, fn, tol: float = FLOAT_TOL):
        e = [Vector.basis(i) for i in range(1, DIM + 1)]
        return cls([fn(e[i], e[j], e[k]) for i in range(DIM) for j in range(DIM) for k in range(DIM)], tol)

    def __call__(self, X, Y, Z):
        return K.eval3(self.values, X, Y, Z)

    def at(self, i: int, j: int, k: int):
        """F(f_i, f_j, f_k), 1-based."""
        return self.values[(i - 1) * 49 + (j - 1) * 7 + (k - 1)]

    def is_zero(self) -> bool:
        return all(is_zero(v, self.tol) for v in self.values)

    def nonzero(self):
        """``{(i, j, k): value}`` for nonzero entries, 1-based."""
        out = {}
        for n, v in enumerate(self.values):
            if not is_zero(v, self.tol):
                out[(n // 49 + 1, (n // 7) % 7 + 1, n % 7 + 1)] = v
        return out

    def witness(self):
        for n, v in enumerate(self.values):
            if not is_zero(v, self.tol):
                return (n // 49 + 1, (n // 7) % 7 + 1, n % 7 + 1), v
        return None

    def __add__(self, other):
        return FTensor([a + b for a, b in zip(self.values, other.values)], self.tol)

    def __sub__(self, other):
        return FTensor([a - b for a, b in zip(self.values, other.values)], self.tol)

    def __neg__(self):
        return FTensor([-a for a in self.values], self.tol)

    def __mul__(self, c):
        return FTensor([a * c if a else 0 for a in self.values], self.tol)

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, FTensor):
            return NotImplemented
        return (self - other).is_zero()

    def __hash__(self):
        return hash(self.values)

    def __repr__(self):
        nz = self.nonzero()
        return f"FTensor({len(nz)} nonzero)"


def nabla_xi_columns(s: APCMS, conn: Connection):
    """List whose entry i is nabla_{f_i} xi."""
    return [Vector(K.matvec(conn.matrix(Vector.basis(i + 1)), s.xi)) for i in range(DIM)]


def _f_via_phi(s: APCMS, conn: Connection):
    """F(X,Y,Z) = -(nabla_X phi)(xi,Y,Z) - phi(nabla_X xi, Y, Z)."""
    T = s.bundle.phi_tensor
    out = [0] * DIM ** 3
    dxi = nabla_xi_columns(s, conn)
    for i in range(DIM):
        X = Vector.basis(i + 1)
        dphi = nabla_form(conn, X, s.bundle.phi)
        # -(xi _| nabla_X phi) as a dense 7x7 block
        two = interior(s.xi, dphi)
        for (j, k), c in two.terms.items():
            out[i * 49 + (j - 1) * 7 + (k - 1)] = out[i * 49 + (j - 1) * 7 + (k - 1)] - c
            out[i * 49 + (k - 1) * 7 + (j - 1)] = out[i * 49 + (k - 1) * 7 + (j - 1)] + c
        block = K.contract_first(T, dxi[i])
        for r in range(49):
            if block[r]:
                out[i * 49 + r] = out[i * 49 + r] - block[r]
    return out


def _f_direct(s: APCMS, conn: Connection):
    """(nabla_{f_i} Phi)(f_j, f_k) = -Phi(nabla_i f_j, f_k) - Phi(f_j, nabla_i f_k), Phi from phi_endo and g."""
    # M[j][k] = Phi(f_j, f_k) = g(phi f_j, f_k)
    M = K.matmul(tuple(s.g.matrix), s.phi_endo)  # (g . phi)[k][j] = g(f_k, phi f_j)
    Phi = [M[k * DIM + j] for j in range(DIM) for k in range(DIM)]
    out = [0] * DIM ** 3
    for i in range(DIM):
        A = conn.matrix(Vector.basis(i + 1))
        for j in range(DIM):
            for k in range(DIM):
                acc = 0
                for a in range(DIM):
                    aj = A[a * DIM + j]
                    if aj:
                        p = Phi[a * DIM + k]
                        if p:
                            acc = acc + aj * p
                    ak = A[a * DIM + k]
                    if ak:
                        p = Phi[j * DIM + a]
                        if p:
                            acc = acc + ak * p
                if acc:
                    out[i * 49 + j * 7 + k] = -acc
    return out


def f_tensor(s: APCMS, conn: Connection, tol: float = FLOAT_TOL) -> FTensor:
    """F = nabla Phi, computed through phi and cross-checked against direct differentiation of Phi."""
    a = _f_via_phi(s, conn)
    b = _f_direct(s, conn)
    for n, (x, y) in enumerate(zip(a, b)):
        if not is_zero(x - y, tol):
            trip = (n // 49 + 1, (n // 7) % 7 + 1, n % 7 + 1)
            raise ConsistencyError(f"F paths disagree at {trip}: {x} vs {y}")
    return FTensor(a, tol)


def killing_defect(s: APCMS, conn: Connection):
    """Flat matrix D[i][j] = g(nabla_{f_i} xi, f_j) + g(nabla_{f_j} xi, f_i)."""
    cols = nabla_xi_columns(s, conn)
    low = [s.g.lower(c) for c in cols]
    return [low[i][j] + low[j][i] for i in range(DIM) for j in range(DIM)]


def is_killing(s: APCMS, conn: Connection, tol: float = FLOAT_TOL) -> bool:
    """True iff X -> nabla_X xi is g-skew; the diagonal pairs are included."""
    return all(is_zero(v, tol) for v in killing_defect(s, conn))


# -- sampling ---------------------------------------------------------------

def sample_unit_timelike(g43: Metric, base, rng: random.Random, max_den: int = 7, as_float: bool = False):
    """A random xi with g43(xi, xi) = -1, exact when ``base`` is exact.

    Second intersection of the quadric with the line through the unit
    timelike ``base`` in a random rational direction w:
    xi = base + t w with t = -2 g(base, w) / g(w, w).
    """
    base = Vector(base)
    while True:
        w = Vector(Fraction(rng.randint(-max_den, max_den), rng.randint(1, max_den)) for _ in range(DIM))
        gww = g43(w, w)
        if is_zero(gww) or w.is_zero():
            continue
        t = div(-2 * g43(base, w), gww)
        if is_zero(t):
            continue
        xi = base + w * t
        if as_float:
            xi = Vector(float(x) for x in xi)
        return xi
