"""Projections of F = nabla Phi onto the twelve classes, and normality / paracontact / Killing checks.

Two routes are available for the parts involving xi:

* ``tensor``: the projection formulas applied to the full tensor F, with
  phi^2 taken as the actual square of the endomorphism;
* ``reduced``: the same combinations after substituting the split-G2
  identities F(phi^2 X, phi^2 Z, xi) = -phi3(nabla_X xi, Z, xi) and
  F(phi X, phi Z, xi) = g43(nabla_{phi X} xi, Z), which only need the
  connection.

The routes agree whenever the structure satisfies the axioms.  The horizontal
(F1..F4) parts exist only on the tensor route.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from . import _backend as K
from .apcms import APCMS, FTensor, axiom_audit, f_tensor, is_killing, nabla_xi_columns
from .errors import ConsistencyError
from .exterior import DIM, Vector, eval_form, interior
from .liealg import Connection, nabla_form, nabla_vec
from .scalar import div, format_scalar, is_zero

__all__ = [
    "GROUPS",
    "ClassReport",
    "classify",
    "normality_defect",
    "normality_vector_form",
    "paracontact_defect",
    "proj_combo",
    "proj_f11",
    "proj_f12",
    "proj_f5_f8_split",
    "proj_w2",
    "reduced_combo",
    "reduced_f11",
    "reduced_f12",
    "reconstruct",
]

GROUPS = ("F1+F2", "F3+F4", "F5+F8", "F6+F7", "F9", "F10", "F11", "F12")
MEMBERS = {
    "F1+F2": (1, 2), "F3+F4": (3, 4), "F5+F8": (5, 8), "F6+F7": (6, 7),
    "F9": (9,), "F10": (10,), "F11": (11,), "F12": (12,),
}
W1_PATTERNS = ("F1+F2", "F3+F4")
W2_PATTERNS = ("F5+F8", "F6+F7", "F9", "F10")
PATTERNS = W1_PATTERNS + W2_PATTERNS


# -- structure matrices -----------------------------------------------------

def _phi(s: APCMS):
    return s.phi_endo


def _phi2(s: APCMS):
    return K.matmul(s.phi_endo, s.phi_endo)


def _xi_eta(s: APCMS):
    """Matrix of X -> eta(X) xi."""
    eta = s.eta_vec
    return [s.xi[a] * eta[j] if s.xi[a] and eta[j] else 0 for a in range(DIM) for j in range(DIM)]


def _contract_last(T, v):
    """Q[i*7 + j] = T(e_i, e_j, v)."""
    out = [0] * (DIM * DIM)
    for r in range(DIM * DIM):
        acc = 0
        base = r * DIM
        for m in range(DIM):
            if v[m]:
                t = T[base + m]
                if t:
                    acc = acc + t * v[m]
        out[r] = acc
    return out


def _swap_last(T):
    """R[i,j,k] = T[i,k,j]."""
    return [T[i * 49 + k * 7 + j] for i in range(DIM) for j in range(DIM) for k in range(DIM)]


def _tensor(values, tol):
    return FTensor(values, tol)


# -- tensor-route projections ----------------------------------------------

def proj_f12(F: FTensor, s: APCMS) -> FTensor:
    """eta(X){eta(Y) F(xi, xi, phi^2 Z) - eta(Z) F(xi, xi, phi^2 Y)}."""
    XE = _xi_eta(s)
    T = K.pullback3(F.values, XE, XE, _phi2(s))
    S = _swap_last(T)
    return _tensor([a - b for a, b in zip(T, S)], F.tol)


def proj_f11(F: FTensor, s: APCMS) -> FTensor:
    """eta(X) F(xi, phi^2 Y, phi^2 Z)."""
    h = _phi2(s)
    return _tensor(K.pullback3(F.values, _xi_eta(s), h, h), F.tol)


def _w2_from_block(Q, s: APCMS, scale, tol):
    """T[i,j,k] = scale * (-eta_j Q[i,k] + eta_k Q[i,j])."""
    eta = s.eta_vec
    out = [0] * DIM ** 3
    for i in range(DIM):
        for j in range(DIM):
            for k in range(DIM):
                v = 0
                if eta[j]:
                    q = Q[i * DIM + k]
                    if q:
                        v = v - eta[j] * q
                if eta[k]:
                    q = Q[i * DIM + j]
                    if q:
                        v = v + eta[k] * q
                if v:
                    out[i * 49 + j * 7 + k] = v * scale
    return _tensor(out, tol)


def _horizontal_blocks(F: FTensor, s: APCMS):
    """(F(phi^2 X, phi^2 Z, xi), F(phi X, phi Z, xi)) as 7x7 matrices."""
    h = _phi2(s)
    p = _phi(s)
    U2 = _contract_last(K.pullback3(F.values, h, h, None), s.xi)
    U1 = _contract_last(K.pullback3(F.values, p, p, None), s.xi)
    return U2, U1


def proj_w2(F: FTensor, s: APCMS) -> FTensor:
    """-eta(Y) F(phi^2 X, phi^2 Z, xi) + eta(Z) F(phi^2 X, phi^2 Y, xi)."""
    U2, _ = _horizontal_blocks(F, s)
    return _w2_from_block(U2, s, 1, F.tol)


def _transpose(Q):
    return [Q[k * DIM + i] for i in range(DIM) for k in range(DIM)]


def _w2_pattern(U2, U1, s, pattern, tol):
    A = [a - b for a, b in zip(U2, U1)]
    S = [a + b for a, b in zip(U2, U1)]
    if pattern == "F5+F8":
        At = _transpose(A)
        Q = [a + b for a, b in zip(A, At)]
    elif pattern == "F6+F7":
        At = _transpose(A)
        Q = [a - b for a, b in zip(A, At)]
    elif pattern == "F10":
        St = _transpose(S)
        Q = [a + b for a, b in zip(S, St)]
    elif pattern == "F9":
        St = _transpose(S)
        Q = [a - b for a, b in zip(S, St)]
    else:
        raise ValueError(f"unknown pattern {pattern!r}")
    return _w2_from_block(Q, s, _quarter(Q), tol)


def _quarter(sample):
    return 0.25 if any(isinstance(x, float) for x in sample) else Fraction(1, 4)


def proj_combo(F: FTensor, s: APCMS, pattern: str) -> FTensor:
    """One of F1+F2, F3+F4, F5+F8, F6+F7, F9, F10 from the full tensor."""
    if pattern in W1_PATTERNS:
        h = _phi2(s)
        p = _phi(s)
        hhh = K.pullback3(F.values, h, h, h)
        php = K.pullback3(F.values, p, h, p)
        half = _half(hhh)
        if pattern == "F3+F4":
            vals = [(a + b) * half if (a or b) else 0 for a, b in zip(hhh, php)]
        else:
            vals = [(a - b) * half if (a or b) else 0 for a, b in zip(hhh, php)]
        return _tensor(vals, F.tol)
    if pattern in W2_PATTERNS:
        U2, U1 = _horizontal_blocks(F, s)
        return _w2_pattern(U2, U1, s, pattern, F.tol)
    raise ValueError(f"unknown pattern {pattern!r}; expected one of {PATTERNS}")


def _half(sample):
    return 0.5 if any(isinstance(x, float) for x in sample) else Fraction(1, 2)


def proj_f5_f8_split(F: FTensor, s: APCMS, combo: FTensor | None = None):
    """Split C = F5+F8 into its trace part F5 and the remainder F8.

    F5(X,Y,Z) = theta(xi)/6 {eta(Y) g(phi X, phi Z) - eta(Z) g(phi X, phi Y)},
    theta(Z) = sum g^{ij} C(e_i, e_j, Z).
    """
    C = combo if combo is not None else proj_combo(F, s, "F5+F8")
    ginv = s.g.inverse()
    theta = [0] * DIM
    for m in range(DIM):
        acc = 0
        for i in range(DIM):
            for j in range(DIM):
                gij = ginv[i * DIM + j]
                if gij:
                    c = C.values[i * 49 + j * 7 + m]
                    if c:
                        acc = acc + gij * c
        theta[m] = acc
    theta_xi = sum((theta[m] * s.xi[m] for m in range(DIM) if s.xi[m] and theta[m]), 0)
    if is_zero(theta_xi, F.tol):
        F5 = FTensor((0,) * DIM ** 3, F.tol)
    else:
        phis = [s.phi(Vector.basis(i + 1)) for i in range(DIM)]
        G = [s.g(phis[i], phis[k]) for i in range(DIM) for k in range(DIM)]
        F5 = _w2_from_block(G, s, div(-theta_xi, 6), F.tol)
    return F5, C - F5


def reconstruct(F: FTensor, s: APCMS) -> FTensor:
    """Sum of all implemented pieces; equals F on a structure satisfying the axioms."""
    total = proj_f11(F, s) + proj_f12(F, s)
    for p in PATTERNS:
        total = total + proj_combo(F, s, p)
    return total


# -- reduced route ----------------------------------------------------------

def _reduced_blocks(s: APCMS, conn: Connection):
    """(-phi3(nabla_X xi, Z, xi), g43(nabla_{phi X} xi, Z)) as 7x7 matrices."""
    T = s.bundle.phi_tensor
    g43 = s.bundle.g
    dxi = nabla_xi_columns(s, conn)
    R1 = [0] * (DIM * DIM)
    R2 = [0] * (DIM * DIM)
    for i in range(DIM):
        d = dxi[i]
        if not d.is_zero():
            M = K.contract_first(T, d)  # M[k*7+m] = phi(d, e_k, e_m)
            for k in range(DIM):
                acc = 0
                for m in range(DIM):
                    if s.xi[m] and M[k * DIM + m]:
                        acc = acc + M[k * DIM + m] * s.xi[m]
                R1[i * DIM + k] = -acc if acc else 0
        dphi = nabla_vec(conn, s.phi(Vector.basis(i + 1)), s.xi)
        if not dphi.is_zero():
            low = g43.lower(dphi)
            for k in range(DIM):
                R2[i * DIM + k] = low[k]
    return R1, R2


def reduced_combo(s: APCMS, conn: Connection, pattern: str, tol: float = 1e-9) -> FTensor:
    """W2 combinations through the split-G2 identities (connection only)."""
    if pattern not in W2_PATTERNS:
        raise ValueError(f"reduced route covers {W2_PATTERNS}, not {pattern!r}")
    R1, R2 = _reduced_blocks(s, conn)
    return _w2_pattern(R1, R2, s, pattern, tol)


def reduced_w2(s: APCMS, conn: Connection, tol: float = 1e-9) -> FTensor:
    R1, _ = _reduced_blocks(s, conn)
    return _w2_from_block(R1, s, 1, tol)


def reduced_f12(s: APCMS, conn: Connection, tol: float = 1e-9) -> FTensor:
    """eta(X){-eta(Y) phi3(nabla_xi xi, xi, Z) + eta(Z) phi3(nabla_xi xi, xi, Y)}."""
    T = s.bundle.phi_tensor
    w = nabla_vec(conn, s.xi, s.xi)
    eta = s.eta_vec
    out = [0] * DIM ** 3
    if w.is_zero():
        return FTensor(out, tol)
    M = K.contract_first(T, w)
    v = [sum((s.xi[a] * M[a * DIM + c] for a in range(DIM) if s.xi[a] and M[a * DIM + c]), 0)
         for c in range(DIM)]  # v[c] = phi3(w, xi, e_c)
    for i in range(DIM):
        if not eta[i]:
            continue
        for j in range(DIM):
            for k in range(DIM):
                t = 0
                if eta[j] and v[k]:
                    t = t - eta[j] * v[k]
                if eta[k] and v[j]:
                    t = t + eta[k] * v[j]
                if t:
                    out[i * 49 + j * 7 + k] = eta[i] * t
    return FTensor(out, tol)


def reduced_f11(s: APCMS, conn: Connection, tol: float = 1e-9) -> FTensor:
    """eta(X){-(nabla_xi phi3)(xi, Y', Z') - phi3(nabla_xi xi, Y', Z')}, Y' = Y - eta(Y) xi."""
    T = s.bundle.phi_tensor
    dphi = nabla_form(conn, s.xi, s.bundle.phi)
    two = interior(s.xi, dphi)
    w = nabla_vec(conn, s.xi, s.xi)
    eta = s.eta_vec
    hs = [Vector.basis(i + 1) - s.xi * eta[i] for i in range(DIM)]
    out = [0] * DIM ** 3
    Bm = [0] * (DIM * DIM)
    for j in range(DIM):
        for k in range(j + 1, DIM):
            v = -eval_form(two, (hs[j], hs[k])) - K.eval3(T, w, hs[j], hs[k])
            Bm[j * DIM + k] = v
            Bm[k * DIM + j] = -v
    for i in range(DIM):
        if eta[i]:
            for r in range(DIM * DIM):
                if Bm[r]:
                    out[i * 49 + r] = eta[i] * Bm[r]
    return FTensor(out, tol)


# -- normality and paracontact ---------------------------------------------

def normality_vector_form(s: APCMS, conn: Connection):
    """V(X, Z) = nabla_X Z - P(xi, nabla_X P(xi, Z)) + nabla_{P(xi,X)} P(xi, Z) - P(xi, nabla_{P(xi,X)} Z).

    Returned as ``V[i][k]`` over basis vectors (0-based).
    """
    b = s.bundle
    xi = s.xi
    e = [Vector.basis(i + 1) for i in range(DIM)]
    pz = [b.cross(xi, z) for z in e]
    out = []
    for X in e:
        px = b.cross(xi, X)
        row = []
        for k, Z in enumerate(e):
            v = (nabla_vec(conn, X, Z)
                 - b.cross(xi, nabla_vec(conn, X, pz[k]))
                 + nabla_vec(conn, px, pz[k])
                 - b.cross(xi, nabla_vec(conn, px, Z)))
            row.append(v)
        out.append(row)
    return out


def normality_defect(s: APCMS, conn: Connection, F: FTensor | None = None, cross_check: bool = True) -> FTensor:
    """F(X, Y, phi Z) + F(phi X, Y, Z) + F(X, phi Y, eta(Z) xi).

    When the structure passes the axiom audit the tensor is re-derived as
    g43(V(X, Z), Y) from :func:`normality_vector_form`; disagreement raises
    :class:`ConsistencyError`.
    """
    if F is None:
        F = f_tensor(s, conn)
    p = _phi(s)
    a = K.pullback3(F.values, None, None, p)
    b = K.pullback3(F.values, p, None, None)
    c = K.pullback3(F.values, None, p, _xi_eta(s))
    N = FTensor([x + y + z for x, y, z in zip(a, b, c)], F.tol)
    if cross_check and axiom_audit(s, F.tol).ok:
        V = normality_vector_form(s, conn)
        g43 = s.bundle.g
        for i in range(DIM):
            for k in range(DIM):
                low = g43.lower(V[i][k])
                for j in range(DIM):
                    if not is_zero(N.values[i * 49 + j * 7 + k] - low[j], F.tol):
                        raise ConsistencyError(
                            f"normality tensor and vector form disagree at ({i + 1},{j + 1},{k + 1})")
    return N


def paracontact_defect(s: APCMS, conn: Connection):
    """Flat 7x7: 2 g43(P(xi, f_i), f_j) - [g43(nabla_{f_i} xi, f_j) - g43(nabla_{f_j} xi, f_i)]."""
    g43 = s.bundle.g
    dxi = [g43.lower(c) for c in nabla_xi_columns(s, conn)]
    pl = [g43.lower(s.bundle.cross(s.xi, Vector.basis(i + 1))) for i in range(DIM)]
    return [2 * pl[i][j] - (dxi[i][j] - dxi[j][i]) for i in range(DIM) for j in range(DIM)]


def _first_nonzero_matrix(M, tol):
    for r, v in enumerate(M):
        if not is_zero(v, tol):
            return (r // DIM + 1, r % DIM + 1), v
    return None


# -- report -----------------------------------------------------------------

@dataclass
class ClassReport:
    granularity: str
    route: str
    groups: dict                      # group name -> bool
    witnesses: dict                   # name -> ((i, j, k), value)
    checks: dict                      # normal, paracontact, killing, xi_parallel -> bool
    fine: dict = field(default_factory=dict)   # F5 / F8 presence in fine mode
    notes: list = field(default_factory=list)
    reconstruction_ok: bool | None = None

    @property
    def present(self) -> frozenset:
        """Class indices with a nonzero projection (both members for unsplit pairs)."""
        out = set()
        for name, on in self.groups.items():
            if not on:
                continue
            if name == "F5+F8" and self.fine:
                out.update(k for k, key in ((5, "F5"), (8, "F8")) if self.fine.get(key))
            else:
                out.update(MEMBERS[name])
        return frozenset(out)

    @property
    def absent(self) -> frozenset:
        return frozenset(range(1, 13)) - self.present

    def render(self) -> str:
        lines = [f"granularity: {self.granularity}   route: {self.route}"]
        for name in GROUPS:
            flag = "present" if self.groups[name] else "absent"
            line = f"  {name:6s} {flag}"
            if name in self.witnesses:
                trip, val = self.witnesses[name]
                line += f"   witness F({','.join(map(str, trip))}) = {format_scalar(val)}"
            lines.append(line)
        for key in ("F5", "F8"):
            if key in self.fine:
                w = self.witnesses.get(key)
                extra = f"   witness F({','.join(map(str, w[0]))}) = {format_scalar(w[1])}" if w else ""
                lines.append(f"  {key:6s} {'present' if self.fine[key] else 'absent'}{extra}")
        cls = ", ".join(f"G{k}" for k in sorted(self.present)) or "none"
        lines.append(f"classes: {cls}")
        lines.append("checks: " + ", ".join(f"{k}={'yes' if v else 'no'}" for k, v in self.checks.items()))
        if self.reconstruction_ok is not None:
            lines.append(f"reconstruction: {'exact' if self.reconstruction_ok else 'FAILS'}")
        lines.extend(f"note: {n}" for n in self.notes)
        return "\n".join(lines)

    def to_dict(self):
        return {
            "granularity": self.granularity,
            "route": self.route,
            "groups": dict(self.groups),
            "fine": dict(self.fine),
            "present": sorted(self.present),
            "absent": sorted(self.absent),
            "witnesses": {k: {"triple": list(t), "value": format_scalar(v)} for k, (t, v) in self.witnesses.items()},
            "checks": dict(self.checks),
            "reconstruction_ok": self.reconstruction_ok,
            "notes": list(self.notes),
        }


def classify(s: APCMS, conn: Connection, granularity: str = "grouped", route: str = "tensor",
             F: FTensor | None = None) -> ClassReport:
    """Evaluate every implemented projection and the structural checks."""
    if granularity not in ("grouped", "fine"):
        raise ValueError("granularity must be 'grouped' or 'fine'")
    if route not in ("tensor", "reduced"):
        raise ValueError("route must be 'tensor' or 'reduced'")
    if F is None:
        F = f_tensor(s, conn)
    tol = F.tol
    pieces = {}
    for p in W1_PATTERNS:
        pieces[p] = proj_combo(F, s, p)
    if route == "tensor":
        for p in W2_PATTERNS:
            pieces[p] = proj_combo(F, s, p)
        pieces["F11"] = proj_f11(F, s)
        pieces["F12"] = proj_f12(F, s)
    else:
        R1, R2 = _reduced_blocks(s, conn)
        for p in W2_PATTERNS:
            pieces[p] = _w2_pattern(R1, R2, s, p, tol)
        pieces["F11"] = reduced_f11(s, conn, tol)
        pieces["F12"] = reduced_f12(s, conn, tol)

    groups, witnesses = {}, {}
    for name in GROUPS:
        w = pieces[name].witness()
        groups[name] = w is not None
        if w is not None:
            witnesses[name] = w

    notes = []
    audit = axiom_audit(s, tol)
    if not audit.ok:
        notes.append("structure fails the axiom audit (" + ", ".join(audit.failed())
                     + "); projections are not complementary")
    fine = {}
    if granularity == "fine":
        F5, F8 = proj_f5_f8_split(F, s, pieces["F5+F8"])
        for key, T in (("F5", F5), ("F8", F8)):
            w = T.witness()
            fine[key] = w is not None
            if w is not None:
                witnesses[key] = w
        notes.append("F1/F2, F3/F4, F6/F7 are reported as unsplit pairs: no individual projection formula is available")

    total = FTensor.zero()
    for name in GROUPS:
        total = total + pieces[name]
    recon = (total - F).is_zero()

    dxi = nabla_xi_columns(s, conn)
    N = normality_defect(s, conn, F, cross_check=audit.ok)
    checks = {
        "normal": N.is_zero(),
        "paracontact": _first_nonzero_matrix(paracontact_defect(s, conn), tol) is None,
        "killing": is_killing(s, conn, tol),
        "xi_parallel": all(v.is_zero() for v in dxi),
    }
    return ClassReport(granularity, route, groups, witnesses, checks, fine, notes, recon)
