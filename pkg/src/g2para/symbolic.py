"""Polynomials in the components a1..a7 of xi, and the nonexistence deduction chains.

:class:`Poly` behaves like a scalar, so the numeric machinery (cross product,
F tensor, normality tensor) runs unchanged on a symbolic xi = sum a_i f_i.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from importlib import resources

from .apcms import APCMS, FTensor, _f_direct, _f_via_phi
from .errors import ChainBrokenError, ValidationError
from .exterior import DIM, Metric, Vector, covector_form
from .g2star import G2Bundle
from .liealg import Connection, LieAlgebra, levi_civita, nabla_vec
from .scalar import div, format_scalar

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib

__all__ = [
    "ChainReport",
    "Poly",
    "PolyVector",
    "StepResult",
    "deduction_chain",
    "load_scenario",
    "nabla_xi_xi_poly",
    "quadric",
    "scenario_names",
    "symbolic_structure",
    "symbolic_xi",
]

_ZERO_EXP = (0,) * DIM


class Poly:
    """Sparse polynomial in a1..a7 with exact coefficients."""

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        clean = {}
        for e, c in (terms or {}).items():
            if c:
                clean[tuple(e)] = c
        self.terms = clean

    @classmethod
    def var(cls, k: int) -> "Poly":
        """a_k, 1-based."""
        if not 1 <= k <= DIM:
            raise ValueError(f"variable a{k} out of range")
        e = [0] * DIM
        e[k - 1] = 1
        return cls({tuple(e): 1})

    @classmethod
    def const(cls, c) -> "Poly":
        return cls({_ZERO_EXP: c})

    @staticmethod
    def _lift(x):
        return x if isinstance(x, Poly) else Poly.const(x)

    def __add__(self, other):
        other = self._lift(other)
        out = dict(self.terms)
        for e, c in other.terms.items():
            out[e] = out.get(e, 0) + c
        return Poly(out)

    __radd__ = __add__

    def __neg__(self):
        return Poly({e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        if not isinstance(other, Poly):
            if not other:
                return Poly()
            return Poly({e: c * other for e, c in self.terms.items()})
        out = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                out[e] = out.get(e, 0) + c1 * c2
        return Poly(out)

    __rmul__ = __mul__

    def __truediv__(self, c):
        if isinstance(c, Poly):
            if not c.is_constant():
                raise TypeError("division by a non-constant polynomial")
            c = c.constant_value()
        if isinstance(c, int):
            c = Fraction(c)
        return Poly({e: v / c for e, v in self.terms.items()})

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative power")
        out = Poly.const(1)
        for _ in range(n):
            out = out * self
        return out

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if not isinstance(other, Poly):
            other = Poly.const(other)
        return not (self - other).terms

    def __hash__(self):
        if self.is_constant():
            return hash(self.constant_value())
        return hash(frozenset(self.terms.items()))

    def is_constant(self) -> bool:
        return all(e == _ZERO_EXP for e in self.terms)

    def constant_value(self):
        return self.terms.get(_ZERO_EXP, 0)

    def degree(self) -> int:
        return max((sum(e) for e in self.terms), default=-1)

    def variables(self):
        return sorted({i + 1 for e in self.terms for i, p in enumerate(e) if p})

    def subs(self, values) -> "Poly":
        """Substitute ``{k: value}`` (1-based variables); values may be scalars or polynomials."""
        out = Poly()
        for e, c in self.terms.items():
            term = Poly.const(c)
            rest = list(e)
            for k, v in values.items():
                p = rest[k - 1]
                if p:
                    rest[k - 1] = 0
                    term = term * (v ** p if isinstance(v, Poly) else Poly.const(v ** p))
            out = out + term * Poly({tuple(rest): 1})
        return out

    def evaluate(self, point):
        """Value at ``point`` (7 scalars)."""
        total = 0
        for e, c in self.terms.items():
            t = c
            for x, p in zip(point, e):
                if p:
                    t = t * x ** p
            total = total + t
        return total

    def render(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for e in sorted(self.terms, key=lambda e: (-sum(e), [-p for p in e])):
            c = self.terms[e]
            mono = "*".join(f"a{i + 1}" + (f"^{p}" if p > 1 else "") for i, p in enumerate(e) if p)
            cs = format_scalar(c)
            if not mono:
                parts.append(cs)
            elif cs == "1":
                parts.append(mono)
            elif cs == "-1":
                parts.append("-" + mono)
            elif any(ch in cs[1:] for ch in "+-") or "sqrt" in cs:
                parts.append(f"({cs})*{mono}")
            else:
                parts.append(f"{cs}*{mono}")
        return " + ".join(parts).replace("+ -", "- ")

    __str__ = render

    def __repr__(self):
        return f"Poly({self.render()})"


class PolyVector(tuple):
    """Seven polynomial components in the basis f1..f7."""

    def __new__(cls, comps=None):
        comps = [Poly()] * DIM if comps is None else [Poly._lift(c) for c in comps]
        if len(comps) != DIM:
            raise ValueError("PolyVector needs 7 components")
        return super().__new__(cls, comps)

    def __add__(self, other):
        return PolyVector(a + b for a, b in zip(self, other))

    def __sub__(self, other):
        return PolyVector(a - b for a, b in zip(self, other))

    def __neg__(self):
        return PolyVector(-a for a in self)

    def __mul__(self, c):
        return PolyVector(a * c for a in self)

    __rmul__ = __mul__

    def __eq__(self, other):
        return all(Poly._lift(a) == Poly._lift(b) for a, b in zip(self, other))

    def __hash__(self):
        return hash(tuple(self))

    def is_zero(self) -> bool:
        return not any(self)

    def subs(self, values) -> "PolyVector":
        return PolyVector(a.subs(values) for a in self)

    def evaluate(self, point) -> Vector:
        return Vector(a.evaluate(point) for a in self)

    def render(self) -> str:
        parts = [f"({c.render()})f{i + 1}" for i, c in enumerate(self) if c]
        return " + ".join(parts) if parts else "0"

    def __repr__(self):
        return f"PolyVector({self.render()})"


def symbolic_xi() -> Vector:
    return Vector(Poly.var(k) for k in range(1, DIM + 1))


def quadric(g: Metric) -> Poly:
    """g(xi, xi) + 1 for symbolic xi."""
    return g(symbolic_xi(), symbolic_xi()) + 1


def nabla_xi_xi_poly(L, g: Metric | None = None) -> PolyVector:
    """nabla_xi xi for symbolic xi; ``L`` may be a Connection (then ``g`` is unused)."""
    conn = L if isinstance(L, Connection) else levi_civita(L, g)
    xi = symbolic_xi()
    return PolyVector(nabla_vec(conn, xi, xi))


def symbolic_structure(bundle: G2Bundle, xi=None) -> APCMS:
    """APCMS with symbolic xi; the unit-norm condition is left to the quadric."""
    xi = symbolic_xi() if xi is None else xi
    g = -bundle.g
    cols = [bundle.cross(xi, Vector.basis(j + 1)) for j in range(DIM)]
    phi_endo = tuple(cols[j][a] for a in range(DIM) for j in range(DIM))
    eta = covector_form(g.lower(xi))
    return APCMS(xi, eta, phi_endo, g, bundle)


# -- constraint state -------------------------------------------------------

@dataclass(frozen=True)
class _State:
    zeros: frozenset = frozenset()          # variables known to vanish
    products: frozenset = frozenset()       # monomials (exponent tuples) known to vanish
    relation: tuple | None = None           # (k, value): a_k^2 = value from the quadric

    def with_zero(self, k):
        return _State(self.zeros | {k}, self.products, self.relation)

    def describe(self):
        z = ", ".join(f"a{k}=0" for k in sorted(self.zeros))
        return z or "no constraints"


def _divides(m, e):
    return all(a <= b for a, b in zip(m, e))


def _reduce(p: Poly, st: _State) -> Poly:
    out = {}
    for e, c in p.terms.items():
        if any(e[k - 1] for k in st.zeros):
            continue
        if any(_divides(m, e) for m in st.products):
            continue
        if st.relation is not None:
            k, val = st.relation
            pw = e[k - 1]
            if pw >= 2:
                e = list(e)
                e[k - 1] = pw % 2
                e = tuple(e)
                c = c * val ** (pw // 2)
        out[e] = out.get(e, 0) + c
    return Poly(out)


def _quadric_relation(q: Poly, st: _State):
    """If the quadric reduces to c*a_k^2 + d, return (k, -d/c)."""
    r = _reduce(q, _State(st.zeros, st.products, None))
    vs = r.variables()
    if len(vs) != 1:
        return None
    k = vs[0]
    exps = {e[k - 1] for e in r.terms}
    if not exps <= {0, 2}:
        return None
    e2 = [0] * DIM
    e2[k - 1] = 2
    c = r.terms.get(tuple(e2), 0)
    d = r.constant_value()
    if not c:
        return None
    return (k, div(-d, c))


def _monomial_vars(e):
    return tuple(i + 1 for i, p in enumerate(e) if p)


def _conclusions(polys, st: _State):
    """Classify reduced polynomials: vanishing variables, vanishing products, contradiction."""
    zero_vars, prods, contra, residual = set(), set(), None, []
    for p in polys:
        r = _reduce(p, st)
        if not r:
            continue
        if r.is_constant():
            contra = r
            continue
        if len(r.terms) == 1:
            (e,) = r.terms
            vs = _monomial_vars(e)
            if len(vs) == 1:
                zero_vars.add(vs[0])
            else:
                prods.add(vs)
            continue
        residual.append(r)
    prods = {m for m in prods if not any(k in zero_vars for k in m)}
    return zero_vars, prods, contra, residual


def _quadric_impossible(q: Poly, st: _State) -> bool:
    """True when the quadric has no real root under the constraints."""
    r = _reduce(q, _State(st.zeros, st.products, None))
    if r.is_constant():
        return bool(r)
    rel = _quadric_relation(q, st)
    return rel is not None and rel[1] < 0


# -- scenarios --------------------------------------------------------------

def scenario_names():
    root = resources.files("g2para") / "data" / "scenarios"
    return sorted(p.name[:-5] for p in root.iterdir() if p.name.endswith(".toml"))


def load_scenario(name: str) -> dict:
    root = resources.files("g2para") / "data" / "scenarios"
    path = root / f"{name}.toml"
    if not path.is_file():
        raise ValidationError(f"unknown scenario {name!r}; available: {', '.join(scenario_names())}")
    return tomllib.loads(path.read_text())


_E = [Vector.basis(i) for i in range(1, DIM + 1)]


class _Evaluator:
    """Symbolic evaluation of the defining tensors used by the scenarios."""

    def __init__(self, L: LieAlgebra, bundle: G2Bundle):
        self.conn = levi_civita(L, bundle.g)
        self.bundle = bundle
        self.s = symbolic_structure(bundle)
        self._F = None

    @property
    def F(self):
        if self._F is None:
            a = _f_via_phi(self.s, self.conn)
            b = _f_direct(self.s, self.conn)
            if any(x != y for x, y in zip(a, b)):
                raise RuntimeError("symbolic F paths disagree")
            self._F = FTensor(a)
        return self._F

    def polys(self, tensor: str, args):
        return [Poly._lift(p) for p in self._polys(tensor, args)]

    def _polys(self, tensor: str, args):
        s, conn = self.s, self.conn
        if tensor == "nabla_xi_xi":
            return list(nabla_vec(conn, s.xi, s.xi))
        if tensor == "normality":
            X, Y = (_E[a - 1] for a in args[:2])
            zs = [_E[args[2] - 1]] if len(args) > 2 else _E
            F = self.F
            out = []
            for Z in zs:
                out.append(F(X, Y, s.phi(Z)) + F(s.phi(X), Y, Z) + F(X, s.phi(Y), s.xi * s.eta_of(Z)))
            return out
        if tensor == "paracontact":
            X, Y = (_E[a - 1] for a in args[:2])
            g43 = self.bundle.g
            return [2 * g43(self.bundle.cross(s.xi, X), Y)
                    - (g43(nabla_vec(conn, X, s.xi), Y) - g43(nabla_vec(conn, Y, s.xi), X))]
        if tensor == "nabla_phi_xi":
            (k,) = args
            return list(nabla_vec(conn, s.phi(_E[k - 1]), s.xi))
        raise ValidationError(f"unknown scenario tensor {tensor!r}")


@dataclass
class StepResult:
    index: int
    label: str
    polynomials: list
    derived_zero: list
    derived_products: list
    contradiction: bool
    branch: str = ""

    def to_dict(self):
        return {
            "index": self.index,
            "label": self.label,
            "branch": self.branch,
            "polynomials": [p.render() for p in self.polynomials],
            "derived_zero": [f"a{k}" for k in self.derived_zero],
            "derived_products": ["*".join(f"a{k}" for k in m) for m in self.derived_products],
            "contradiction": self.contradiction,
        }


@dataclass
class ChainReport:
    scenario: str
    verified: bool
    steps: list = field(default_factory=list)
    conclusion: str = ""
    broken_step: int | None = None
    broken_label: str | None = None
    message: str = ""
    residual: list = field(default_factory=list)

    def render(self) -> str:
        lines = [f"scenario {self.scenario}: {'verified' if self.verified else 'BROKEN'}"]
        for st in self.steps:
            tag = f" [{st.branch}]" if st.branch else ""
            derived = [f"a{k}=0" for k in st.derived_zero]
            derived += ["*".join(f"a{k}" for k in m) + "=0" for m in st.derived_products]
            if st.contradiction:
                derived.append("contradiction")
            lines.append(f"  step {st.index} {st.label}{tag}: " + (", ".join(derived) or "nothing"))
            shown = [p.render() for p in st.polynomials if p]
            if shown:
                lines.append("      " + "; ".join(shown))
        if self.verified:
            lines.append(f"  conclusion: {self.conclusion}")
        else:
            lines.append(f"  broken at step {self.broken_step} ({self.broken_label}): {self.message}")
            for r in self.residual:
                lines.append(f"      residual: {r.render()}")
        return "\n".join(lines)

    def to_dict(self):
        return {
            "scenario": self.scenario,
            "verified": self.verified,
            "conclusion": self.conclusion,
            "broken_step": self.broken_step,
            "broken_label": self.broken_label,
            "message": self.message,
            "residual": [r.render() for r in self.residual],
            "steps": [s.to_dict() for s in self.steps],
        }


def _parse_var(name):
    name = name.strip()
    if not (name.startswith("a") and name[1:].isdigit()):
        raise ValidationError(f"bad variable name {name!r}")
    return int(name[1:])


def deduction_chain(scenario, L: LieAlgebra, bundle: G2Bundle, raise_on_break: bool = False) -> ChainReport:
    """Replay a scenario's steps symbolically.

    Each step evaluates a tensor on fixed basis arguments with xi = sum a_i f_i,
    reduces the components under the constraints collected so far (vanishing
    variables, vanishing products, and the quadric once it pins a single
    a_k^2), and checks that the declared variables are forced to vanish.
    A product a_i*a_j = 0 involving an expected variable splits the chain:
    the other factor's branch must reach a contradiction on its own.
    After the last step the quadric must be unsatisfiable.
    """
    data = load_scenario(scenario) if isinstance(scenario, str) else scenario
    name = data.get("name", scenario if isinstance(scenario, str) else "custom")
    steps = data.get("steps", [])
    ev = _Evaluator(L, bundle)
    q = quadric(bundle.g)
    report = ChainReport(name, True)

    def broken(idx, label, msg, residual):
        report.verified = False
        report.broken_step, report.broken_label, report.message = idx, label, msg
        report.residual = residual
        if raise_on_break:
            raise ChainBrokenError(idx, label, msg, residual)
        return report

    # depth-first over branches: (state, first step index, branch tag)
    stack = [(_State(), 0, "")]
    closed_by_contradiction = []
    while stack:
        st, start, tag = stack.pop()
        contradiction = False
        for idx in range(start, len(steps)):
            step = steps[idx]
            label = step.get("label", f"step {idx}")
            rel = _quadric_relation(q, st)
            if rel is not None:
                st = _State(st.zeros, st.products, rel)
            raw = ev.polys(step["tensor"], step.get("args", []))
            zv, prods, contra, residual = _conclusions(raw, st)
            shown = [_reduce(p, _State(st.zeros, st.products, None)) for p in raw]
            report.steps.append(StepResult(idx, label, shown, sorted(zv), sorted(prods), contra is not None, tag))
            if contra is not None:
                contradiction = True
                break
            expected = [_parse_var(v) for v in step.get("expect", [])]
            expect_contra = step.get("expect_contradiction", False)
            new_st = st
            for k in zv:
                new_st = new_st.with_zero(k)
            for m in prods:
                e = tuple(1 if (i + 1) in m else 0 for i in range(DIM))
                new_st = _State(new_st.zeros, new_st.products | {e}, new_st.relation)
            for k in expected:
                if k in new_st.zeros:
                    continue
                split = next((m for m in prods if k in m), None)
                if split is None:
                    split = next((_monomial_vars(m) for m in new_st.products
                                  if m[k - 1] and not any(m[z - 1] for z in new_st.zeros)), None)
                if split is None:
                    return broken(idx, label, f"a{k}=0 is not implied under {st.describe()}",
                                  residual or [p for p in shown if p])
                for other in split:
                    if other != k and other not in new_st.zeros:
                        stack.append((new_st.with_zero(other), idx + 1,
                                      (tag + "," if tag else "") + f"a{other}=0"))
                new_st = new_st.with_zero(k)
            if expect_contra:
                return broken(idx, label, "expected a contradiction", residual or [p for p in shown if p])
            st = new_st
        if contradiction or _quadric_impossible(q, st):
            closed_by_contradiction.append(tag or "main")
            continue
        rq = _reduce(q, _State(st.zeros, st.products, None))
        msg = (f"constraints {st.describe()} leave the quadric satisfiable: {rq.render()} = 0"
               + (f" (branch {tag})" if tag else ""))
        return broken(len(steps), "final", msg, [rq])
    report.conclusion = "no admissible xi: " + ", ".join(
        f"branch {b} contradicts" for b in closed_by_contradiction)
    return report
