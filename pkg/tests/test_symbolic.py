import random
from fractions import Fraction

import pytest
import sympy as sp

import oracle
from g2para.errors import ChainBrokenError, ValidationError
from g2para.exterior import DIM, Vector
from g2para.liealg import LieAlgebra, nabla_vec
from g2para.scalar import QuadExt
from g2para.symbolic import (
    Poly,
    PolyVector,
    deduction_chain,
    nabla_xi_xi_poly,
    quadric,
    scenario_names,
)

a = [None] + [Poly.var(k) for k in range(1, DIM + 1)]


def poly_to_sympy(p):
    out = 0
    for e, c in p.terms.items():
        t = oracle.to_sympy(c)
        for x, k in zip(oracle.A, e):
            t *= x ** k
        out += t
    return sp.expand(out)


def gamma_of(conn):
    return [[sp.Matrix([oracle.to_sympy(x) for x in conn(i + 1, j + 1)]) for j in range(DIM)] for i in range(DIM)]


class TestPoly:
    def test_arithmetic(self):
        p = (a[1] + a[2]) * (a[1] - a[2])
        assert p == a[1] ** 2 - a[2] ** 2
        assert (p - p) == 0
        assert not Poly()
        assert (a[3] * 2 / 4).render() == "1/2*a3"

    def test_render(self):
        p = a[1] * a[7] * 2 - a[2] ** 2 + 1
        assert p.render() == "2*a1*a7 - a2^2 + 1"
        assert Poly().render() == "0"
        assert (a[1] * QuadExt(0, 1, 1)).render() == "(1*sqrt(2))*a1"

    def test_degree_and_variables(self):
        p = a[1] * a[7] + a[3] ** 3
        assert p.degree() == 3
        assert p.variables() == [1, 3, 7]
        assert Poly.const(5).degree() == 0

    def test_subs(self):
        p = a[2] ** 2 * 2 + a[5]
        assert p.subs({2: 0}) == a[5]
        assert p.subs({2: a[1] + 1}) == (a[1] + 1) ** 2 * 2 + a[5]

    def test_division_by_nonconstant(self):
        with pytest.raises(TypeError):
            a[1] / a[2]

    def test_var_range(self):
        with pytest.raises(ValueError):
            Poly.var(8)

    def test_polyvector(self):
        v = PolyVector([a[1], 0, 0, 0, 0, 0, a[2]])
        assert (v - v).is_zero()
        assert v.render() == "(a1)f1 + (a2)f7"
        assert v.evaluate([1, 3, 0, 0, 0, 0, 0]) == Vector([1, 0, 0, 0, 0, 0, 3])


class TestQuadric:
    def test_literal_expansion(self, sec4_literal):
        _, b, _ = sec4_literal
        q = quadric(b.g)
        assert q == a[1] * a[7] * 2 - a[2] ** 2 * 2 + a[3] * a[6] * 4 - a[4] * a[5] * 4 + 1

    def test_matches_oracle(self, sec4_literal):
        _, b, _ = sec4_literal
        g = sp.Matrix(7, 7, [oracle.to_sympy(x) for x in b.g.matrix])
        assert poly_to_sympy(quadric(b.g)) == oracle.quadric(g)

    def test_normalized_halves(self, sec4_literal, sec4_normalized):
        q_lit, q_nrm = quadric(sec4_literal[1].g), quadric(sec4_normalized[1].g)
        assert (q_lit - 1) == (q_nrm - 1) * 2

    def test_root_on_f2(self, sec4_literal, xi_literal):
        assert quadric(sec4_literal[1].g).evaluate(xi_literal) == 0


class TestNablaXiXi:
    def test_literal_expansion(self, sec4_literal):
        L, b, _ = sec4_literal
        v = nabla_xi_xi_poly(L, b.g)
        assert v[0] == a[2] * a[5] * 2 - a[3] * a[7]
        assert v[2] == -a[4] * a[7]
        assert v[3] == a[2] * a[7]
        assert v[4] == -a[6] * a[7]
        assert v[5] == a[7] ** 2 / 2
        assert v[1] == 0 and v[6] == 0

    def test_matches_oracle(self, sec4_literal):
        L, b, conn = sec4_literal
        ref = oracle.nabla_xi_xi(gamma_of(conn))
        mine = nabla_xi_xi_poly(conn)
        assert [poly_to_sympy(p) for p in mine] == [sp.expand(x) for x in ref]
        assert mine == nabla_xi_xi_poly(L, b.g)

    def test_a7_zero(self, sec4_literal):
        L, b, _ = sec4_literal
        v = nabla_xi_xi_poly(L, b.g).subs({7: 0})
        assert v == PolyVector([a[2] * a[5] * 2, 0, 0, 0, 0, 0, 0])

    def test_abelian(self, sec4_literal):
        assert nabla_xi_xi_poly(LieAlgebra({}), sec4_literal[1].g).is_zero()

    def test_numeric_substitution(self, sec4_literal):
        L, b, conn = sec4_literal
        v = nabla_xi_xi_poly(L, b.g)
        rng = random.Random(1)
        for _ in range(25):
            x = Vector(Fraction(rng.randint(-5, 5), rng.randint(1, 3)) for _ in range(DIM))
            assert v.evaluate(x) == nabla_vec(conn, x, x)


class TestChains:
    def test_names(self):
        assert set(scenario_names()) == {"normal", "normal_corrected", "paracontact", "w2", "w2_corrected"}

    @pytest.mark.parametrize("name", ["paracontact", "normal_corrected", "w2_corrected"])
    def test_verified(self, sec4_literal, name):
        L, b, _ = sec4_literal
        rep = deduction_chain(name, L, b)
        assert rep.verified, rep.render()
        assert rep.conclusion.startswith("no admissible xi")
        assert "verified" in rep.render()

    def test_normal_as_printed_breaks(self, sec4_literal):
        L, b, _ = sec4_literal
        rep = deduction_chain("normal", L, b)
        assert not rep.verified
        assert rep.broken_step == 3
        assert rep.broken_label == "X=f5, Y=f7"
        # every residual vanishes on a2^2 = 1/2, i.e. on xi = f2 / sqrt 2
        x = [0, QuadExt(0, 1, 2), 0, 0, 0, 0, 0]
        for r in rep.residual:
            assert r.subs({k: 1 for k in (1, 3, 4, 5, 6, 7)}).evaluate(x) == 0

    def test_w2_as_printed_breaks(self, sec4_literal):
        L, b, _ = sec4_literal
        rep = deduction_chain("w2", L, b)
        assert not rep.verified
        assert rep.broken_step == 2

    def test_raise_on_break(self, sec4_literal):
        L, b, _ = sec4_literal
        with pytest.raises(ChainBrokenError) as info:
            deduction_chain("normal", L, b, raise_on_break=True)
        assert info.value.step_index == 3

    def test_unknown(self, sec4_literal):
        L, b, _ = sec4_literal
        with pytest.raises(ValidationError):
            deduction_chain("nope", L, b)

    def test_inline_scenario(self, sec4_literal):
        L, b, _ = sec4_literal
        rep = deduction_chain({"name": "tiny", "steps": [{"label": "s", "tensor": "nabla_xi_xi", "expect": ["a7"]}]}, L, b)
        assert not rep.verified
        assert rep.broken_label == "final"

    def test_report_dict(self, sec4_literal):
        L, b, _ = sec4_literal
        d = deduction_chain("paracontact", L, b).to_dict()
        assert d["verified"] and d["steps"]
        assert {"index", "label", "polynomials", "derived_zero"} <= set(d["steps"][0])
