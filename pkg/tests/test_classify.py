import json

import pytest

from g2para.apcms import axiom_audit, f_tensor, is_killing
from g2para.classify import (
    GROUPS,
    classify,
    normality_defect,
    normality_vector_form,
    paracontact_defect,
    proj_combo,
    proj_f11,
    proj_f12,
    proj_f5_f8_split,
    proj_w2,
    reconstruct,
    reduced_combo,
    reduced_f11,
    reduced_f12,
)
from g2para.exterior import Vector, interior
from g2para.liealg import Connection, nabla_form, nabla_vec
from g2para.scalar import QuadExt
from structures import abelian_structure, parallel_structures, structures

e = Vector.basis
SQRT2 = QuadExt(0, 1, 1)


def printed_connection(conn):
    """The connection with nabla_{f5} f2 removed, i.e. only the nine entries listed in the example."""
    gamma = [list(row) for row in conn.gamma]
    gamma[4][1] = Vector.zero()
    return Connection(gamma)


class TestExampleLiteral:
    def test_reduced_w2_values(self, s_literal):
        s, c = s_literal
        assert reduced_combo(s, c, "F5+F8").at(7, 2, 5) * 4 == SQRT2
        for p in ("F6+F7", "F9", "F10"):
            assert reduced_combo(s, c, p).is_zero(), p

    def test_reduced_f11_f12(self, s_literal):
        s, c = s_literal
        assert reduced_f11(s, c).is_zero()
        assert reduced_f12(s, c).is_zero()

    def test_tensor_route_f11_f12(self, s_literal):
        s, c = s_literal
        F = f_tensor(s, c)
        assert proj_f11(F, s).is_zero()
        assert proj_f12(F, s).is_zero()

    def test_horizontal_values(self, s_literal):
        s, c = s_literal
        F = f_tensor(s, c)
        assert proj_combo(F, s, "F1+F2").at(7, 7, 3) == QuadExt(0, -7, 2048)
        assert proj_combo(F, s, "F3+F4").at(7, 3, 7) == QuadExt(0, -9, 2048)
        assert proj_combo(F, s, "F3+F4").at(7, 4, 6) == 0

    def test_w2_witness_direction(self, s_literal):
        s, c = s_literal
        assert nabla_vec(c, s.phi(e(7)), s.xi) == e(4) * QuadExt(-1, 0, 8)
        assert not proj_w2(f_tensor(s, c), s).is_zero()

    def test_reconstruction_fails_off_axioms(self, s_literal):
        rep = classify(*s_literal)
        assert rep.reconstruction_ok is False
        assert any("axiom audit" in n for n in rep.notes)

    def test_printed_table_reproduces_printed_values(self, s_literal):
        """Dropping the torsion-forced entry gives 1/sqrt2 and +1/sqrt2 at (f7, f2, f5)."""
        s, c = s_literal
        p = printed_connection(c)
        assert reduced_combo(s, p, "F5+F8").at(7, 2, 5) * 4 == QuadExt(0, 1, 2)
        assert reduced_combo(s, p, "F6+F7").at(7, 2, 5) * 4 == QuadExt(0, 1, 2)


class TestExampleNormalized:
    def test_report(self, s_normalized):
        rep = classify(*s_normalized)
        assert rep.reconstruction_ok
        on = {g for g, v in rep.groups.items() if v}
        assert on == {"F3+F4", "F5+F8"}
        assert rep.witnesses["F3+F4"] == ((7, 3, 7), -1)
        assert rep.checks == {"normal": False, "paracontact": False, "killing": True, "xi_parallel": False}

    def test_fine_split(self, s_normalized):
        rep = classify(*s_normalized, granularity="fine")
        assert rep.fine == {"F5": False, "F8": True}
        assert rep.present == {3, 4, 8}

    def test_routes_agree(self, s_normalized):
        a = classify(*s_normalized, route="tensor")
        b = classify(*s_normalized, route="reduced")
        assert a.groups == b.groups

    def test_witnesses_reevaluate(self, s_normalized):
        s, c = s_normalized
        F = f_tensor(s, c)
        rep = classify(s, c, F=F)
        for name, (trip, val) in rep.witnesses.items():
            assert proj_combo(F, s, name).at(*trip) == val

    def test_json_render_agree(self, s_normalized):
        rep = classify(*s_normalized, granularity="fine")
        d = json.loads(json.dumps(rep.to_dict()))
        text = rep.render()
        rendered = {line.split()[0] for line in text.splitlines() if "witness" in line}
        assert rendered == set(d["witnesses"])
        assert "classes: " + ", ".join(f"G{k}" for k in d["present"]) in text


class TestProjections:
    def test_unknown_pattern(self, s_normalized):
        s, c = s_normalized
        with pytest.raises(ValueError):
            proj_combo(f_tensor(s, c), s, "F2+F7")

    def test_abelian_everything_zero(self):
        s, c = abelian_structure()
        F = f_tensor(s, c)
        for p in ("F1+F2", "F3+F4", "F5+F8", "F6+F7", "F9", "F10"):
            assert proj_combo(F, s, p).is_zero()
        assert proj_f11(F, s).is_zero() and proj_f12(F, s).is_zero() and proj_w2(F, s).is_zero()
        f5, f8 = proj_f5_f8_split(F, s)
        assert f5.is_zero() and f8.is_zero()
        rep = classify(s, c)
        assert rep.present == frozenset()
        assert rep.checks["normal"]

    def test_f12_witness(self):
        for s, c in structures(6, seed=9):
            nxx = nabla_vec(c, s.xi, s.xi)
            if nxx.is_zero():
                continue
            F12 = proj_f12(f_tensor(s, c), s)
            assert not F12.is_zero()
            w = s.phi(nxx)
            assert F12(s.xi, w, s.xi) == s.g(w, w)

    def test_split_resums(self, s_normalized):
        s, c = s_normalized
        F = f_tensor(s, c)
        f5, f8 = proj_f5_f8_split(F, s)
        assert f5 + f8 == proj_combo(F, s, "F5+F8")

    def test_killing_kills_f5(self, s_normalized):
        for s, c in parallel_structures(2) + [s_normalized]:
            assert is_killing(s, c)
            f5, _ = proj_f5_f8_split(f_tensor(s, c), s)
            assert f5.is_zero()

    def test_killing_f11_criterion(self, s_normalized):
        """For Killing xi: F11 = 0 iff xi -| nabla_xi phi = 0."""
        cases = [s_normalized] + parallel_structures(3, seed=4)
        for s, c in cases:
            assert is_killing(s, c)
            lhs = proj_f11(f_tensor(s, c), s).is_zero()
            rhs = interior(s.xi, nabla_form(c, s.xi, s.bundle.phi)).is_zero()
            assert lhs == rhs

    def test_parallel_classes(self):
        for s, c in parallel_structures(4, seed=2):
            rep = classify(s, c)
            assert rep.checks["xi_parallel"]
            assert rep.present <= {1, 2, 3, 4, 11}
            assert proj_w2(f_tensor(s, c), s).is_zero()

    def test_reconstruct_matches(self, s_normalized):
        s, c = s_normalized
        F = f_tensor(s, c)
        assert reconstruct(F, s) == F


class TestNormality:
    def test_abelian_normal(self):
        s, c = abelian_structure()
        assert normality_defect(s, c).is_zero()

    def test_example_not_normal(self, s_literal, s_normalized):
        assert not normality_defect(*s_literal).is_zero()
        assert not normality_defect(*s_normalized).is_zero()

    def test_vector_form_agrees(self):
        for s, c in structures(4, seed=3):
            assert axiom_audit(s).ok
            N = normality_defect(s, c)  # cross-checks internally
            V = normality_vector_form(s, c)
            assert N.at(2, 3, 5) == s.bundle.g(V[1][4], e(3))


class TestParacontact:
    def test_standard_abelian(self, standard):
        s, c = abelian_structure()
        D = paracontact_defect(s, c)
        assert D[1 * 7 + 6] == -2

    def test_example_not_paracontact(self, s_literal, s_normalized):
        assert any(paracontact_defect(*s_literal))
        assert any(paracontact_defect(*s_normalized))
