"""Structural identities checked over generated structures."""

import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from g2para.apcms import _f_direct, _f_via_phi, axiom_audit, f_tensor, induce, is_killing, sample_unit_timelike
from g2para.classify import (
    classify,
    normality_defect,
    paracontact_defect,
    proj_combo,
    proj_f11,
    proj_f12,
    proj_f5_f8_split,
    proj_w2,
    reconstruct,
)
from g2para.exterior import DIM, Vector
from g2para.liealg import nabla_vec
from g2para.scalar import is_zero
from structures import abelian_structure, heisenberg_structure, parallel_structures, sec4_normalized, structures

e = Vector.basis
COMBOS = ("F1+F2", "F3+F4", "F5+F8", "F6+F7", "F9", "F10")
seeds = st.integers(0, 10 ** 6)


@pytest.fixture(scope="module")
def exact_batch():
    special = [abelian_structure(), heisenberg_structure(-2), heisenberg_structure(1)]
    return structures(20, seed=11) + parallel_structures(4, seed=11) + special


@pytest.fixture(scope="module")
def float_batch():
    L, b, c = sec4_normalized()
    rng = random.Random(2024)
    out = []
    for _ in range(100):
        xi = sample_unit_timelike(b.g, e(2), rng, as_float=True)
        out.append((induce(b, xi, rescale=True), c))
    return out


def test_reconstruction(exact_batch):
    assert len(exact_batch) >= 20
    for s, c in exact_batch:
        F = f_tensor(s, c)
        assert reconstruct(F, s) == F


def test_f_paths_agree_on_all_triples(exact_batch):
    for s, c in exact_batch:
        a, b = _f_via_phi(s, c), _f_direct(s, c)
        assert len(a) == DIM ** 3
        assert all(x == y for x, y in zip(a, b))


@settings(max_examples=10, deadline=None)
@given(seeds)
def test_f12_iff_geodesic(seed):
    for s, c in structures(2, seed=seed) + parallel_structures(1, seed=seed):
        geodesic = nabla_vec(c, s.xi, s.xi).is_zero()
        assert proj_f12(f_tensor(s, c), s).is_zero() == geodesic


def test_parallel_kills_w2():
    for s, c in parallel_structures(6, seed=3):
        assert proj_w2(f_tensor(s, c), s).is_zero()


def test_w2_zero_forces_nabla_phi_xi(exact_batch):
    """F^W2 = 0 implies nabla_{phi X} xi = 0; checked as the contrapositive on every structure."""
    for s, c in exact_batch:
        moves = any(not nabla_vec(c, s.phi(e(i)), s.xi).is_zero() for i in range(1, DIM + 1))
        if proj_w2(f_tensor(s, c), s).is_zero():
            assert not moves
        if moves:
            assert not proj_w2(f_tensor(s, c), s).is_zero()


def test_abelian_degenerate():
    s, c = abelian_structure()
    F = f_tensor(s, c)
    assert F.is_zero()
    rep = classify(s, c, granularity="fine")
    assert rep.present == frozenset()
    assert rep.checks["normal"] and rep.checks["xi_parallel"]


@settings(max_examples=5, deadline=None)
@given(seeds)
def test_projections_idempotent(seed):
    s, c = structures(2, seed=seed)[1]
    F = f_tensor(s, c)
    for p in COMBOS:
        P = proj_combo(F, s, p)
        assert proj_combo(P, s, p) == P
    for proj in (proj_f11, proj_f12, proj_w2):
        P = proj(F, s)
        assert proj(P, s) == P


def test_projections_disjoint(exact_batch):
    s, c = exact_batch[1]
    F = f_tensor(s, c)
    P = proj_combo(F, s, "F1+F2")
    for p in COMBOS[1:]:
        assert proj_combo(P, s, p).is_zero()
    assert proj_f11(P, s).is_zero() and proj_f12(P, s).is_zero()


def test_killing_consequences(s_normalized):
    cases = [s_normalized] + parallel_structures(3, seed=5)
    for s, c in cases:
        assert is_killing(s, c)
        F = f_tensor(s, c)
        for p in ("F6+F7", "F10"):
            assert proj_combo(F, s, p).is_zero()
        assert proj_f12(F, s).is_zero()
        assert proj_f5_f8_split(F, s)[0].is_zero()


def test_audit_normalized_float(float_batch):
    for s, _ in float_batch[:50]:
        rep = axiom_audit(s, tol=1e-9)
        assert rep.ok, rep


@settings(max_examples=20, deadline=None)
@given(seeds)
def test_audit_normalized_exact(seed):
    L, b, c = sec4_normalized()
    xi = sample_unit_timelike(b.g, e(2), random.Random(seed))
    assert axiom_audit(induce(b, xi)).ok


def test_audit_flags_literal(s_literal):
    rep = axiom_audit(s_literal[0])
    assert not rep.ok
    assert rep["phi_squared"].witness == (1,)


def test_example_never_special(float_batch):
    """Numerical corroboration of the nonexistence results on the example algebra."""
    for s, c in float_batch:
        F = f_tensor(s, c)
        assert not normality_defect(s, c, F, cross_check=False).is_zero()
        assert not all(is_zero(v) for v in paracontact_defect(s, c))
        assert not proj_w2(F, s).is_zero()


def test_normal_or_paracontact_geodesic(exact_batch):
    hits = 0
    for s, c in exact_batch:
        normal = normality_defect(s, c).is_zero()
        para = all(is_zero(v) for v in paracontact_defect(s, c))
        if normal or para:
            hits += 1
            assert nabla_vec(c, s.xi, s.xi).is_zero()
    assert hits >= 3


def test_heisenberg_paracontact():
    s, c = heisenberg_structure(-2)
    assert not any(paracontact_defect(s, c))
    assert normality_defect(s, c).is_zero()
    assert is_killing(s, c)
    assert classify(s, c).present == {5, 8}
    s, c = heisenberg_structure(1)
    assert any(paracontact_defect(s, c))
