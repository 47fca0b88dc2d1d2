import random
from fractions import Fraction

import pytest
from hypothesis import HealthCheck, given, settings
from hypothesis import strategies as st

from g2para.errors import MalformedScalarError, MixedRadicandError
from g2para.scalar import (
    QuadExt,
    div,
    exact,
    format_scalar,
    invert,
    is_zero,
    normalize,
    nth_root_exact,
    parse_scalar,
)

small = st.integers(-40, 40)
pos = st.integers(1, 12)


def quads(Q):
    return st.builds(lambda p, q, d: Q(p, q, d, 2), small, small, pos)


class TestNormalize:
    def test_reduces_fractions(self):
        assert normalize((2, 4, 0, 1)) == exact(Fraction(1, 2))

    def test_radical_part(self):
        q = normalize((0, 1, 2, 2))
        assert (q.rat, q.rad) == (0, 1)

    def test_one_over_sqrt2_is_its_own_form(self):
        q = normalize((0, 1, 1, 2))
        assert q == invert(QuadExt(0, 1, 1, 2))

    def test_zero_denominator(self):
        with pytest.raises(MalformedScalarError):
            normalize((1, 0, 0, 1))


class TestArithmetic:
    def test_invert_examples(self, Q):
        assert Q(1, 0, 1, 2).inverse() == Q(1, 0, 1, 2)
        assert Q(0, 1, 1, 2).inverse() == Q(0, 1, 2, 2)
        assert Q(1, 1, 1, 2).inverse() == Q(-1, 1, 1, 2)

    def test_invert_zero(self, Q):
        with pytest.raises(ZeroDivisionError):
            Q(0, 0, 1, 2).inverse()

    def test_mixed_radicands(self, Q):
        with pytest.raises(MixedRadicandError):
            Q(0, 1, 1, 2) + Q(0, 1, 1, 3)

    def test_fraction_interop(self, Q):
        q = Q(1, 1, 1, 2)
        third = Fraction(1, 3)
        assert q * third == third * q == Q(1, 1, 3, 2)
        assert third - q == Q(-2, -3, 3, 2)

    def test_unknown_type_is_not_implemented(self, Q):
        with pytest.raises(TypeError):
            Q(1, 0, 1, 2) + "x"

    def test_float_mix_degrades_to_float(self, Q):
        assert isinstance(Q(1, 1, 1, 2) * 0.5, float)

    def test_ordering(self, Q):
        assert Q(0, 1, 1, 2) > Q(7, 0, 5, 2)  # sqrt 2 > 1.4
        assert Q(3, -2, 1, 2) > 0  # 3 - 2 sqrt 2 ~ 0.17

    @settings(max_examples=200, deadline=None, suppress_health_check=[HealthCheck.function_scoped_fixture])
    @given(st.data())
    def test_field_axioms(self, Q, data):
        a, b, c = (data.draw(quads(Q)) for _ in range(3))
        assert (a + b) + c == a + (b + c)
        assert (a * b) * c == a * (b * c)
        assert a * (b + c) == a * b + a * c
        if a:
            assert a * a.inverse() == 1

    @settings(max_examples=100, deadline=None, suppress_health_check=[HealthCheck.function_scoped_fixture])
    @given(st.data())
    def test_normalize_idempotent(self, Q, data):
        q = data.draw(quads(Q))
        assert normalize(normalize(q)) == normalize(q)


def test_div_stays_exact():
    assert div(1, 2) == Fraction(1, 2)
    assert isinstance(div(3, 6), Fraction)
    assert div(QuadExt(0, 1, 1), 2) == QuadExt(0, 1, 2)
    assert isinstance(div(1.0, 2), float)


class TestNthRoot:
    def test_trivial(self):
        assert nth_root_exact(exact(1), 9) == 1

    def test_ninth_root_of_square(self):
        q = QuadExt(0, 1, 32)  # 1/(16 sqrt 2)
        assert nth_root_exact(q * q, 9) == Fraction(1, 2)
        assert nth_root_exact(q, 9) ** 9 == q

    def test_absent(self):
        assert nth_root_exact(exact(3), 2) is None

    def test_negative_odd(self):
        assert nth_root_exact(exact(-8), 3) == -2

    def test_pure_radical(self):
        assert nth_root_exact(exact(2), 2) == QuadExt(0, 1, 1)


class TestLiterals:
    @pytest.mark.parametrize("text, value", [
        ("3", QuadExt(3)),
        ("-3/4", QuadExt(-3, 0, 4)),
        ("2*sqrt(2)", QuadExt(0, 2, 1)),
        ("1/2*sqrt(2)", QuadExt(0, 1, 2)),
        (" 1 - 1/2 * sqrt( 2 ) ", QuadExt(2, -1, 2)),
        ("sqrt(2)", QuadExt(0, 1, 1)),
    ])
    def test_parse(self, text, value):
        assert parse_scalar(text) == value

    @pytest.mark.parametrize("text", ["", "1/0", "2sqrt(2)", "*sqrt(2)", "abc", "1//2", "1+"])
    def test_malformed(self, text):
        with pytest.raises(MalformedScalarError):
            parse_scalar(text)

    def test_mixed_radicand_rejected(self):
        with pytest.raises(MixedRadicandError):
            parse_scalar("sqrt(3)", radicand=2)

    @settings(max_examples=100, deadline=None)
    @given(small, small, pos)
    def test_format_round_trip(self, p, q, d):
        x = QuadExt(p, q, d)
        assert parse_scalar(format_scalar(x)) == x

    def test_whitespace_insensitive(self):
        assert parse_scalar(" 1 2 / 4 ") == 3

    def test_float_mode(self):
        assert parse_scalar("1/2*sqrt(2)", mode="float") == pytest.approx(2 ** -0.5)


def test_float_backend_agrees():
    """1000 random expressions of depth <= 8 evaluated exactly and in floats."""
    rng = random.Random(7)

    def build(depth):
        if depth == 0 or rng.random() < 0.25:
            x = QuadExt(rng.randint(-9, 9), rng.randint(-9, 9), rng.randint(1, 9))
            return x, float(x)
        (ea, fa), (eb, fb) = build(depth - 1), build(depth - 1)
        op = rng.choice("+-*/")
        if op == "/" and (not eb or abs(fb) < 1e-3):
            op = "*"
        if op == "+":
            return ea + eb, fa + fb
        if op == "-":
            return ea - eb, fa - fb
        if op == "*":
            return ea * eb, fa * fb
        return ea / eb, fa / fb

    for _ in range(1000):
        e, f = build(rng.randint(1, 8))
        assert float(e) == pytest.approx(f, rel=1e-12, abs=1e-12)


def test_is_zero_modes():
    assert is_zero(QuadExt(0))
    assert not is_zero(QuadExt(0, 1, 10 ** 12))
    assert is_zero(1e-10)
    assert not is_zero(1e-8)
