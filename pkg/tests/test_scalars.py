from fractions import Fraction

import gmpy2
import mpmath
import pytest
from hypothesis import given
from hypothesis import strategies as st

from tdpairs.scalars import (
    QQ,
    BackendMismatchError,
    FieldScalar,
    FieldZeroDivisionError,
    PrecisionConfig,
    complex_field,
    field_arith,
    format_scalar,
    is_zero,
    parse_scalar,
    q_bracket,
    scalar,
)

from conftest import S, nonzero_rationals, rationals


def test_worked_arithmetic():
    assert field_arith(S("2/3"), S("1/6"), "add") == S("5/6")
    assert field_arith(S("-9/8"), None, "inv") == S("-8/9")
    assert field_arith(S(2), S(-2), "pow") == S("1/4")


def test_exact_payload_lowest_terms():
    x = scalar(Fraction(6, -4))
    assert x.value == gmpy2.mpq(-3, 2)
    assert gmpy2.denom(x.value) > 0
    assert str(x) == "-3/2"
    assert str(S(5)) == "5"


def test_division_by_zero():
    with pytest.raises(FieldZeroDivisionError):
        S(1) / S(0)
    with pytest.raises(FieldZeroDivisionError):
        S(0).inv()


def test_backend_mismatch():
    F = complex_field(PrecisionConfig())
    with pytest.raises(BackendMismatchError):
        S(1) + FieldScalar(F, 1)


def test_q_bracket_examples():
    assert q_bracket(0, S(2)) == 0
    assert q_bracket(1, S(2)) == 1
    assert q_bracket(3, S(2)) == S("21/4")
    with pytest.raises(ZeroDivisionError):
        q_bracket(2, S(-1))


def test_is_zero_examples():
    assert is_zero(S(0))
    assert not is_zero(scalar(Fraction(1, 10**9)))
    F = complex_field(PrecisionConfig(128))
    tiny = FieldScalar(F, F.ctx.ldexp(1, -200))
    assert is_zero(tiny)
    assert not is_zero(FieldScalar(F, F.ctx.ldexp(1, -60)))


def test_default_tolerance():
    F = complex_field(PrecisionConfig(128))
    assert F.tolerance == mpmath.mpf(2) ** -64
    assert PrecisionConfig(100).tolerance_exponent == -50
    with pytest.raises(ValueError):
        PrecisionConfig(128, 1.5)
    with pytest.raises(ValueError):
        PrecisionConfig(0)


def test_serialization_round_trip():
    for s in ["0", "-7", "11/2", "-1521/16"]:
        assert format_scalar(parse_scalar(s)) == s
    F = complex_field(PrecisionConfig(128))
    z = FieldScalar(F, F.ctx.mpc(1, -2) / 3)
    back = parse_scalar(format_scalar(z), F)
    assert back.close(z)
    assert "*i" in format_scalar(z)
    with pytest.raises(ValueError):
        parse_scalar("1.5", QQ)


@given(nonzero_rationals, nonzero_rationals, rationals)
def test_field_axioms(a, b, c):
    x, y, z = S(a), S(b), S(c)
    assert (x + y) + z == x + (y + z)
    assert (x * y) * z == x * (y * z)
    assert x * (y + z) == x * y + x * z
    assert x * x.inv() == 1
    assert x - x == 0


@given(nonzero_rationals.filter(lambda t: abs(t) != 1), st.integers(0, 20))
def test_q_bracket_identity(qv, n):
    q = S(qv)
    assert q_bracket(n, q) * (q - q.inv()) == q ** n - q ** (-n)
    expected = sum((q ** (n - 1 - 2 * k) for k in range(n)), S(0))
    assert q_bracket(n, q) == expected


@given(nonzero_rationals, nonzero_rationals)
def test_complex_reproduces_exact(a, b):
    F = complex_field(PrecisionConfig(128))
    x, y = S(a), S(b)
    for op in ("add", "sub", "mul", "div"):
        exact = field_arith(x, y, op)
        approx = field_arith(x.lift(F), y.lift(F), op)
        assert approx.close(exact.lift(F))


def test_scalars_are_immutable():
    x = S(3)
    with pytest.raises(AttributeError):
        x.value = 4
