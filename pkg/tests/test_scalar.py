import pickle
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from ddbar.scalar import (
    DivisionByZero,
    ExpressionError,
    Scalar,
    UnboundParameter,
    evaluate,
    format_scalar,
    free_params,
    parse_assignment,
    parse_expr,
    parse_scalar,
)

fractions = st.fractions(min_value=-20, max_value=20, max_denominator=12)
scalars = st.builds(Scalar, fractions, fractions)
nonzero = scalars.filter(bool)


@given(scalars, scalars, scalars)
def test_ring_axioms(a, b, c):
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a + b == b + a
    assert a * b == b * a
    assert a - a == Scalar(0)


@given(nonzero)
def test_inverse(a):
    assert a * a.inverse() == Scalar(1)
    assert Scalar(1) / a == a.inverse()


@given(scalars, scalars)
def test_conj_is_automorphism(a, b):
    assert (a * b).conj() == a.conj() * b.conj()
    assert (a + b).conj() == a.conj() + b.conj()
    assert a.conj().conj() == a


@given(scalars)
def test_lowest_terms(a):
    for part in (a.re, a.im):
        assert isinstance(part, Fraction)
        assert part.denominator > 0


@given(scalars)
def test_format_roundtrip(a):
    assert parse_scalar(format_scalar(a)) == a


@given(scalars)
def test_pickle(a):
    assert pickle.loads(pickle.dumps(a)) == a


def test_examples():
    assert evaluate("1/2 + 1/3*i") == Scalar(Fraction(1, 2), Fraction(1, 3))
    assert evaluate("D", {"D": Scalar(Fraction(1, 5))}) == Scalar(Fraction(1, 5))
    assert evaluate("conj(t)/(1 - t*conj(t))", {"t": Scalar(Fraction(1, 2))}) == Scalar(Fraction(2, 3))
    assert Scalar(0, 1).conj() == Scalar(0, -1)
    assert Scalar(Fraction(3, 4)).is_real()
    assert not Scalar(0, 1).is_real()


@given(scalars)
def test_conj_conj_expression(t):
    e1 = parse_expr("conj(conj(t*t - 2*i*t))")
    e2 = parse_expr("t*t - 2*i*t")
    a = {"t": t}
    assert evaluate(e1, a) == evaluate(e2, a)


@given(scalars)
def test_evaluation_is_pure(t):
    e = parse_expr("(1 + conj(t))*t/2")
    assert evaluate(e, {"t": t}) == evaluate(e, {"t": t})


def test_unbound_parameter():
    with pytest.raises(UnboundParameter) as info:
        evaluate("D + 1")
    assert str(info.value) == "UnboundParameter D"


def test_division_by_zero_on_unit_circle():
    with pytest.raises(DivisionByZero):
        evaluate("1/(1 - t*conj(t))", {"t": Scalar(0, 1)})


@pytest.mark.parametrize("text", ["1 +", "(1", "2 $ 3", "conj 1", "1/"])
def test_syntax_errors_carry_column(text):
    with pytest.raises(ExpressionError) as info:
        parse_expr(text)
    assert info.value.column is not None


def test_forms_rejected_in_scalar_context():
    with pytest.raises(ExpressionError):
        parse_expr("e(1,2)")


def test_free_params():
    assert free_params(parse_expr("conj(t)/(1 - t*conj(t)) + D*i")) == {"t", "D"}


def test_parse_assignment():
    a = parse_assignment("D=1/8, t=1/2+i/3")
    assert a == {"D": Scalar(Fraction(1, 8)), "t": Scalar(Fraction(1, 2), Fraction(1, 3))}
    assert parse_assignment("") == {}
    with pytest.raises(ExpressionError):
        parse_assignment("i=2")
