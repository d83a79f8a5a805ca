import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from strategies import forms, polys
from twistcoh.errors import ParseError
from twistcoh.forms import DifferentialForm, wedge
from twistcoh.parser import (
    format_expression,
    format_function,
    parse_expression,
    parse_form,
    parse_function,
)
from twistcoh.ring import Scalar, TrigPoly


def dt(dim, j):
    return DifferentialForm.dt(dim, j)


class TestExamples:
    def test_trig_functions(self):
        assert parse_function("2 + cos(t1)", 1) == TrigPoly.cos((1,)) + 2
        assert parse_function("sin(2*t1 - t2)", 2) == TrigPoly.sin((2, -1))
        assert parse_function("exp(i*(t1 + t2))", 2) == TrigPoly.monomial((1, 1))
        assert parse_function("3/4", 1) == TrigPoly.constant(1, Scalar(0.75))
        assert parse_function("0.5*i", 1) == TrigPoly.constant(1, Scalar(0, 0.5))

    def test_powers(self):
        c = TrigPoly.cos((1,))
        assert parse_function("cos(t1)^2", 1) == c * c
        assert parse_function("cos(t1)**3", 1) == c * c * c
        assert parse_function("cos(t1)^0", 1) == TrigPoly.constant(1, 1)

    def test_forms(self):
        omega = parse_form("(2 + cos(t2))*dt1 ∧ dt2", 2, 2)
        expected = wedge(dt(2, 1), dt(2, 2)).scale(TrigPoly.cos((0, 1)) + 2)
        assert omega == expected
        assert parse_form("dt1 & dt2", 2) == wedge(dt(2, 1), dt(2, 2))
        assert parse_form("dt2 ∧ dt1", 2) == -wedge(dt(2, 1), dt(2, 2))
        assert parse_form("-dt1 + 2*dt2", 2, 1) == dt(2, 2).scale(Scalar(2)) - dt(2, 1)
        assert parse_form("0*dt1", 2, 1) == DifferentialForm.zero(2, 1)

    def test_expression_returns_function_for_zero_forms(self):
        assert isinstance(parse_expression("sin(t1)", 1), TrigPoly)
        assert isinstance(parse_expression("sin(t1)*dt1", 1), DifferentialForm)


@pytest.mark.parametrize("src, dim, line, column", [
    ("cos(t1", 1, 1, 7),
    ("1 +\n  t1", 1, 2, 3),
    ("cos(t3)", 2, 1, 5),
    ("dt3", 2, 1, 1),
    ("1 / 2", 1, 1, 3),
    ("cos(t1 + 1)", 1, 1, 1),
    ("cos(t1/2)", 1, None, None),
    ("exp(t1)", 1, None, None),
    ("cos(t1)^-1", 1, None, None),
    ("cos(t1)^2^2", 1, None, None),
    ("dt1 * dt2", 2, None, None),
    ("1 + dt1", 2, None, None),
    ("(dt1 + dt2) ∧ dt1 ∧ dt2", 2, None, None),
    ("dt1 ∧ dt2", 1, None, None),
    ("dt1^2", 1, None, None),
    ("$", 1, 1, 1),
])
def test_errors_carry_positions(src, dim, line, column):
    with pytest.raises(ParseError) as info:
        parse_expression(src, dim)
    err = info.value
    assert err.line >= 1 and err.column >= 1
    if line is not None:
        assert (err.line, err.column) == (line, column)
    assert f"line {err.line}" in str(err)


def test_degree_is_checked():
    with pytest.raises(ParseError):
        parse_form("dt1", 2, 2)
    with pytest.raises(ParseError):
        parse_function("dt1", 1)


@given(polys(2, 3, 4))
@settings(max_examples=100, deadline=None)
def test_function_round_trip(p):
    assert parse_function(format_function(p), 2) == p


@given(st.integers(0, 3).flatmap(lambda k: forms(3, k)))
@settings(max_examples=100, deadline=None)
def test_form_round_trip(phi):
    text = format_expression(phi)
    back = parse_expression(text, 3)
    if phi.degree == 0:
        assert back == phi.as_function()
    else:
        assert back == phi
