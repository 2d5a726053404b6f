from fractions import Fraction

import pytest
from hypothesis import given, settings

from lodeinv.diffpoly import coef, param_var, spell
from lodeinv.errors import ParseError, UnknownVariableError
from lodeinv.ratfunc import RatFunc
from lodeinv.syntax import parse, parse_rational, parse_var, to_latex, to_text

from conftest import nonzero_polys, polys


def test_derivative_aliases():
    assert parse("a3''") == parse("a3^(2)") == parse("D(a3,2)") == coef(3, 2)
    assert parse("a3′") == coef(3, 1)


def test_power_versus_derivative():
    assert parse("a3^2") == coef(3) * coef(3)
    assert parse("(a3)^(2)") == coef(3) * coef(3)
    assert parse("a3^(3)") == coef(3, 3)


def test_known_parameters():
    assert param_var("k2") in parse("k2 + 2*k3*x").variables()


def test_unknown_variable():
    with pytest.raises(UnknownVariableError):
        parse("a3 + q7")


def test_error_position():
    with pytest.raises(ParseError) as err:
        parse("a3 +* a4")
    assert err.value.position == 4
    assert "offset 4" in str(err.value)


def test_division_by_polynomial_needs_rational_parser():
    with pytest.raises(ParseError):
        parse("a4/a3")
    assert parse_rational("a4/a3") == RatFunc(coef(4), coef(3))


def test_rational_coefficients():
    assert parse("3/4*a3").terms[0][1] == Fraction(3, 4)
    assert parse("−a3 + a4") == parse("a4 - a3")


def test_var_spelling_round_trip():
    for text in ["a3", "a4'", "a5''", "a3^(4)", "abar3'", "xi''", "eta", "k1"]:
        assert spell(parse_var(text)) == text


def test_canonical_text():
    assert to_text(parse("-a4^2 + 3*a5*a3")) == "3*a3*a5 - a4^2"
    assert to_text(parse_rational("a4^3/(27*a3^8)")) == "a4^3/(27*a3^8)"


def test_latex_spelling():
    assert to_latex(coef(3, 1)) == "a_3'"
    assert to_latex(coef(3, 2)) == "a_3''"
    assert to_latex(coef(4, 3)) == "a_4^{(3)}"
    assert r"\frac" in to_latex(parse_rational("a4/a3"))


@settings(max_examples=200, deadline=None)
@given(polys())
def test_parse_print_inverse(p):
    assert parse(to_text(p)) == p
    assert to_text(parse(to_text(p))) == to_text(p)


@settings(max_examples=100, deadline=None)
@given(polys(max_terms=3), nonzero_polys(max_terms=3))
def test_rational_print_parse(a, b):
    r = RatFunc(a, b)
    assert parse_rational(to_text(r)) == r
