import pytest
from hypothesis import given, settings

from lodeinv.errors import ParseError
from lodeinv.halphen import chi, fundamental_set, phi_seq
from lodeinv.liesym import Invariant
from lodeinv.ratfunc import RatFunc
from lodeinv.serialize import (
    dumps, expr_from_json, invariant_from_json, invariant_to_json, loads, poly_from_json, poly_to_json,
)
from lodeinv.syntax import parse

from conftest import nonzero_polys, polys


def round_trip(inv):
    first = dumps(invariant_to_json(inv))
    second = dumps(invariant_to_json(invariant_from_json(loads(first))))
    return first, second


def test_poly_schema():
    obj = poly_to_json(parse("3/2*a3*a3'^2 - a4"))
    assert obj == {"terms": [{"coeff": ["3", "2"], "vars": [["a3", 1], ["a3'", 2]]},
                             {"coeff": ["-1", "1"], "vars": [["a4", 1]]}]}


def test_big_integers_survive():
    p = parse("123456789012345678901234567890*a3")
    assert poly_from_json(loads(dumps(poly_to_json(p)))) == p


def test_catalog_records_byte_stable(catalog):
    for inv in catalog.values():
        first, second = round_trip(inv)
        assert first == second


def test_power_product_records(catalog):
    invs = fundamental_set(2, seed=0).invariants + [chi(catalog["S2"], catalog["S0"])]
    invs += phi_seq(catalog["S3"], 2, catalog["S0"])
    for inv in invs:
        first, second = round_trip(inv)
        assert first == second
        assert invariant_from_json(loads(first)).expr is not None


def test_rational_expression():
    r = RatFunc(parse("a4^3"), parse("27*a3^8"))
    back = expr_from_json(loads(dumps({"num": poly_to_json(r.num), "den": poly_to_json(r.den)})))
    assert back == r


def test_malformed_input():
    with pytest.raises(ParseError):
        loads("{not json")
    with pytest.raises(ParseError):
        poly_from_json({"terms": [{"coeff": ["1", "0"], "vars": []}]})
    with pytest.raises(ParseError):
        invariant_from_json({"name": "x"})


@settings(max_examples=150, deadline=None)
@given(polys())
def test_poly_round_trip(p):
    text = dumps(poly_to_json(p))
    assert poly_from_json(loads(text)) == p
    assert dumps(poly_to_json(poly_from_json(loads(text)))) == text


@settings(max_examples=50, deadline=None)
@given(polys(max_terms=3), nonzero_polys(max_terms=3))
def test_absolute_record_round_trip(a, b):
    inv = Invariant.absolute("q", RatFunc(a, b), "test")
    first, second = round_trip(inv)
    assert first == second
