"""Lossless JSON encoding of polynomials, rational functions and invariant records.

Coefficients are ``[numerator, denominator]`` pairs of decimal strings, so
arbitrarily large integers survive any JSON reader.  Output is emitted with a
fixed key order and separators, which makes emit -> load -> emit byte-stable.
"""

from __future__ import annotations

import json
from fractions import Fraction
from typing import Any, Dict

from .diffpoly import DiffPoly, spell
from .errors import ParseError
from .halphen import PowerProduct
from .liesym import Invariant
from .ratfunc import RatFunc
from .syntax import parse_var

__all__ = ["poly_to_json", "poly_from_json", "expr_to_json", "expr_from_json", "invariant_to_json",
           "invariant_from_json", "dumps", "loads", "fraction_pair", "pair_fraction"]


def fraction_pair(c) -> list:
    c = Fraction(c)
    return [str(c.numerator), str(c.denominator)]


def pair_fraction(pair) -> Fraction:
    try:
        n, d = pair
        return Fraction(int(n), int(d))
    except (TypeError, ValueError, ZeroDivisionError) as exc:
        raise ParseError(f"bad coefficient {pair!r}") from exc


def poly_to_json(p: DiffPoly) -> Dict[str, Any]:
    return {"terms": [{"coeff": fraction_pair(c), "vars": [[spell(v), e] for v, e in m]}
                      for m, c in p.terms]}


def poly_from_json(obj) -> DiffPoly:
    try:
        terms = obj["terms"]
    except (TypeError, KeyError) as exc:
        raise ParseError("polynomial object needs a 'terms' list") from exc
    out = {}
    for t in terms:
        mono = {}
        for name, e in t["vars"]:
            if not isinstance(e, int) or e < 1:
                raise ParseError(f"bad exponent {e!r} for {name}")
            v = parse_var(name)
            mono[v] = mono.get(v, 0) + e
        key = tuple(sorted(mono.items()))
        out[key] = out.get(key, 0) + pair_fraction(t["coeff"])
    return DiffPoly(out)


def expr_to_json(e) -> Dict[str, Any]:
    if isinstance(e, DiffPoly):
        return {"poly": poly_to_json(e)}
    if isinstance(e, RatFunc):
        return {"num": poly_to_json(e.num), "den": poly_to_json(e.den)}
    if isinstance(e, PowerProduct):
        return {"factors": [{"base": invariant_to_json(inv), "exponent": fraction_pair(x)}
                            for inv, x in e.factors]}
    raise TypeError(f"cannot serialise {type(e).__name__}")


def expr_from_json(obj):
    if "poly" in obj:
        return poly_from_json(obj["poly"])
    if "num" in obj:
        return RatFunc._raw(poly_from_json(obj["num"]), poly_from_json(obj["den"]))
    if "factors" in obj:
        return PowerProduct(tuple((invariant_from_json(f["base"]), pair_fraction(f["exponent"]))
                                  for f in obj["factors"]))
    raise ParseError("unrecognised expression object")


def invariant_to_json(inv: Invariant) -> Dict[str, Any]:
    return {
        "name": inv.name,
        "kind": inv.kind,
        "index": fraction_pair(inv.index),
        "weight": inv.weight,
        "order": inv.order,
        "provenance": inv.provenance,
        "expr": expr_to_json(inv.expr),
    }


def invariant_from_json(obj) -> Invariant:
    try:
        return Invariant(obj["name"], expr_from_json(obj["expr"]), obj["kind"], pair_fraction(obj["index"]),
                         obj["weight"], obj["order"], obj["provenance"])
    except KeyError as exc:
        raise ParseError(f"invariant record lacks {exc.args[0]!r}") from exc


def dumps(obj, indent=None) -> str:
    return json.dumps(obj, indent=indent, ensure_ascii=False, separators=(",", ": ") if indent else (",", ":"))


def loads(text: str):
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, exc.pos, text) from exc
