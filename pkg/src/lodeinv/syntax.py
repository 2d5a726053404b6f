"""Expression syntax: parsing, canonical text, and LaTeX.

Grammar (whitespace insignificant)::

    expr   := term (("+" | "-") term)*
    term   := unary (("*" | "/") unary)*
    unary  := ("-" | "+") unary | power
    power  := atom ("^" INT | "^" "(" INT ")")*
    atom   := NUMBER | jet | "D" "(" jet "," INT ")" | "(" expr ")"
    jet    := NAME "'"* ["^(" INT ")"]

``NAME`` is ``x``, ``z``, ``aJ`` (coefficient), ``abarJ`` (coefficient composed
with xi), ``xi``, ``eta`` or a declared parameter name.  Directly after a jet
name, ``^(K)`` is a derivative order; everywhere else ``^`` is a power.
Division is only allowed by constants in :func:`parse`; :func:`parse_rational`
accepts any nonzero divisor and returns a RatFunc.
"""

from __future__ import annotations

import re
from fractions import Fraction
from typing import Iterable, List

from .diffpoly import (
    COEF, COMP, ETA, INDEP, XI, Z, DiffPoly, JetVar, coef_var, comp_var,
    eta_var, param_var, spell, x_var, xi_var, z_var,
)
from .errors import DomainError, ParseError, UnknownVariableError
from .ratfunc import RatFunc

__all__ = ["parse", "parse_rational", "parse_var", "to_text", "to_latex", "DEFAULT_PARAMS"]

DEFAULT_PARAMS = ("k1", "k2", "k3")

_TOKEN = re.compile(r"""
    (?P<ws>\s+)
  | (?P<num>\d+)
  | (?P<name>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<prime>['′])
  | (?P<op>[-+*/^(),−])
""", re.VERBOSE)

_COEF_NAME = re.compile(r"a(\d+)$")
_COMP_NAME = re.compile(r"abar(\d+)$")


class _Tok:
    __slots__ = ("kind", "text", "pos")

    def __init__(self, kind, text, pos):
        self.kind, self.text, self.pos = kind, text, pos

    def __repr__(self):
        return f"{self.kind}:{self.text}@{self.pos}"


def _tokenize(text: str) -> List[_Tok]:
    out = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise ParseError(f"unexpected character {text[pos]!r}", pos, text)
        kind = m.lastgroup
        if kind != "ws":
            t = m.group()
            if t == "−":
                t = "-"
            if kind == "prime":
                t = "'"
            out.append(_Tok(kind, t, pos))
        pos = m.end()
    out.append(_Tok("end", "", len(text)))
    return out


def _base_var(name: str, pos: int, params, permissive: bool) -> JetVar:
    if name == "x":
        return x_var()
    if name == "z":
        return z_var()
    if name == "xi":
        return xi_var(0)
    if name == "eta":
        return eta_var(0)
    m = _COEF_NAME.match(name)
    if m and int(m.group(1)) >= 1:
        return coef_var(int(m.group(1)))
    m = _COMP_NAME.match(name)
    if m and int(m.group(1)) >= 1:
        return comp_var(int(m.group(1)))
    if permissive or name in params:
        return param_var(name)
    raise UnknownVariableError(f"unknown variable {name!r}", pos)


def _shift(v: JetVar, k: int, pos: int) -> JetVar:
    if k == 0:
        return v
    if v.kind in (COEF, COMP, XI, ETA):
        return v._replace(k=v.k + k)
    raise ParseError(f"derivative order on non-jet variable {spell(v)!r}", pos)


class _Parser:
    def __init__(self, text, params, permissive, rational):
        self.text = text
        self.toks = _tokenize(text)
        self.i = 0
        self.params = frozenset(params)
        self.permissive = permissive
        self.rational = rational

    @property
    def tok(self):
        return self.toks[self.i]

    def error(self, msg, tok=None):
        tok = tok or self.tok
        what = "end of input" if tok.kind == "end" else repr(tok.text)
        return ParseError(f"syntax error: {msg}, found {what}", tok.pos, self.text)

    def accept(self, text):
        if self.tok.kind == "op" and self.tok.text == text:
            self.i += 1
            return True
        return False

    def expect(self, text):
        if not self.accept(text):
            raise self.error(f"expected {text!r}")

    def integer(self):
        t = self.tok
        if t.kind != "num":
            raise self.error("expected an integer")
        self.i += 1
        return int(t.text)

    def parse(self):
        value = self.expr()
        if self.tok.kind != "end":
            raise self.error("unexpected token")
        return value

    def expr(self):
        value = self.term()
        while True:
            if self.accept("+"):
                value = value + self.term()
            elif self.accept("-"):
                value = value - self.term()
            else:
                return value

    def term(self):
        value = self.unary()
        while True:
            if self.accept("*"):
                value = value * self.unary()
            elif self.tok.kind == "op" and self.tok.text == "/":
                tok = self.tok
                self.i += 1
                divisor = self.unary()
                value = self.divide(value, divisor, tok)
            else:
                return value

    def divide(self, value, divisor, tok):
        if isinstance(divisor, DiffPoly) and divisor.is_constant():
            c = divisor.constant_value()
            if not c:
                raise ParseError("division by zero", tok.pos, self.text)
            return value * (Fraction(1) / c)
        if not self.rational:
            raise ParseError("division by a non-constant expression", tok.pos, self.text)
        try:
            return RatFunc(value) / divisor if isinstance(value, DiffPoly) else value / divisor
        except DomainError:
            raise ParseError("division by zero", tok.pos, self.text) from None

    def unary(self):
        if self.accept("-"):
            return -self.unary()
        if self.accept("+"):
            return self.unary()
        return self.power()

    def power(self):
        value = self.atom()
        while self.tok.kind == "op" and self.tok.text == "^":
            self.i += 1
            if self.accept("("):
                e = self.integer()
                self.expect(")")
            else:
                e = self.integer()
            value = value ** e
        return value

    def atom(self):
        t = self.tok
        if t.kind == "num":
            self.i += 1
            return DiffPoly.constant(int(t.text))
        if t.kind == "op" and t.text == "(":
            self.i += 1
            value = self.expr()
            self.expect(")")
            return value
        if t.kind == "name":
            if t.text == "D" and self.toks[self.i + 1].text == "(":
                self.i += 2
                v = self.jet()
                self.expect(",")
                k = self.integer()
                self.expect(")")
                return DiffPoly.var(_shift(v, k, t.pos))
            return DiffPoly.var(self.jet())
        raise self.error("expected a number, variable or '('")

    def jet(self):
        t = self.tok
        if t.kind != "name":
            raise self.error("expected a variable")
        self.i += 1
        v = _base_var(t.text, t.pos, self.params, self.permissive)
        k = 0
        while self.tok.kind == "prime":
            self.i += 1
            k += 1
        if (v.kind in (COEF, COMP, XI, ETA) and self.tok.text == "^"
                and self.toks[self.i + 1].text == "("):
            self.i += 2
            k += self.integer()
            self.expect(")")
        return _shift(v, k, t.pos)


def parse(text: str, params: Iterable[str] = DEFAULT_PARAMS) -> DiffPoly:
    """Parse a polynomial expression into canonical form.

    >>> parse("a3''") == parse("a3^(2)") == parse("D(a3,2)")
    True
    """
    return _Parser(text, params, permissive=False, rational=False).parse()


def parse_rational(text: str, params: Iterable[str] = DEFAULT_PARAMS) -> RatFunc:
    value = _Parser(text, params, permissive=False, rational=True).parse()
    return value if isinstance(value, RatFunc) else RatFunc(value)


def parse_var(text: str, permissive: bool = True, params: Iterable[str] = DEFAULT_PARAMS) -> JetVar:
    """Parse a single variable spelling such as ``a3''`` or ``k1``."""
    p = _Parser(text, params, permissive=permissive, rational=False)
    v = p.jet()
    if p.tok.kind != "end":
        raise p.error("unexpected token")
    return v


# -- printing ---------------------------------------------------------------

def _fmt_coeff(c) -> str:
    c = Fraction(c)
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def _poly_text(p: DiffPoly) -> str:
    if p.is_zero():
        return "0"
    parts = []
    for idx, (m, c) in enumerate(p.terms):
        neg = c < 0
        mag = -c if neg else c
        factors = [spell(v) + (f"^{e}" if e > 1 else "") for v, e in m]
        if not factors:
            body = _fmt_coeff(mag)
        elif mag == 1:
            body = "*".join(factors)
        else:
            body = _fmt_coeff(mag) + "*" + "*".join(factors)
        if idx == 0:
            parts.append(("-" if neg else "") + body)
        else:
            parts.append((" - " if neg else " + ") + body)
    return "".join(parts)


def _wrap(s: str, p: DiffPoly, denominator: bool = False) -> str:
    if len(p) != 1 or p.terms[0][1] < 0:
        return f"({s})"
    m, c = p.terms[0]
    if denominator and (len(m) > 1 or (m and c != 1)):
        return f"({s})"
    return s


def to_text(value) -> str:
    if isinstance(value, DiffPoly):
        return _poly_text(value)
    if isinstance(value, RatFunc):
        if value.den == DiffPoly.constant(1):
            return _poly_text(value.num)
        return f"{_wrap(_poly_text(value.num), value.num)}/{_wrap(_poly_text(value.den), value.den, denominator=True)}"
    raise TypeError(f"cannot print {type(value).__name__}")


def _latex_name(base: str) -> str:
    m = re.match(r"([A-Za-z]+?)(\d+)$", base)
    if m:
        return f"{m.group(1)}_{{{m.group(2)}}}"
    return base


def latex_var(v: JetVar) -> str:
    if v.kind == COEF:
        base = f"a_{{{v.j}}}" if v.j > 9 else f"a_{v.j}"
    elif v.kind == COMP:
        base = f"\\bar{{a}}_{{{v.j}}}" if v.j > 9 else f"\\bar{{a}}_{v.j}"
    elif v.kind == XI:
        base = "\\xi"
    elif v.kind == ETA:
        base = "\\eta"
    elif v.kind in (INDEP, Z):
        return v.name
    else:
        return _latex_name(v.name)
    if v.k == 0:
        return base
    if v.k <= 2:
        return base + "'" * v.k
    return f"{base}^{{({v.k})}}"


def _latex_coeff(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"\\frac{{{c.numerator}}}{{{c.denominator}}}"


def _poly_latex(p: DiffPoly) -> str:
    if p.is_zero():
        return "0"
    out = []
    for idx, (m, c) in enumerate(p.terms):
        c = Fraction(c)
        neg = c < 0
        mag = -c if neg else c
        factors = []
        for v, e in m:
            s = latex_var(v)
            if e > 1:
                s = f"{{{s}}}^{{{e}}}" if ("'" in s or "^" in s) else f"{s}^{{{e}}}"
            factors.append(s)
        if not factors:
            body = _latex_coeff(mag)
        elif mag == 1:
            body = " ".join(factors)
        else:
            body = _latex_coeff(mag) + " " + " ".join(factors)
        if idx == 0:
            out.append(("-" if neg else "") + body)
        else:
            out.append((" - " if neg else " + ") + body)
    return "".join(out)


def to_latex(value) -> str:
    if isinstance(value, DiffPoly):
        return _poly_latex(value)
    if isinstance(value, RatFunc):
        if value.den == DiffPoly.constant(1):
            return _poly_latex(value.num)
        return f"\\frac{{{_poly_latex(value.num)}}}{{{_poly_latex(value.den)}}}"
    raise TypeError(f"cannot render {type(value).__name__}")
