"""Quotients of differential polynomials.

No multivariate GCD is attempted.  Normalisation removes the common monomial
factor, scales numerator and denominator to integral coefficients with no
common content, fixes the sign so the denominator's leading coefficient is
positive, and tries a cheap exact division when the denominator is not a
monomial.  Equality is
decided by cross-multiplication.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd, lcm
from typing import Optional

from .diffpoly import ONE, ZERO, DiffPoly, Derivation, mono_gcd
from .errors import DomainError

__all__ = ["RatFunc", "as_ratfunc"]


class RatFunc:
    __slots__ = ("num", "den")

    def __init__(self, num, den: Optional[DiffPoly] = None):
        if not isinstance(num, DiffPoly):
            num = DiffPoly.constant(num)
        if den is None:
            den = ONE
        elif not isinstance(den, DiffPoly):
            den = DiffPoly.constant(den)
        if den.is_zero():
            raise DomainError("rational function with zero denominator")
        self.num, self.den = _normalize(num, den)

    @classmethod
    def _raw(cls, num, den):
        r = object.__new__(cls)
        r.num = num
        r.den = den
        return r

    def normalize(self) -> "RatFunc":
        return RatFunc(self.num, self.den)

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_polynomial(self) -> bool:
        return self.den.is_constant()

    def as_poly(self) -> DiffPoly:
        """The numerator over a constant denominator, or by exact division."""
        if self.den.is_constant():
            return self.num.scale(Fraction(1) / self.den.constant_value())
        q = self.num.exact_div(self.den)
        if q is None:
            raise DomainError("rational function is not a polynomial")
        return q

    def max_order(self) -> int:
        return max(self.num.max_order(), self.den.max_order())

    def variables(self):
        return self.num.variables() | self.den.variables()

    # -- arithmetic ------------------------------------------------------
    @staticmethod
    def _coerce(other) -> Optional["RatFunc"]:
        if isinstance(other, RatFunc):
            return other
        if isinstance(other, DiffPoly):
            return RatFunc._raw(other, ONE)
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return RatFunc._raw(DiffPoly.constant(other), ONE)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if self.den == o.den:
            return RatFunc(self.num + o.num, self.den)
        return RatFunc(self.num * o.den + o.num * self.den, self.den * o.den)

    __radd__ = __add__

    def __neg__(self):
        return RatFunc._raw(-self.num, self.den)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return RatFunc(self.num * o.num, self.den * o.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if o.is_zero():
            raise DomainError("division by the zero function")
        return RatFunc(self.num * o.den, self.den * o.num)

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o / self

    def __pow__(self, e: int):
        if not isinstance(e, int):
            raise DomainError("integer exponent required")
        if e < 0:
            if self.is_zero():
                raise DomainError("division by the zero function")
            return RatFunc(self.den ** (-e), self.num ** (-e))
        return RatFunc(self.num ** e, self.den ** e)

    def __eq__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if self.den == o.den:
            return self.num == o.num
        return (self.num * o.den - o.num * self.den).is_zero()

    def __hash__(self):
        # equal functions may have different representatives
        raise TypeError("RatFunc is not hashable")

    # -- calculus ----------------------------------------------------------
    def total_derivative(self, d: Derivation) -> "RatFunc":
        dn = self.num.total_derivative(d)
        if self.den.is_constant():
            return RatFunc(dn, self.den)
        dd = self.den.total_derivative(d)
        return RatFunc(dn * self.den - self.num * dd, self.den * self.den)

    def partial(self, v) -> "RatFunc":
        dn = self.num.partial(v)
        dd = self.den.partial(v)
        if dd.is_zero():
            return RatFunc(dn, self.den)
        return RatFunc(dn * self.den - self.num * dd, self.den * self.den)

    def evaluate(self, point):
        d = self.den.evaluate(point)
        if not d:
            raise DomainError("denominator vanishes at the sample point")
        r = Fraction(self.num.evaluate(point)) / d
        return r.numerator if r.denominator == 1 else r

    def substitute(self, mapping) -> "RatFunc":
        n = as_ratfunc(self.num.substitute(mapping))
        d = as_ratfunc(self.den.substitute(mapping))
        return n / d

    def truncate(self, v, degree: int) -> "RatFunc":
        return RatFunc(self.num.truncate(v, degree), self.den.truncate(v, degree))

    def __str__(self):
        from .syntax import to_text

        return to_text(self)

    def __repr__(self):
        return f"RatFunc({str(self)!r})"


def as_ratfunc(v) -> RatFunc:
    if isinstance(v, RatFunc):
        return v
    return RatFunc(v)


def _joint_content(num: DiffPoly, den: DiffPoly) -> Fraction:
    g = 0
    l = 1
    for p in (num, den):
        for c in p._terms.values():
            f = Fraction(c)
            g = gcd(g, f.numerator)
            l = lcm(l, f.denominator)
    return Fraction(g, l)


def _normalize(num: DiffPoly, den: DiffPoly):
    if num.is_zero():
        return ZERO, ONE
    g = mono_gcd(num.monomial_content(), den.monomial_content())
    if g:
        num = num.divide_monomial(g)
        den = den.divide_monomial(g)
    c = _joint_content(num, den)
    if den.leading_term()[1] < 0:
        c = -c
    if c != 1:
        inv = Fraction(1) / c
        num = num.scale(inv)
        den = den.scale(inv)
    if len(den) > 1 and len(num) <= len(den) * 4:
        # cheap attempt: exact polynomial quotient
        q = num.exact_div(den)
        if q is not None:
            return q, ONE
    return num, den
