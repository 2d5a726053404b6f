"""Differential polynomials over Q in jet variables.

A :class:`DiffPoly` is a sparse map from monomials to exact rational
coefficients.  Monomials are tuples of ``(JetVar, exponent)`` pairs sorted by
the fixed total order on :class:`JetVar`; terms are printed in graded
lexicographic order.  Everything is immutable.

Two derivations are predefined:

* ``D_X`` -- total derivative in the original variable ``x``;
  ``a_j^(k) -> a_j^(k+1)``.
* ``D_Z`` -- total derivative in the new variable ``z`` of ``x = xi(z)``;
  composed coefficient jets obey the chain rule
  ``abar_j^(k) -> xi' * abar_j^(k+1)``.

>>> a3, a4 = coef(3), coef(4)
>>> (a3 * a4).total_derivative(D_X)
DiffPoly('a3*a4\\' + a3\\'*a4')
"""

from __future__ import annotations

import enum
from fractions import Fraction
from typing import Dict, Iterable, Mapping, NamedTuple, Optional, Tuple, Union

from . import config
from .errors import DomainError, JetOrderLimitError

__all__ = [
    "INDEP", "Z", "PARAM", "XI", "ETA", "COEF", "COMP",
    "JetVar", "DiffPoly", "Weight", "Derivation", "XDerivation", "ZDerivation",
    "D_X", "D_Z", "x_var", "z_var", "coef_var", "comp_var", "xi_var", "eta_var",
    "param_var", "coef", "comp", "param", "xi", "eta", "X", "ZVAR", "ZERO", "ONE",
    "const", "spell",
]

# Kind codes; their numeric order is the most significant part of the
# variable order.
INDEP, Z, PARAM, XI, ETA, COEF, COMP = range(7)


class JetVar(NamedTuple):
    kind: int
    j: int = 0
    k: int = 0
    name: str = ""

    def __repr__(self):
        return f"JetVar({spell(self)!r})"

    @property
    def weight(self) -> Optional[int]:
        """Grading ``j + k`` of a coefficient jet; None for every other kind."""
        if self.kind == COEF:
            return self.j + self.k
        return None


def x_var() -> JetVar:
    return JetVar(INDEP, name="x")


def z_var() -> JetVar:
    return JetVar(Z, name="z")


def coef_var(j: int, k: int = 0) -> JetVar:
    if j < 1 or k < 0:
        raise DomainError(f"invalid coefficient jet a{j}^({k})")
    return JetVar(COEF, j, k)


def comp_var(j: int, k: int = 0) -> JetVar:
    if j < 1 or k < 0:
        raise DomainError(f"invalid composed jet abar{j}^({k})")
    return JetVar(COMP, j, k)


def xi_var(k: int = 0) -> JetVar:
    return JetVar(XI, 0, k, "xi")


def eta_var(k: int = 0) -> JetVar:
    return JetVar(ETA, 0, k, "eta")


def param_var(name: str) -> JetVar:
    return JetVar(PARAM, name=name)


def _primes(k: int) -> str:
    if k <= 2:
        return "'" * k
    return f"^({k})"


def spell(v: JetVar) -> str:
    """Text spelling of a variable, as accepted by the parser."""
    if v.kind == COEF:
        return f"a{v.j}{_primes(v.k)}"
    if v.kind == COMP:
        return f"abar{v.j}{_primes(v.k)}"
    if v.kind in (XI, ETA):
        return f"{v.name}{_primes(v.k)}"
    return v.name


Monomial = Tuple[Tuple[JetVar, int], ...]
Number = Union[int, Fraction]

_ONE_MONO: Monomial = ()


def _norm(c):
    if type(c) is Fraction and c.denominator == 1:
        return c.numerator
    return c


def _check_number(c):
    if isinstance(c, bool) or not isinstance(c, (int, Fraction)):
        raise TypeError(f"exact rational coefficient required, got {type(c).__name__}")
    return _norm(c)


def mono_mul(a: Monomial, b: Monomial) -> Monomial:
    if not a:
        return b
    if not b:
        return a
    d = dict(a)
    for v, e in b:
        d[v] = d.get(v, 0) + e
    return tuple(sorted(d.items()))


def mono_div(a: Monomial, b: Monomial) -> Optional[Monomial]:
    """``a / b`` if ``b`` divides ``a``, else None."""
    if not b:
        return a
    d = dict(a)
    for v, e in b:
        have = d.get(v, 0)
        if have < e:
            return None
        if have == e:
            del d[v]
        else:
            d[v] = have - e
    return tuple(sorted(d.items()))


def mono_gcd(a: Monomial, b: Monomial) -> Monomial:
    db = dict(b)
    return tuple((v, min(e, db[v])) for v, e in a if v in db)


def mono_degree(m: Monomial) -> int:
    return sum(e for _, e in m)


def order_key(m: Monomial):
    """Sort key putting monomials in descending graded-lex order."""
    return (-mono_degree(m), tuple((v, -e) for v, e in m))


class Weight(enum.Enum):
    NOT_ISOBARIC = "not isobaric"
    UNDEFINED = "undefined"

    def __str__(self):
        return self.value


class DiffPoly:
    """Immutable polynomial in jet variables with rational coefficients."""

    __slots__ = ("_terms", "_hash", "_sorted")

    def __init__(self, terms: Optional[Mapping[Monomial, Number]] = None):
        clean = {}
        if terms:
            for m, c in terms.items():
                c = _check_number(c)
                if c:
                    m = tuple(sorted((v, e) for v, e in m if e))
                    if any(e < 0 for _, e in m):
                        raise DomainError("negative exponent in polynomial")
                    clean[m] = _norm(clean.get(m, 0) + c)
                    if not clean[m]:
                        del clean[m]
        self._terms = clean
        self._hash = None
        self._sorted = None

    @classmethod
    def _raw(cls, terms: Dict[Monomial, Number]) -> "DiffPoly":
        # caller guarantees canonical monomials and nonzero normalized coefficients
        p = object.__new__(cls)
        p._terms = terms
        p._hash = None
        p._sorted = None
        return p

    @classmethod
    def _from_acc(cls, acc: Dict[Monomial, Number]) -> "DiffPoly":
        return cls._raw({m: _norm(c) for m, c in acc.items() if c})

    @classmethod
    def var(cls, v: JetVar, exponent: int = 1) -> "DiffPoly":
        if exponent < 0:
            raise DomainError("negative exponent in polynomial")
        if exponent == 0:
            return ONE
        return cls._raw({((v, exponent),): 1})

    @classmethod
    def constant(cls, c: Number) -> "DiffPoly":
        c = _check_number(c)
        return cls._raw({_ONE_MONO: c} if c else {})

    @classmethod
    def monomial(cls, m: Monomial, c: Number = 1) -> "DiffPoly":
        return cls({m: c})

    # -- structure -------------------------------------------------------
    @property
    def terms(self) -> Tuple[Tuple[Monomial, Number], ...]:
        """Terms in canonical (descending graded-lex) order."""
        if self._sorted is None:
            self._sorted = tuple(sorted(self._terms.items(), key=lambda t: order_key(t[0])))
        return self._sorted

    def as_dict(self) -> Dict[Monomial, Number]:
        return dict(self._terms)

    def __len__(self):
        return len(self._terms)

    def __iter__(self):
        return iter(self.terms)

    def __bool__(self):
        return bool(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def is_constant(self) -> bool:
        return not self._terms or (len(self._terms) == 1 and _ONE_MONO in self._terms)

    def constant_value(self) -> Number:
        if not self.is_constant():
            raise DomainError("polynomial is not constant")
        return self._terms.get(_ONE_MONO, 0)

    def coefficient(self, m: Monomial) -> Number:
        return self._terms.get(m, 0)

    def variables(self) -> frozenset:
        return frozenset(v for m in self._terms for v, _ in m)

    def degree(self) -> int:
        return max((mono_degree(m) for m in self._terms), default=-1)

    def degree_in(self, v: JetVar) -> int:
        return max((dict(m).get(v, 0) for m in self._terms), default=-1)

    def leading_term(self) -> Tuple[Monomial, Number]:
        if not self._terms:
            raise DomainError("zero polynomial has no leading term")
        return self.terms[0]

    def max_order(self) -> int:
        """Largest k over the coefficient jets a_j^(k) present; -1 if none."""
        return max((v.k for v in self.variables() if v.kind == COEF), default=-1)

    # -- arithmetic ------------------------------------------------------
    def _coerce(self, other) -> Optional["DiffPoly"]:
        if isinstance(other, DiffPoly):
            return other
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return DiffPoly.constant(other)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if not o._terms:
            return self
        if not self._terms:
            return o
        acc = dict(self._terms)
        for m, c in o._terms.items():
            acc[m] = acc.get(m, 0) + c
        return DiffPoly._from_acc(acc)

    __radd__ = __add__

    def __neg__(self):
        return DiffPoly._raw({m: -c for m, c in self._terms.items()})

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

    def scale(self, c: Number) -> "DiffPoly":
        c = _check_number(c)
        if not c:
            return ZERO
        return DiffPoly._raw({m: _norm(v * c) for m, v in self._terms.items()})

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return self.scale(other)
        if not isinstance(other, DiffPoly):
            return NotImplemented
        if len(other._terms) > len(self._terms):
            self, other = other, self
        acc: Dict[Monomial, Number] = {}
        get = acc.get
        for m2, c2 in other._terms.items():
            for m1, c1 in self._terms.items():
                m = mono_mul(m1, m2)
                acc[m] = get(m, 0) + c1 * c2
        return DiffPoly._from_acc(acc)

    __rmul__ = __mul__

    def __pow__(self, e: int):
        if not isinstance(e, int) or e < 0:
            raise DomainError("polynomial exponent must be a nonnegative integer")
        result = ONE
        base = self
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result

    def __truediv__(self, other):
        from .ratfunc import RatFunc

        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            if not other:
                raise DomainError("division by zero")
            return self.scale(Fraction(1) / other)
        if isinstance(other, DiffPoly):
            return RatFunc(self, other)
        if isinstance(other, RatFunc):
            return RatFunc(self) / other
        return NotImplemented

    def __rtruediv__(self, other):
        from .ratfunc import RatFunc

        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return RatFunc(o, self)

    def __eq__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self._terms == o._terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    # -- division helpers --------------------------------------------------
    def divide_monomial(self, m: Monomial) -> Optional["DiffPoly"]:
        out = {}
        for mm, c in self._terms.items():
            q = mono_div(mm, m)
            if q is None:
                return None
            out[q] = c
        return DiffPoly._raw(out)

    def monomial_content(self) -> Monomial:
        """Largest monomial dividing every term."""
        it = iter(self._terms)
        g = next(it, _ONE_MONO)
        for m in it:
            if not g:
                break
            g = mono_gcd(g, m)
        return g

    def exact_div(self, q: "DiffPoly") -> Optional["DiffPoly"]:
        """Quotient ``self / q`` when q divides self exactly, else None."""
        if not q._terms:
            raise DomainError("division by zero polynomial")
        if not self._terms:
            return ZERO
        if len(q._terms) == 1:
            (qm, qc), = q._terms.items()
            r = self.divide_monomial(qm)
            return None if r is None else r.scale(Fraction(1) / qc)
        lm, lc = q.leading_term()
        rem = self
        quot: Dict[Monomial, Number] = {}
        while rem._terms:
            rm, rc = rem.leading_term()
            t = mono_div(rm, lm)
            if t is None:
                return None
            c = _norm(Fraction(rc) / lc)
            quot[t] = c
            rem = rem - q * DiffPoly._raw({t: c})
        return DiffPoly._raw(quot)

    def content(self) -> Fraction:
        """Positive rational c with self/c integral and primitive."""
        from math import gcd, lcm

        if not self._terms:
            return Fraction(0)
        num = 0
        den = 1
        for c in self._terms.values():
            f = Fraction(c)
            num = gcd(num, f.numerator)
            den = lcm(den, f.denominator)
        return Fraction(num, den)

    def primitive(self) -> Tuple[Fraction, "DiffPoly"]:
        """``(c, q)`` with ``self == c*q``, q integral, content-free, leading coefficient > 0."""
        if not self._terms:
            return Fraction(0), ZERO
        c = self.content()
        if self.leading_term()[1] < 0:
            c = -c
        return c, self.scale(1 / c)

    # -- calculus ----------------------------------------------------------
    def partial(self, v: JetVar) -> "DiffPoly":
        acc = {}
        for m, c in self._terms.items():
            for i, (w, e) in enumerate(m):
                if w == v:
                    rest = m[:i] + (((w, e - 1),) if e > 1 else ()) + m[i + 1:]
                    acc[rest] = acc.get(rest, 0) + c * e
                    break
        return DiffPoly._from_acc(acc)

    def total_derivative(self, d: "Derivation") -> "DiffPoly":
        images: Dict[JetVar, DiffPoly] = {}
        acc: Dict[Monomial, Number] = {}
        get = acc.get
        for m, c in self._terms.items():
            for i, (v, e) in enumerate(m):
                img = images.get(v)
                if img is None:
                    img = images[v] = d.image(v)
                if not img._terms:
                    continue
                rest = m[:i] + (((v, e - 1),) if e > 1 else ()) + m[i + 1:]
                ce = c * e
                for m2, c2 in img._terms.items():
                    mm = mono_mul(rest, m2)
                    acc[mm] = get(mm, 0) + ce * c2
        return DiffPoly._from_acc(acc)

    def weight(self) -> Union[int, Weight]:
        """Common weight of all monomials, or a :class:`Weight` marker."""
        if not self._terms:
            return Weight.UNDEFINED
        w = None
        isobaric = True
        for m in self._terms:
            mw = 0
            for v, e in m:
                if v.kind != COEF:
                    return Weight.UNDEFINED
                mw += (v.j + v.k) * e
            if w is None:
                w = mw
            elif mw != w:
                isobaric = False
        return w if isobaric else Weight.NOT_ISOBARIC

    def weight_component(self, w: int) -> "DiffPoly":
        """Terms whose coefficient-jet weight equals w."""
        return DiffPoly._raw({
            m: c for m, c in self._terms.items()
            if sum((v.j + v.k) * e for v, e in m if v.kind == COEF) == w
        })

    def evaluate(self, point: Mapping[JetVar, Number]) -> Number:
        total = 0
        for m, c in self._terms.items():
            t = c
            for v, e in m:
                try:
                    t = t * point[v] ** e
                except KeyError:
                    raise DomainError(f"no value assigned to {spell(v)}") from None
            total += t
        return _norm(Fraction(total)) if not isinstance(total, int) else total

    def substitute(self, mapping: Mapping[JetVar, object]):
        """Replace variables by numbers, DiffPolys or RatFuncs.

        Returns a DiffPoly unless some image is a RatFunc.
        """
        from .ratfunc import RatFunc

        if any(isinstance(val, RatFunc) for val in mapping.values()):
            return self._substitute_rational(mapping)
        powers: Dict[Tuple[JetVar, int], DiffPoly] = {}
        result: Dict[Monomial, Number] = {}
        for m, c in self._terms.items():
            keep = []
            factor = None
            for v, e in m:
                if v in mapping:
                    p = powers.get((v, e))
                    if p is None:
                        img = mapping[v]
                        if not isinstance(img, DiffPoly):
                            img = DiffPoly.constant(img)
                        p = powers[(v, e)] = img ** e
                    factor = p if factor is None else factor * p
                else:
                    keep.append((v, e))
            base = DiffPoly._raw({tuple(keep): c})
            term = base if factor is None else base * factor
            for mm, cc in term._terms.items():
                result[mm] = result.get(mm, 0) + cc
        return DiffPoly._from_acc(result)

    def _substitute_rational(self, mapping):
        from .ratfunc import RatFunc

        total = RatFunc(ZERO)
        powers = {}
        for m, c in self._terms.items():
            keep = []
            factor = RatFunc(ONE)
            for v, e in m:
                if v in mapping:
                    p = powers.get((v, e))
                    if p is None:
                        img = mapping[v]
                        if not isinstance(img, RatFunc):
                            img = RatFunc(img if isinstance(img, DiffPoly) else DiffPoly.constant(img))
                        p = powers[(v, e)] = img ** e
                    factor = factor * p
                else:
                    keep.append((v, e))
            total = total + factor * RatFunc(DiffPoly._raw({tuple(keep): c}))
        return total

    def truncate(self, v: JetVar, degree: int) -> "DiffPoly":
        """Drop every term whose exponent in v is >= degree."""
        return DiffPoly._raw({m: c for m, c in self._terms.items() if dict(m).get(v, 0) < degree})

    def coefficients_in(self, vs: Iterable[JetVar]) -> Dict[Monomial, "DiffPoly"]:
        """Collect as a polynomial in ``vs``: map from vs-monomial to cofactor."""
        vs = frozenset(vs)
        out: Dict[Monomial, Dict[Monomial, Number]] = {}
        for m, c in self._terms.items():
            inner = tuple(p for p in m if p[0] in vs)
            outer = tuple(p for p in m if p[0] not in vs)
            out.setdefault(inner, {})[outer] = c
        return {k: DiffPoly._raw(v) for k, v in out.items()}

    # -- printing ----------------------------------------------------------
    def __str__(self):
        from .syntax import to_text

        return to_text(self)

    def __repr__(self):
        return f"DiffPoly({str(self)!r})"


ZERO = DiffPoly._raw({})
ONE = DiffPoly._raw({_ONE_MONO: 1})


def const(c: Number) -> DiffPoly:
    return DiffPoly.constant(c)


def coef(j: int, k: int = 0) -> DiffPoly:
    return DiffPoly.var(coef_var(j, k))


def comp(j: int, k: int = 0) -> DiffPoly:
    return DiffPoly.var(comp_var(j, k))


def xi(k: int = 0) -> DiffPoly:
    return DiffPoly.var(xi_var(k))


def eta(k: int = 0) -> DiffPoly:
    return DiffPoly.var(eta_var(k))


def param(name: str) -> DiffPoly:
    return DiffPoly.var(param_var(name))


X = DiffPoly.var(x_var())
ZVAR = DiffPoly.var(z_var())


# -- derivations -------------------------------------------------------------

def _bump(k: int) -> int:
    limit = config.settings().max_jet_order
    if k + 1 > limit:
        raise JetOrderLimitError(f"jet order {k + 1} exceeds configured maximum {limit}")
    return k + 1


class Derivation:
    """A derivation of the polynomial ring, given by its value on each variable.

    ``rules`` overrides the built-in behaviour for individual variables; this is
    how auxiliary symbols (e.g. ``u = 1/(gamma z + delta)``) get a derivative.
    """

    name = "derivation"

    def __init__(self, rules: Optional[Mapping[JetVar, DiffPoly]] = None):
        self.rules = dict(rules or {})

    def image(self, v: JetVar) -> DiffPoly:
        r = self.rules.get(v)
        if r is not None:
            return r
        return self._default(v)

    def _default(self, v: JetVar) -> DiffPoly:
        raise NotImplementedError

    def __call__(self, p):
        return p.total_derivative(self)

    def __repr__(self):
        return f"<{type(self).__name__} {self.name}>"


class XDerivation(Derivation):
    name = "x"

    def _default(self, v):
        if v.kind == INDEP:
            return ONE
        if v.kind == COEF:
            return DiffPoly.var(JetVar(COEF, v.j, _bump(v.k)))
        if v.kind == PARAM:
            return ZERO
        raise DomainError(f"x-derivation is not defined on {spell(v)}")


class ZDerivation(Derivation):
    """d/dz, where composed jets abar_j^(k) = a_j^(k)(xi(z)).

    ``xi_prime`` is the polynomial standing for dxi/dz; it defaults to the jet
    symbol xi' and may be replaced by an explicit expression.
    """

    name = "z"

    def __init__(self, rules=None, xi_prime: Optional[DiffPoly] = None):
        super().__init__(rules)
        self.xi_prime = xi_prime

    def _default(self, v):
        kind = v.kind
        if kind == Z:
            return ONE
        if kind == XI:
            return DiffPoly.var(JetVar(XI, 0, _bump(v.k), v.name))
        if kind == ETA:
            return DiffPoly.var(JetVar(ETA, 0, _bump(v.k), v.name))
        if kind == COMP:
            xp = self.xi_prime if self.xi_prime is not None else xi(1)
            return xp * DiffPoly.var(JetVar(COMP, v.j, _bump(v.k)))
        if kind == PARAM:
            return ZERO
        raise DomainError(f"z-derivation is not defined on {spell(v)}")


D_X = XDerivation()
D_Z = ZDerivation()
