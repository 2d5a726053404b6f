"""Equivalence-group machinery for linear ODEs in a canonical form.

A :class:`VectorField` ``f d/dx + sum_j phi_j d/da_j`` generates the action of
the equivalence group on the coefficients.  It is prolonged to jets with the
standard recursion

    zeta_{j,0} = phi_j,
    zeta_{j,k} = D_x zeta_{j,k-1} - a_j^(k) D_x f,

and a differential function F is a relative invariant of index m when

    X F + m * mu * F == 0

identically in x and the group parameters, where the multiplier ``mu`` is read
off the fundamental invariant S0 (for the order-5 form, S0 = a3 and
mu = k2 + 2 k3 x).
"""

from __future__ import annotations

import random
import threading
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Dict, Iterable, List, Mapping, Optional, Sequence, Tuple, Union

from . import config
from .diffpoly import (
    COEF, INDEP, PARAM, D_X, ZERO, DiffPoly, JetVar, Weight, coef, coef_var,
    param_var, x_var,
)
from .errors import ConfigurationError, DomainError, JetOrderLimitError, SamplingError
from .linalg import Echelon, integer_normalize, rank, solve_least_squares
from .ratfunc import RatFunc
from .syntax import parse

__all__ = [
    "VectorField", "ProlongedField", "Invariant", "CheckResult", "AnsatzSpace",
    "builtin_generator_order5", "prolong", "apply", "multiplier", "check_relative",
    "check_absolute", "infer_index", "ansatz_monomials", "ansatz_space",
    "find_relative_invariants", "invariant_count", "gamma_formula", "count_report",
    "jacobian_rank", "random_point", "S0",
]

S0 = coef(3)


@dataclass(frozen=True, eq=False)
class VectorField:
    f: DiffPoly
    phis: Mapping[int, DiffPoly]
    n: int
    slots: Tuple[int, ...]
    _cache: dict = field(default_factory=dict, repr=False, compare=False)
    _lock: threading.Lock = field(default_factory=threading.Lock, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "slots", tuple(sorted(self.slots)))
        object.__setattr__(self, "phis", {j: self.phis.get(j, ZERO) for j in self.slots})
        for expr in (self.f, *self.phis.values()):
            for v in expr.variables():
                if not (v.kind in (INDEP, PARAM) or (v.kind == COEF and v.k == 0)):
                    raise DomainError(f"{v!r} is not allowed in a point-transformation generator")

    def params(self) -> List[JetVar]:
        vs = set(self.f.variables())
        for p in self.phis.values():
            vs |= p.variables()
        return sorted(v for v in vs if v.kind == PARAM)

    def zeta(self, j: int, k: int) -> DiffPoly:
        if j not in self.phis:
            raise DomainError(f"a{j} is not a coefficient slot of this generator")
        if k > config.settings().max_jet_order:
            raise JetOrderLimitError(f"prolongation order {k} exceeds configured maximum")
        key = (j, k)
        with self._lock:
            hit = self._cache.get(key)
        if hit is not None:
            return hit
        if k == 0:
            z = self.phis[j]
        else:
            z = D_X(self.zeta(j, k - 1)) - coef(j, k) * D_X(self.f)
        with self._lock:
            self._cache[key] = z
        return z

    def prolong(self, p: int) -> "ProlongedField":
        return prolong(self, p)

    def apply(self, F):
        """Apply the prolongation of the order F needs."""
        return apply(prolong(self, max(_order_of(F), 0)), F)

    def specialize(self, values: Mapping[str, object]) -> "VectorField":
        """Substitute group parameters by numbers or polynomials."""
        m = {param_var(k): v for k, v in values.items()}
        return VectorField(self.f.substitute(m), {j: p.substitute(m) for j, p in self.phis.items()},
                           self.n, self.slots)

    def __add__(self, other: "VectorField") -> "VectorField":
        if self.slots != other.slots or self.n != other.n:
            raise DomainError("generators act on different coefficient slots")
        return VectorField(self.f + other.f, {j: self.phis[j] + other.phis[j] for j in self.slots},
                           self.n, self.slots)

    def scale(self, c) -> "VectorField":
        """Multiply by a constant or a parameter polynomial."""
        return VectorField(self.f * c, {j: p * c for j, p in self.phis.items()}, self.n, self.slots)

    def __eq__(self, other):
        if not isinstance(other, VectorField):
            return NotImplemented
        return (self.n, self.slots, self.f, dict(self.phis)) == (other.n, other.slots, other.f, dict(other.phis))

    def __hash__(self):
        return hash((self.n, self.slots, self.f, tuple(self.phis.items())))


@dataclass(frozen=True)
class ProlongedField:
    base: VectorField
    order: int
    zetas: Mapping[Tuple[int, int], DiffPoly]

    @property
    def f(self) -> DiffPoly:
        return self.base.f


def builtin_generator_order5() -> VectorField:
    """The equivalence generator exactly as printed for y^(5) + a3 y'' + a4 y' + a5 y = 0."""
    return VectorField(
        f=parse("k1 + x*(k2 + k3*x)"),
        phis={
            3: parse("-3*a3*(k2 + 2*k3*x)"),
            4: parse("-2*(-3*a3*k3 + 2*a4*(k2 + 2*k3*x))"),
            5: parse("-4*a4*k3 - 5*a5*(k2 + 2*k3*x)"),
        },
        n=5,
        slots=(3, 4, 5),
    )


def prolong(v: VectorField, p: int) -> ProlongedField:
    if p < 0:
        raise DomainError("prolongation order must be nonnegative")
    if p > config.settings().max_jet_order:
        raise JetOrderLimitError(f"prolongation order {p} exceeds configured maximum "
                                 f"{config.settings().max_jet_order}")
    zetas = {(j, k): v.zeta(j, k) for j in v.slots for k in range(p + 1)}
    return ProlongedField(v, p, zetas)


def _order_of(F) -> int:
    if isinstance(F, (DiffPoly, RatFunc)):
        return F.max_order()
    return F.max_order()


def _apply_poly(pv: ProlongedField, F: DiffPoly) -> DiffPoly:
    out = ZERO
    for v in sorted(F.variables()):
        if v.kind == INDEP:
            out = out + pv.base.f * F.partial(v)
        elif v.kind == COEF:
            z = pv.zetas.get((v.j, v.k))
            if z is None:
                if v.j not in pv.base.slots:
                    raise DomainError(f"a{v.j} is not a coefficient slot of this generator")
                raise DomainError(f"prolongation of order {pv.order} is insufficient for {v!r}")
            if z:
                out = out + z * F.partial(v)
        elif v.kind != PARAM:
            raise DomainError(f"generator cannot act on {v!r}")
    return out


def apply(pv: Union[ProlongedField, VectorField], F):
    """The prolonged derivation applied to F (DiffPoly, RatFunc or a factored product)."""
    if isinstance(pv, VectorField):
        return pv.apply(F)
    if _order_of(F) > pv.order:
        raise DomainError(f"F has order {_order_of(F)} but the field is prolonged to {pv.order}")
    if isinstance(F, DiffPoly):
        return _apply_poly(pv, F)
    if isinstance(F, RatFunc):
        xn = _apply_poly(pv, F.num)
        xd = _apply_poly(pv, F.den)
        return RatFunc(xn * F.den - F.num * xd, F.den * F.den)
    return F.apply_field(pv)


def multiplier(v: VectorField, s0: DiffPoly = S0) -> DiffPoly:
    """mu = -(X S0) / (sigma S0), with sigma the weight of S0."""
    sigma = s0.weight()
    if isinstance(sigma, Weight) or sigma == 0:
        raise ConfigurationError("fundamental invariant must be isobaric of positive weight")
    q = apply(v, s0).exact_div(s0.scale(-sigma))
    if q is None:
        raise ConfigurationError("multiplier -(X S0)/(sigma S0) is not a polynomial")
    return q


@dataclass(frozen=True)
class CheckResult:
    verified: bool
    residual: DiffPoly

    def __bool__(self):
        return self.verified

    @property
    def verdict(self) -> str:
        return "verified" if self.verified else "residual"


def check_relative(F: DiffPoly, m, v: VectorField, mu: Optional[DiffPoly] = None) -> CheckResult:
    if mu is None:
        mu = multiplier(v)
    if isinstance(F, RatFunc):
        # X(N/D) + m mu N/D = 0  <=>  XN D - N XD + m mu N D = 0
        pv = prolong(v, max(F.max_order(), 0))
        res = _apply_poly(pv, F.num) * F.den - F.num * _apply_poly(pv, F.den) + (mu * F.num * F.den) * Fraction(m)
        return CheckResult(res.is_zero(), res)
    res = apply(v, F) + (mu * F) * Fraction(m)
    return CheckResult(res.is_zero(), res)


def check_absolute(F, v: VectorField) -> CheckResult:
    if isinstance(F, (int, Fraction)):
        return CheckResult(True, ZERO)
    if isinstance(F, DiffPoly):
        res = apply(v, F)
    elif isinstance(F, RatFunc):
        pv = prolong(v, max(F.max_order(), 0))
        res = _apply_poly(pv, F.num) * F.den - F.num * _apply_poly(pv, F.den)
    else:
        res = F.absolute_residual(prolong(v, max(F.max_order(), 0)))
    return CheckResult(res.is_zero(), res)


def infer_index(F: DiffPoly, v: VectorField, mu: Optional[DiffPoly] = None) -> Optional[Fraction]:
    """The index m with X F = -m mu F, or None when F is not a relative invariant."""
    if F.is_zero():
        raise DomainError("the zero polynomial has no index")
    if mu is None:
        mu = multiplier(v)
    xf = apply(v, F)
    if xf.is_zero():
        return Fraction(0)
    muf = mu * F
    lm, lc = xf.leading_term()
    c = muf.coefficient(lm)
    if not c:
        return None
    m = -Fraction(lc) / c
    if (xf + muf * m).is_zero():
        return m
    return None


# -- ansatz ----------------------------------------------------------------

def ansatz_monomials(w: int, r: int, slots: Sequence[int]) -> List[DiffPoly]:
    """All monomials of weight w in the jets a_j^(k), j in slots, k <= r."""
    vs = sorted(coef_var(j, k) for j in slots for k in range(r + 1))
    out = []

    def rec(i, remaining, acc):
        if remaining == 0:
            out.append(tuple(acc))
            return
        if i == len(vs):
            return
        wt = vs[i].weight
        for e in range(remaining // wt, -1, -1):
            if e:
                acc.append((vs[i], e))
            rec(i + 1, remaining - e * wt, acc)
            if e:
                acc.pop()

    rec(0, w, [])
    return sorted((DiffPoly.monomial(m) for m in out), key=lambda p: _mono_key(p))


def _mono_key(p: DiffPoly):
    from .diffpoly import order_key

    return order_key(p.terms[0][0])


@dataclass
class AnsatzSpace:
    """Solution space of the relative-invariant ansatz at fixed weight and order."""

    weight: int
    order: int
    monomials: List[DiffPoly]
    vectors: List[List[int]]

    @property
    def dimension(self) -> int:
        return len(self.vectors)

    @property
    def basis(self) -> List[DiffPoly]:
        return [self._combine(v) for v in self.vectors]

    def _combine(self, coeffs) -> DiffPoly:
        acc = ZERO
        for c, m in zip(coeffs, self.monomials):
            if c:
                acc = acc + m.scale(c)
        return acc

    def coordinates(self, p: DiffPoly) -> Optional[List[Fraction]]:
        """Coefficient vector of p over the ansatz monomials (None if p leaves the space)."""
        index = {m.terms[0][0]: i for i, m in enumerate(self.monomials)}
        vec = [Fraction(0)] * len(self.monomials)
        for m, c in p.terms:
            i = index.get(m)
            if i is None:
                return None
            vec[i] = Fraction(c)
        return vec

    def _echelon(self) -> Echelon:
        e = getattr(self, "_ech", None)
        if e is None:
            e = Echelon()
            for v in self.vectors:
                e.add({i: Fraction(x) for i, x in enumerate(v) if x})
            self._ech = e
        return e

    def contains(self, p: DiffPoly) -> bool:
        vec = self.coordinates(p)
        if vec is None:
            return False
        return not self._echelon().reduce({i: x for i, x in enumerate(vec) if x})

    def contains_vector(self, vec: Mapping[int, Fraction]) -> bool:
        return not self._echelon().reduce(vec)

    def project(self, p: DiffPoly) -> DiffPoly:
        """Exact least-squares projection of p's in-space part onto the solution space."""
        index = {m.terms[0][0]: i for i, m in enumerate(self.monomials)}
        target = [Fraction(0)] * len(self.monomials)
        for m, c in p.terms:
            i = index.get(m)
            if i is not None:
                target[i] = Fraction(c)
        if not self.vectors:
            return ZERO
        cs = solve_least_squares(self.vectors, target)
        vec = [sum(c * v[i] for c, v in zip(cs, self.vectors)) for i in range(len(self.monomials))]
        return self._combine(vec)


def ansatz_space(w: int, r: int, v: VectorField, mu: Optional[DiffPoly] = None) -> AnsatzSpace:
    s = config.settings()
    if w < 0 or r < 0:
        raise DomainError("weight and order must be nonnegative")
    if w > s.max_ansatz_weight:
        raise JetOrderLimitError(f"ansatz weight {w} exceeds configured maximum {s.max_ansatz_weight}")
    if mu is None:
        mu = multiplier(v)
    pv = prolong(v, r)
    monos = ansatz_monomials(w, r, v.slots)
    if len(monos) > s.max_ansatz_size:
        raise JetOrderLimitError(f"ansatz has {len(monos)} monomials, above the limit {s.max_ansatz_size}")
    wmu = mu.scale(w)
    rows: Dict = {}
    for i, m in enumerate(monos):
        e = _apply_poly(pv, m) + wmu * m
        for mono, c in e.terms:
            rows.setdefault(mono, {})[i] = c
    ech = Echelon()
    for key in sorted(rows, key=_row_key):
        ech.add(rows[key])
    vectors = [integer_normalize(b) for b in ech.nullspace(len(monos))]
    return AnsatzSpace(w, r, monos, vectors)


def _row_key(mono):
    from .diffpoly import order_key

    return order_key(mono)


def find_relative_invariants(w: int, r: int, v: VectorField, mu: Optional[DiffPoly] = None) -> List[DiffPoly]:
    """Basis of relative invariants of weight (= index) w and order <= r."""
    return ansatz_space(w, r, v, mu).basis


# -- counting and ranks ------------------------------------------------------

def gamma_formula(n: int, p: int) -> int:
    """The closed-form count n + 4 - p(n - 2) as printed."""
    return n + 4 - p * (n - 2)


def random_point(variables: Iterable[JetVar], rng: random.Random, low: int = -9, high: int = 9,
                 nonzero: Iterable[JetVar] = (coef_var(3),)) -> Dict[JetVar, int]:
    nz = set(nonzero)
    point = {}
    for v in sorted(variables):
        val = rng.randint(low, high)
        while v in nz and val == 0:
            val = rng.randint(low, high)
        point[v] = val
    return point


def _basis_fields(v: VectorField) -> List[VectorField]:
    ps = v.params()
    out = []
    for p in ps:
        out.append(v.specialize({q.name: (1 if q == p else 0) for q in ps}))
    return out


def invariant_count(v: VectorField, p: int, trials: int = 5, seed: Optional[int] = None) -> int:
    """Number of absolute invariants of the p-th prolongation, by generic rank."""
    rng = random.Random(config.settings().seed if seed is None else seed)
    coords = [x_var()] + [coef_var(j, k) for j in v.slots for k in range(p + 1)]
    fields = [prolong(b, p) for b in _basis_fields(v)]
    best = 0
    for _ in range(max(trials, 1)):
        point = random_point(coords, rng)
        matrix = []
        for pv in fields:
            row = [pv.f.evaluate(point)]
            row += [pv.zetas[(j, k)].evaluate(point) for j in v.slots for k in range(p + 1)]
            matrix.append(row)
        best = max(best, rank(matrix))
    return len(coords) - best


def count_report(v: VectorField, p: int, trials: int = 5, seed: Optional[int] = None) -> dict:
    rank_count = invariant_count(v, p, trials, seed)
    formula = gamma_formula(v.n, p)
    return {
        "n": v.n,
        "order": p,
        "rank_count": rank_count,
        "formula_count": formula,
        "consistent": rank_count == formula,
        "expected_3p_plus_1": len(v.slots) * p + 1,
    }


def _expr_of(inv):
    return inv.expr if isinstance(inv, Invariant) else inv


def _gradient(expr, variables: Sequence[JetVar], point) -> List[Fraction]:
    if isinstance(expr, DiffPoly):
        return [Fraction(expr.partial(v).evaluate(point)) for v in variables]
    if isinstance(expr, RatFunc):
        d = Fraction(expr.den.evaluate(point))
        if not d:
            raise DomainError("denominator vanishes")
        n = Fraction(expr.num.evaluate(point))
        return [(expr.num.partial(v).evaluate(point) * d - n * expr.den.partial(v).evaluate(point)) / (d * d)
                for v in variables]
    return expr.gradient_at(variables, point)


def jacobian_rank(invs: Sequence, sampler: Optional[Callable] = None, trials: int = 10,
                  seed: Optional[int] = None) -> int:
    """Maximum exact rank of the Jacobian over random rational sample points."""
    exprs = [_expr_of(i) for i in invs]
    if not exprs:
        return 0
    vs = set()
    for e in exprs:
        vs |= {v for v in e.variables() if v.kind == COEF}
    variables = sorted(vs)
    rng = random.Random(config.settings().seed if seed is None else seed)
    if sampler is None:
        sampler = lambda: random_point(variables, rng)  # noqa: E731
    best = None
    for _ in range(trials):
        point = sampler()
        try:
            rows = [_gradient(e, variables, point) for e in exprs]
        except (DomainError, ZeroDivisionError):
            continue
        r = rank(rows)
        best = r if best is None else max(best, r)
        if best == len(exprs):
            break
    if best is None:
        raise SamplingError("every sample point hit a singularity")
    return best


# -- invariant records -----------------------------------------------------------

RELATIVE = "relative"
ABSOLUTE = "absolute"


@dataclass(frozen=True)
class Invariant:
    name: str
    expr: object
    kind: str
    index: Fraction
    weight: Optional[int]
    order: int
    provenance: str

    def __post_init__(self):
        object.__setattr__(self, "index", Fraction(self.index))
        if self.kind == RELATIVE and isinstance(self.expr, DiffPoly) and self.weight is not None:
            if self.weight != self.index:
                raise DomainError(f"{self.name}: weight {self.weight} differs from index {self.index}")

    @classmethod
    def relative(cls, name: str, expr: DiffPoly, index, provenance: str = "printed") -> "Invariant":
        w = expr.weight()
        return cls(name, expr, RELATIVE, Fraction(index), w if isinstance(w, int) else None,
                   expr.max_order(), provenance)

    @classmethod
    def absolute(cls, name: str, expr, provenance: str = "printed") -> "Invariant":
        return cls(name, expr, ABSOLUTE, Fraction(0), None, expr.max_order(), provenance)

    def as_ratfunc(self) -> RatFunc:
        e = self.expr
        if isinstance(e, RatFunc):
            return e
        if isinstance(e, DiffPoly):
            return RatFunc(e)
        return e.expand()

    def renamed(self, name: str, provenance: Optional[str] = None) -> "Invariant":
        return Invariant(name, self.expr, self.kind, self.index, self.weight, self.order,
                         provenance or self.provenance)
