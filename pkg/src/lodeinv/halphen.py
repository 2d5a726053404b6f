"""Halphen-type invariant sequences and the order-5 catalog.

For relative invariants R1, R2 of indices m1, m2::

    phi(R1, R2) = m1 R1 R2' - m2 R2 R1'             index m1 + m2 + 1
    chi(R1, R2) = phi(R1, R2)^m2 / R2^(m1 + m2 + 1)  absolute
    chi0(R1, R2) = R1^m2 / R2^m1                     absolute

Iterating ``phi(., S0)`` from a seed S of index m gives relative invariants
phi_q of index theta(q) = m + q (sigma + 1) and order ord(S) + q, and absolute
invariants chi_q = phi_q^sigma / S0^theta(q).

Products with possibly fractional exponents are kept factored in
:class:`PowerProduct`; they are expanded into a RatFunc only when every
exponent is an integer.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from typing import Dict, List, Optional, Sequence, Tuple

from .diffpoly import D_X, ONE, ZERO, DiffPoly, coef
from .errors import DomainError, LodeInvError
from .liesym import (
    ABSOLUTE, RELATIVE, AnsatzSpace, CheckResult, Invariant, VectorField, ansatz_space,
    builtin_generator_order5, check_absolute, check_relative, jacobian_rank, multiplier,
    prolong, _apply_poly,
)
from .ratfunc import RatFunc
from .syntax import parse

__all__ = [
    "PowerProduct", "VerificationError", "phi", "phi0", "chi", "chi0", "theta", "phi_seq",
    "chi_seq", "quotient_absolute", "check_power_product", "fundamental_set", "relative_set",
    "common_index_set", "invariant_derivative", "derivative_formula_check", "CatalogEntry",
    "CATALOG", "catalog_entry", "EntryVerdict", "Repair", "verify_entry", "verify_catalog",
    "resolved_catalog", "printed_generator", "arbiter_generator", "display_comparisons",
    "generator_discrepancies", "scalar_relation",
]


class VerificationError(LodeInvError):
    def __init__(self, message, certificate=None):
        super().__init__(message)
        self.certificate = certificate


@lru_cache(maxsize=None)
def printed_generator() -> VectorField:
    return builtin_generator_order5()


@lru_cache(maxsize=None)
def arbiter_generator() -> VectorField:
    from .transform import induced_generator_order5

    return induced_generator_order5()


# -- power products ---------------------------------------------------------------

@dataclass(frozen=True)
class PowerProduct:
    """prod base_i^e_i over polynomial relative invariants, exponents rational."""

    factors: Tuple[Tuple[Invariant, Fraction], ...]

    def __post_init__(self):
        merged: Dict[str, List] = {}
        order = []
        for inv, e in self.factors:
            if not isinstance(inv.expr, DiffPoly):
                raise DomainError(f"factor {inv.name} must be a polynomial")
            if inv.name in merged:
                if merged[inv.name][0].expr != inv.expr:
                    raise DomainError(f"two different factors named {inv.name}")
                merged[inv.name][1] += Fraction(e)
            else:
                merged[inv.name] = [inv, Fraction(e)]
                order.append(inv.name)
        object.__setattr__(self, "factors", tuple((merged[n][0], merged[n][1]) for n in order if merged[n][1]))

    @property
    def index(self) -> Fraction:
        return sum((e * inv.index for inv, e in self.factors), Fraction(0))

    def is_integral(self) -> bool:
        return all(e.denominator == 1 for _, e in self.factors)

    def expand(self) -> RatFunc:
        if not self.is_integral():
            raise DomainError("power product with fractional exponents cannot be expanded")
        num, den = ONE, ONE
        for inv, e in self.factors:
            if e > 0:
                num = num * inv.expr ** int(e)
            else:
                den = den * inv.expr ** int(-e)
        return RatFunc(num, den)

    def max_order(self) -> int:
        return max((inv.expr.max_order() for inv, _ in self.factors), default=-1)

    def variables(self):
        out = frozenset()
        for inv, _ in self.factors:
            out |= inv.expr.variables()
        return out

    def evaluate(self, point):
        if not self.is_integral():
            raise DomainError("cannot evaluate fractional powers exactly")
        val = Fraction(1)
        for inv, e in self.factors:
            b = Fraction(inv.expr.evaluate(point))
            if not b and e < 0:
                raise DomainError("factor vanishes at the sample point")
            val *= b ** int(e)
        return val

    def gradient_at(self, variables, point) -> List[Fraction]:
        """Exact gradient via the logarithmic derivative."""
        value = self.evaluate(point)
        vals = []
        for inv, _ in self.factors:
            b = Fraction(inv.expr.evaluate(point))
            if not b:
                raise DomainError("factor vanishes at the sample point")
            vals.append(b)
        out = []
        for v in variables:
            s = Fraction(0)
            for (inv, e), b in zip(self.factors, vals):
                s += e * Fraction(inv.expr.partial(v).evaluate(point)) / b
            out.append(value * s)
        return out

    def _log_residual(self, pv, extra: DiffPoly) -> DiffPoly:
        # sum_i e_i X(F_i) prod_{j != i} F_j + extra * prod_j F_j, scaled to integers
        from math import lcm

        den = 1
        for _, e in self.factors:
            den = lcm(den, e.denominator)
        bases = [inv.expr for inv, _ in self.factors]
        total = ZERO
        for i, (inv, e) in enumerate(self.factors):
            term = _apply_poly(pv, inv.expr).scale(e * den)
            for k, b in enumerate(bases):
                if k != i:
                    term = term * b
            total = total + term
        if not extra.is_zero():
            prod = extra.scale(den)
            for b in bases:
                prod = prod * b
            total = total + prod
        return total

    def absolute_residual(self, pv) -> DiffPoly:
        return self._log_residual(pv, ZERO)

    def relative_residual(self, pv, m, mu: DiffPoly) -> DiffPoly:
        return self._log_residual(pv, mu.scale(Fraction(m)))

    def apply_field(self, pv):
        if not self.is_integral():
            raise DomainError("generator applied to a fractional power product")
        return RatFunc(self.absolute_residual(pv), ONE) * self.expand() / self._base_product()

    def _base_product(self) -> DiffPoly:
        p = ONE
        for inv, _ in self.factors:
            p = p * inv.expr
        return p

    def describe(self) -> str:
        parts = []
        for inv, e in self.factors:
            parts.append(inv.name if e == 1 else f"{inv.name}^({e})")
        return " * ".join(parts) if parts else "1"

    def __str__(self):
        return self.describe()


def check_power_product(pp: PowerProduct, v: VectorField, m=0, mu: Optional[DiffPoly] = None) -> CheckResult:
    """X(pp) + m mu pp == 0, checked through the logarithmic derivative."""
    pv = prolong(v, max(pp.max_order(), 0))
    if m:
        mu = multiplier(v) if mu is None else mu
        res = pp.relative_residual(pv, m, mu)
    else:
        res = pp.absolute_residual(pv)
    return CheckResult(res.is_zero(), res)


# -- phi / chi --------------------------------------------------------------------

def _require_relative(*invs: Invariant):
    for inv in invs:
        if inv.kind != RELATIVE or not isinstance(inv.expr, DiffPoly):
            raise DomainError(f"{inv.name} is not a polynomial relative invariant")


def _int_index(inv: Invariant) -> int:
    if inv.index.denominator != 1:
        raise DomainError(f"{inv.name} has non-integral index {inv.index}")
    return int(inv.index)


def phi(r1: Invariant, r2: Invariant, name: Optional[str] = None) -> Invariant:
    _require_relative(r1, r2)
    m1, m2 = _int_index(r1), _int_index(r2)
    expr = r1.expr * D_X(r2.expr) * m1 - r2.expr * D_X(r1.expr) * m2
    return Invariant.relative(name or f"phi({r1.name},{r2.name})", expr, m1 + m2 + 1, "sequence")


def phi0(r1: Invariant, r2: Invariant) -> Invariant:
    return r1


def chi(r1: Invariant, r2: Invariant, name: Optional[str] = None) -> Invariant:
    p = phi(r1, r2)
    m1, m2 = _int_index(r1), _int_index(r2)
    pp = PowerProduct(((p, Fraction(m2)), (r2, Fraction(-(m1 + m2 + 1)))))
    return Invariant(name or f"chi({r1.name},{r2.name})", pp, ABSOLUTE, Fraction(0), None,
                     pp.max_order(), "sequence")


def chi0(r1: Invariant, r2: Invariant, name: Optional[str] = None) -> Invariant:
    _require_relative(r1, r2)
    m1, m2 = _int_index(r1), _int_index(r2)
    pp = PowerProduct(((r1, Fraction(m2)), (r2, Fraction(-m1))))
    return Invariant(name or f"chi0({r1.name},{r2.name})", pp, ABSOLUTE, Fraction(0), None,
                     pp.max_order(), "sequence")


def theta(m, sigma, q: int) -> Fraction:
    return Fraction(m) + q * (Fraction(sigma) + 1)


def phi_seq(s: Invariant, q: int, base: Invariant) -> List[Invariant]:
    """phi_1(s) .. phi_q(s) with respect to ``base`` (usually S0)."""
    if q < 1:
        raise DomainError("sequence length must be at least 1")
    _require_relative(s, base)
    out = []
    cur = s
    for k in range(1, q + 1):
        cur = phi(cur, base, name=f"phi_{k}({s.name},{base.name})")
        out.append(cur)
    return out


def chi_seq(s: Invariant, q: int, base: Invariant) -> List[Invariant]:
    sigma = _int_index(base)
    out = []
    for k, p in enumerate(phi_seq(s, q, base), start=1):
        pp = PowerProduct(((p, Fraction(sigma)), (base, -p.index)))
        out.append(Invariant(f"chi_{k}({s.name},{base.name})", pp, ABSOLUTE, Fraction(0), None,
                             pp.max_order(), "sequence"))
    return out


def quotient_absolute(s1: Invariant, s2: Invariant, name: Optional[str] = None) -> Invariant:
    """s1^a / s2^b with a index(s1) = b index(s2), a and b coprime."""
    _require_relative(s1, s2)
    if s1.index == 0 or s2.index == 0:
        raise DomainError("quotient needs nonzero indices")
    ratio = s1.index / s2.index
    if ratio < 0:
        raise DomainError("indices of opposite sign")
    a, b = ratio.denominator, ratio.numerator
    pp = PowerProduct(((s1, Fraction(a)), (s2, Fraction(-b))))
    return Invariant(name or f"{s1.name}^{a}/{s2.name}^{b}", pp, ABSOLUTE, Fraction(0), None,
                     pp.max_order(), "quotient")


def common_index_set(m, seeds: Sequence[Invariant], s0: Invariant) -> List[Invariant]:
    """{S0^(m/sigma), S_j^(m/m_j)}: relative invariants sharing index m."""
    out = []
    for inv in [s0, *seeds]:
        pp = PowerProduct(((inv, Fraction(m) / inv.index),))
        out.append(Invariant(f"{inv.name}^({Fraction(m) / inv.index})", pp, RELATIVE, Fraction(m), None,
                             pp.max_order(), "quotient"))
    return out


# -- catalog ---------------------------------------------------------------------

@dataclass(frozen=True)
class CatalogEntry:
    """A printed invariant.  Absolute entries are base^exponent / (const * a3^s0_power)."""

    name: str
    kind: str
    base_text: str
    index: int = 0
    exponent: int = 1
    const: int = 1
    s0_power: int = 0
    alternates: Tuple[str, ...] = ()

    @property
    def printed(self) -> str:
        if self.kind == RELATIVE:
            return self.base_text
        num = f"({self.base_text})" + (f"^{self.exponent}" if self.exponent != 1 else "")
        den = f"a3^{self.s0_power}" if self.const == 1 else f"{self.const}*a3^{self.s0_power}"
        return f"{num}/({den})"

    @property
    def base(self) -> DiffPoly:
        return parse(self.base_text)

    @property
    def base_weight(self) -> int:
        """Weight the base must have: its index, or 3 s / e for absolute entries."""
        if self.kind == RELATIVE:
            return self.index
        return Fraction(3 * self.s0_power, self.exponent)

    def expression(self):
        if self.kind == RELATIVE:
            return self.base
        return self.assemble(self.base)

    def assemble(self, base: DiffPoly):
        if self.kind == RELATIVE:
            return base
        return RatFunc(base ** self.exponent, coef(3) ** self.s0_power * self.const)

    def isobaric(self) -> bool:
        w = self.base.weight()
        return isinstance(w, int) and w == self.base_weight


_S3 = "5*a4^3 + 9*a3^2*a5' - 3*a4*a3*(5*a5 + 2*a4') + 3*a4^2*a3'"
_S91 = "35*a4^5 + 45*a4^4*a3' - 10*a4^3*a3*(11*a5 + 11*a4' + 3*a3'') + 18*a3^4*a5^(3)"
_S92 = "12*a4*a3^3*(9*a5'' + a4^(3) + 6*a4^2*a3^2*(33*a5' + 11*a4'' + a3^(3))^3)"
_S92_READING = "12*a4*a3^3*(9*a5'' + a4^(3)) + 6*a4^2*a3^2*(33*a5' + 11*a4'' + a3^(3))"

CATALOG: Tuple[CatalogEntry, ...] = (
    CatalogEntry("S0", RELATIVE, "a3", index=3),
    CatalogEntry("R0", RELATIVE, "3*a5*a3 - a4^2", index=8),
    CatalogEntry("S1", RELATIVE, "-a4 + a3'", index=4),
    CatalogEntry("S2", RELATIVE, "6*a3*a4' - a4^2 - 6*a4*a3'", index=8),
    CatalogEntry("S3", RELATIVE, _S3, index=12),
    CatalogEntry("I0", ABSOLUTE, "3*a5*a3 - a4^2", exponent=3, const=27, s0_power=8),
    CatalogEntry("I1", ABSOLUTE, "-a4 + a3'", exponent=3, s0_power=4),
    CatalogEntry("I2", ABSOLUTE, "6*a3*a4' - a4^2 - 6*a4*a3'", exponent=3, const=216, s0_power=8),
    CatalogEntry("I3", ABSOLUTE, _S3, const=9, s0_power=4),
    CatalogEntry("I4", ABSOLUTE, "7*a4^2 - 14*a4*a3' + 6*a3*a3''", exponent=3, const=216, s0_power=8),
    CatalogEntry("I5", ABSOLUTE, "4*a4^3 + 24*a4^2*a3' + 9*a3^2*a4'' - 9*a4*a3*(3*a4' + a3'')",
                 const=9, s0_power=4),
    CatalogEntry("I6", ABSOLUTE,
                 "-18*a4^4 - 18*a4^3*a3' + 18*a3^3*a5'' - 6*a4*a3^2*(11*a5' + 2*a4'')"
                 " + a4^2*a3*(55*a5 + 40*a4' + 6*a3'')",
                 exponent=3, const=5832, s0_power=16),
    CatalogEntry("I7", ABSOLUTE, "-14*a4^3 + 42*a4^2*a3' - 36*a4*a3*a3'' + 9*a3^2*a3^(3)",
                 const=9, s0_power=4),
    CatalogEntry("I8", ABSOLUTE,
                 "-2*a4^4 - 12*a4^3*a3' + 3*a4^2*a3*(5*a4' + 3*a3'') + 2*a3^3*a4^(3)"
                 " - 2*a4*a3^2*(5*a4'' + a3^(3))",
                 exponent=3, const=8, s0_power=16),
    CatalogEntry("I9", ABSOLUTE, f"{_S91} - {_S92}", exponent=3, const=5832, s0_power=20,
                 alternates=(f"{_S91} - {_S92_READING}",)),
)


def catalog_entry(name: str) -> CatalogEntry:
    for e in CATALOG:
        if e.name == name:
            return e
    raise KeyError(name)


def scalar_relation(printed: DiffPoly, other: DiffPoly) -> Optional[Fraction]:
    """c with printed == c * other, or None when not proportional."""
    if printed.is_zero() or other.is_zero():
        return None
    m, c = other.leading_term()
    pc = printed.coefficient(m)
    if not pc:
        return None
    ratio = Fraction(pc) / Fraction(c)
    return ratio if printed == other.scale(ratio) else None


@dataclass
class Repair:
    method: str
    space_dimension: int
    generator: Optional[DiffPoly]
    verified: bool
    relation: Optional[Fraction]
    expression: object = None
    flipped_terms: int = 0

    @property
    def summary(self) -> str:
        if self.generator is None:
            return "ansatz space trivial (dimension 0)"
        rel = (f"matches printed up to scalar {self.relation}" if self.relation is not None
               else "differs from printed")
        return f"{self.method}; space dimension {self.space_dimension}; {rel}"


@dataclass
class EntryVerdict:
    name: str
    printed: str
    generator: str
    kind: str
    verified: bool
    index: Fraction
    weight: object
    order: int
    residual: object
    repair: Optional[Repair] = None
    notes: List[str] = field(default_factory=list)

    @property
    def verdict(self) -> str:
        if self.verified:
            return "verified"
        if self.repair is not None and self.repair.verified:
            return "rejected; repaired"
        return "rejected"

    @property
    def sound(self) -> bool:
        return self.verified or (self.repair is not None and self.repair.verified)


def _sign_search(space: AnsatzSpace, candidate: DiffPoly) -> Optional[Tuple[DiffPoly, int]]:
    vec = space.coordinates(candidate)
    if vec is None:
        return None
    support = [i for i, x in enumerate(vec) if x]
    base = {i: vec[i] for i in support}
    for size in range(0, len(support) // 2 + 1):
        for flip in combinations(support, size):
            trial = dict(base)
            for i in flip:
                trial[i] = -trial[i]
            if space.contains_vector(trial):
                out = ZERO
                for i, x in trial.items():
                    out = out + space.monomials[i].scale(x)
                return out, size
    return None


def repair_entry(entry: CatalogEntry, v: VectorField, mu: Optional[DiffPoly] = None) -> Repair:
    w = entry.base_weight
    if Fraction(w).denominator != 1:
        raise DomainError(f"{entry.name}: target weight {w} is not an integer")
    w = int(w)
    printed = entry.base
    r = max(printed.max_order(), 0)
    space = ansatz_space(w, r, v, mu)
    if space.dimension == 0:
        return Repair("trivial", 0, None, True, None)
    gen = None
    method = None
    flips = 0
    if space.dimension == 1:
        gen, method = space.basis[0], "unique ansatz generator"
    else:
        candidates = [(parse(t), "alternate reading") for t in entry.alternates]
        candidates.append((printed.weight_component(w), "sign correction"))
        for cand, how in candidates:
            if space.contains(cand):
                gen, method = cand, how
                break
        if gen is None:
            for cand, how in candidates:
                hit = _sign_search(space, cand)
                if hit is not None:
                    gen, flips = hit
                    method = "sign correction" if how == "sign correction" else "alternate reading, sign correction"
                    break
        if gen is None:
            gen, method = space.project(printed.weight_component(w)), "least-squares projection"
            if gen.is_zero():
                gen, method = space.basis[0], "first ansatz basis vector"
    _, gen = gen.primitive()
    expr = entry.assemble(gen)
    if entry.kind == RELATIVE:
        ok = check_relative(gen, w, v, mu).verified
    else:
        ok = check_absolute(expr, v).verified
    return Repair(method, space.dimension, gen, ok, scalar_relation(printed, gen), expr, flips)


def verify_entry(entry: CatalogEntry, v: VectorField, generator_name: str = "",
                 mu: Optional[DiffPoly] = None, repair: bool = True) -> EntryVerdict:
    mu = multiplier(v) if mu is None else mu
    expr = entry.expression()
    notes = []
    if not entry.isobaric():
        notes.append(f"printed base is not isobaric of weight {entry.base_weight}")
    if entry.kind == RELATIVE:
        res = check_relative(expr, entry.index, v, mu)
        index = Fraction(entry.index)
    else:
        res = check_absolute(expr, v)
        index = Fraction(0)
    w = expr.weight() if isinstance(expr, DiffPoly) else entry.base.weight()
    verdict = EntryVerdict(entry.name, entry.printed, generator_name, entry.kind, res.verified, index,
                           w, expr.max_order(), res.residual, notes=notes)
    if not res.verified and repair:
        verdict.repair = repair_entry(entry, v, mu)
    return verdict


def verify_catalog(v: VectorField, generator_name: str = "", repair: bool = True) -> List[EntryVerdict]:
    mu = multiplier(v)
    return [verify_entry(e, v, generator_name, mu, repair) for e in CATALOG]


def resolved_catalog(v: Optional[VectorField] = None) -> Dict[str, Invariant]:
    """Sound catalog under v: verbatim entries where verified, repairs elsewhere."""
    v = arbiter_generator() if v is None else v
    return _resolved(v)


@lru_cache(maxsize=8)
def _resolved(v: VectorField) -> Dict[str, Invariant]:
    out = {}
    for verdict, entry in zip(verify_catalog(v), CATALOG):
        if verdict.verified:
            expr, prov = entry.expression(), "printed"
        elif verdict.repair is not None and verdict.repair.verified and verdict.repair.generator is not None:
            expr, prov = verdict.repair.expression, "ansatz"
        else:
            raise VerificationError(f"catalog entry {entry.name} has no verified form", verdict.residual)
        if entry.kind == RELATIVE:
            out[entry.name] = Invariant.relative(entry.name, expr, entry.index, prov)
        else:
            out[entry.name] = Invariant.absolute(entry.name, expr, prov)
    return out


def seeds(v: Optional[VectorField] = None) -> Dict[str, Invariant]:
    cat = resolved_catalog(v)
    return {k: cat[k] for k in ("S0", "R0", "S1", "S2", "S3")}


# -- fundamental sets --------------------------------------------------------------

def _verify_or_raise(inv: Invariant, v: VectorField, mu: DiffPoly):
    if inv.kind == ABSOLUTE:
        if isinstance(inv.expr, PowerProduct):
            res = check_power_product(inv.expr, v)
        else:
            res = check_absolute(inv.expr, v)
    elif isinstance(inv.expr, PowerProduct):
        res = check_power_product(inv.expr, v, inv.index, mu)
    else:
        res = check_relative(inv.expr, inv.index, v, mu)
    if not res.verified:
        raise VerificationError(f"{inv.name} failed verification", res.residual)
    return res


@dataclass
class FundamentalSet:
    order: int
    invariants: List[Invariant]
    rank: int


def fundamental_set(p: int, v: Optional[VectorField] = None, trials: int = 10,
                    seed: Optional[int] = None) -> FundamentalSet:
    """I0 and chi_k(S_j), j = 1..3, k = 0..p-1, each verified; rank checked."""
    if p < 1:
        raise DomainError("order must be at least 1")
    v = arbiter_generator() if v is None else v
    mu = multiplier(v)
    cat = resolved_catalog(v)
    s0 = cat["S0"]
    invs = [cat["I0"]]
    for k in range(p):
        for j in (1, 2, 3):
            s = cat[f"S{j}"]
            if k == 0:
                invs.append(chi0(s, s0, name=f"chi_0(S{j})"))
            else:
                invs.append(chi_seq(s, k, s0)[-1].renamed(f"chi_{k}(S{j})"))
    for inv in invs:
        _verify_or_raise(inv, v, mu)
    r = jacobian_rank(invs, trials=trials, seed=seed)
    if r != 3 * p + 1:
        raise VerificationError(f"fundamental set of order {p} has Jacobian rank {r}, expected {3 * p + 1}")
    return FundamentalSet(p, invs, r)


def relative_set(v: Optional[VectorField] = None, m: int = 24) -> Dict[str, List[Invariant]]:
    """Relative invariants of order <= 2 and the common-index set of index m."""
    v = arbiter_generator() if v is None else v
    mu = multiplier(v)
    cat = resolved_catalog(v)
    s0, r0 = cat["S0"], cat["R0"]
    seq = []
    for j in (1, 2, 3):
        s = cat[f"S{j}"]
        seq.append(s.renamed(f"phi_0(S{j},S0)"))
        seq.extend(phi_seq(s, 1, s0))
    for a, b in ((r0, s0), (s0, r0)):
        seq.append(a.renamed(f"phi_0({a.name},{b.name})"))
        seq.extend(phi_seq(a, 2, b))
    for inv in seq:
        _verify_or_raise(inv, v, mu)
    common = common_index_set(m, [r0, cat["S1"], cat["S2"], cat["S3"]], s0)
    for inv in common:
        _verify_or_raise(inv, v, mu)
    return {"sequence": seq, "common_index": common}


# -- invariant differentiation -------------------------------------------------------

def invariant_derivative(inv: Invariant, wrt: Invariant, v: Optional[VectorField] = None) -> Tuple[Invariant, CheckResult]:
    """D_x(inv) / D_x(wrt): a new absolute invariant, checker-verified."""
    v = arbiter_generator() if v is None else v
    num = inv.as_ratfunc().total_derivative(D_X)
    den = wrt.as_ratfunc().total_derivative(D_X)
    if den.is_zero():
        raise DomainError(f"{wrt.name} is constant; its derivative cannot normalise D_x")
    expr = num / den
    out = Invariant.absolute(f"D({inv.name})/D({wrt.name})", expr, "derived")
    return out, check_absolute(expr, v)


def derivative_formula_check(s1: Invariant, r0: Invariant, s0: Invariant) -> bool:
    """Compare D(I1)/D(I0) with (I1/I0)(R0/S1)(m S1 S0' - s S0 S1')/(k R0 S0' - s S0 R0').

    I0 = R0^s/S0^k and I1 = S1^s/S0^m, with s the index of S0.
    """
    s, k, m = int(s0.index), int(r0.index), int(s1.index)
    S0, R0, S1 = s0.expr, r0.expr, s1.expr
    I0 = RatFunc(R0 ** s, S0 ** k)
    I1 = RatFunc(S1 ** s, S0 ** m)
    lhs = I1.total_derivative(D_X) / I0.total_derivative(D_X)
    dS0, dS1, dR0 = D_X(S0), D_X(S1), D_X(R0)
    rhs = (I1 / I0) * RatFunc(R0, S1) * RatFunc(S1 * dS0 * m - S0 * dS1 * s, R0 * dS0 * k - S0 * dR0 * s)
    return lhs == rhs


# -- comparisons with printed material ----------------------------------------------------

PRINTED_PHI_DISPLAYS = {
    "phi_1(S1)": "4*(a4 - a3')*a3' + 3*a3*(-a4' + a3'')",
    "phi_2(S1)": "32*(a4 - a3')*a3'^2 - 3*a3*(9*a4'*a3' + (4*a4 - 13*a3')*a3'') + 9*a3^2*(a4'' - a3^(3))",
}


def display_comparisons(v: Optional[VectorField] = None) -> List[dict]:
    cat = resolved_catalog(v)
    seq = phi_seq(cat["S1"], 2, cat["S0"])
    out = []
    for (name, text), computed in zip(PRINTED_PHI_DISPLAYS.items(), seq):
        printed = parse(text)
        out.append({
            "name": name,
            "printed": text,
            "computed": computed.expr,
            "relation": scalar_relation(printed, computed.expr),
            "index": computed.index,
        })
    return out


def generator_discrepancies(a: VectorField, b: VectorField) -> List[Tuple[str, DiffPoly, DiffPoly]]:
    """Components where two generators differ: (component, a-part, b-part)."""
    out = []
    if a.f != b.f:
        out.append(("d/dx", a.f, b.f))
    for j in a.slots:
        if a.phis[j] != b.phis.get(j, ZERO):
            out.append((f"d/da{j}", a.phis[j], b.phis.get(j, ZERO)))
    return out
