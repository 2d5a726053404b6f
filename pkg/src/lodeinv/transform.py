"""Finite equivalence transformations x = xi(z), y = eta(z) w.

The transformed coefficients are computed symbolically: ``y^(k)`` is expanded
with ``d/dx = (1/xi') d/dz``, substituted into the monic equation, and the
result is divided by the coefficient of ``w^(n)``.  Coefficients a_j enter as
composed jets abar_j = a_j(xi(z)), so nothing ever leaves the
differential-polynomial ring.

Three families are used:

* fully symbolic jets of xi and eta (group-law checks for small n),
* the Moebius family xi = (alpha z + beta)/(gamma z + delta), eta = c xi'^((n-1)/2),
  which preserves the canonical form ``y^(n) + a3 y^(n-3) + ...``,
* the first-order family xi = z + eps f, eta = 1 + eps (n-1)/2 f', truncated
  at eps^2, which yields the infinitesimal generator.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterable, Mapping, Optional, Sequence

from .diffpoly import (
    COEF, INDEP, PARAM, D_Z, ONE, ZERO, ZVAR, Derivation, DiffPoly, JetVar, ZDerivation,
    coef, coef_var, comp, comp_var, eta, eta_var, param, param_var, x_var, xi, xi_var, z_var,
)
from .errors import DomainError
from .liesym import VectorField
from .ratfunc import RatFunc, as_ratfunc

__all__ = [
    "TransformedEquation", "transform_equation", "transform_coefficients", "schwarzian",
    "MoebiusFamily", "moebius_family", "affine_family", "LawResult", "verify_transformation_law",
    "induced_generator", "induced_generator_order5", "composition_coherence",
]

MAX_ORDER = 6
EPS = param_var("eps")


@dataclass(frozen=True)
class TransformedEquation:
    n: int
    A: Mapping[int, RatFunc]

    def __getitem__(self, j: int) -> RatFunc:
        return self.A[j]


def transform_equation(n: int, coeffs: Mapping[int, object], xi_prime, eta_expr, d: Derivation,
                       truncate: Optional[JetVar] = None) -> TransformedEquation:
    """Transform ``y^(n) + sum_j coeffs[j] y^(n-j) = 0`` under x = xi(z), y = eta w.

    ``xi_prime`` and ``eta_expr`` are expressions for xi'(z) and eta(z) in
    whatever variables ``d`` knows how to differentiate.  With ``truncate`` set
    to a parameter, every intermediate numerator and denominator is reduced
    modulo that parameter squared.
    """
    if not 1 <= n <= MAX_ORDER:
        raise DomainError(f"equation order {n} outside the supported range 1..{MAX_ORDER}")

    def tr(r: RatFunc) -> RatFunc:
        return r.truncate(truncate, 2) if truncate is not None else r

    inv_xp = tr(1 / as_ratfunc(xi_prime))
    # derivs[k][i] = coefficient of w^(i) in y^(k)
    derivs = [{0: tr(as_ratfunc(eta_expr))}]
    for _ in range(n):
        prev = derivs[-1]
        nxt: Dict[int, RatFunc] = {}
        for i, c in prev.items():
            dc = c.total_derivative(d)
            if not dc.is_zero():
                nxt[i] = nxt[i] + dc if i in nxt else dc
            nxt[i + 1] = nxt[i + 1] + c if i + 1 in nxt else c
        derivs.append({i: tr(c * inv_xp) for i, c in nxt.items()})
    full = {0: ONE}
    for j, a in coeffs.items():
        if not 1 <= j <= n:
            raise DomainError(f"coefficient slot {j} out of range for order {n}")
        full[j] = a
    collected: Dict[int, RatFunc] = {}
    for j, a in full.items():
        for i, c in derivs[n - j].items():
            term = tr(c * a)
            collected[i] = collected[i] + term if i in collected else term
    lead = collected[n]
    A = {}
    for j in range(1, n + 1):
        c = collected.get(n - j)
        A[j] = tr(c / lead) if c is not None else RatFunc(ZERO)
    return TransformedEquation(n, A)


def transform_coefficients(n: int, slots: Optional[Iterable[int]] = None) -> TransformedEquation:
    """Symbolic transformed coefficients in the jets of xi, eta and abar_j."""
    if not 1 <= n <= MAX_ORDER:
        raise DomainError(f"equation order {n} outside the supported range 1..{MAX_ORDER}")
    slots = range(1, n + 1) if slots is None else slots
    return transform_equation(n, {j: comp(j) for j in slots}, xi(1), eta(0), D_Z)


def schwarzian(g, d: Derivation = D_Z) -> RatFunc:
    """(g' g''' - 3/2 g''^2) / g'^2."""
    g = as_ratfunc(g)
    g1 = g.total_derivative(d)
    g2 = g1.total_derivative(d)
    g3 = g2.total_derivative(d)
    if g1.is_zero():
        raise DomainError("Schwarzian of a constant function")
    return (g1 * g3 - g2 * g2 * Fraction(3, 2)) / (g1 * g1)


# -- canonical-form-preserving families ----------------------------------------

@dataclass(frozen=True)
class MoebiusFamily:
    """A transformation family expressed in auxiliary parameters.

    ``xi_value`` is xi(z) itself, ``xi_prime`` its derivative and ``d`` a
    z-derivation knowing the auxiliary symbols.
    """

    name: str
    xi_value: RatFunc
    xi_prime: DiffPoly
    eta: DiffPoly
    d: Derivation


def _eta_power(xi_prime: DiffPoly, n: int) -> DiffPoly:
    if (n - 1) % 2:
        raise DomainError("eta = c xi'^((n-1)/2) needs odd n for a polynomial family")
    return param("c") * xi_prime ** ((n - 1) // 2)


def moebius_family(n: int = 5) -> MoebiusFamily:
    """xi = (alpha z + beta)/(gamma z + delta), gamma != 0.

    Written with det = alpha delta - beta gamma and u = 1/(gamma z + delta):
    xi = (alpha - det u)/gamma, xi' = det u^2, du/dz = -gamma u^2.
    """
    u = param("u")
    g = param("gamma")
    det = param("det")
    d = ZDerivation(rules={param_var("u"): -(g * u * u)}, xi_prime=det * u * u)
    xp = det * u * u
    xi_value = RatFunc(param("alpha") - det * u, g)
    return MoebiusFamily("moebius", xi_value, xp, _eta_power(xp, n), d)


def affine_family(n: int = 5) -> MoebiusFamily:
    """xi = alpha z + beta (the gamma = 0 members)."""
    alpha = param("alpha")
    d = ZDerivation(xi_prime=alpha)
    return MoebiusFamily("affine", RatFunc(alpha * ZVAR + param("beta")), alpha, _eta_power(alpha, n), d)


def translation_family(n: int = 5) -> MoebiusFamily:
    d = ZDerivation(xi_prime=ONE)
    return MoebiusFamily("translation", RatFunc(ZVAR + param("beta")), ONE, param("c"), d)


@dataclass(frozen=True)
class LawResult:
    family: str
    index: int
    lower_terms_vanish: bool
    holds_with_xi_prime: bool
    holds_with_xi: bool
    residual: RatFunc

    @property
    def verified(self) -> bool:
        return self.lower_terms_vanish and self.holds_with_xi_prime

    @property
    def base(self) -> str:
        if self.holds_with_xi_prime and not self.holds_with_xi:
            return "dxi/dz"
        if self.holds_with_xi and not self.holds_with_xi_prime:
            return "xi"
        if self.holds_with_xi:
            return "both"
        return "neither"


def _composed(S: DiffPoly) -> DiffPoly:
    return S.substitute({v: comp(v.j, v.k) for v in S.variables() if v.kind == COEF})


def verify_transformation_law(S: DiffPoly, m: int, family: Optional[MoebiusFamily] = None,
                              n: int = 5, slots: Sequence[int] = (3, 4, 5)) -> LawResult:
    """Compare S(A, A', ...) with (xi')^m S(abar) and with xi^m S(abar), exactly."""
    fam = family or moebius_family(n)
    teq = transform_equation(n, {j: comp(j) for j in slots}, fam.xi_prime, fam.eta, fam.d)
    lower = all(teq.A[j].is_zero() for j in range(1, n + 1) if j not in slots)
    needed: Dict[int, int] = {}
    for v in S.variables():
        if v.kind != COEF:
            raise DomainError("invariant must be a polynomial in coefficient jets only")
        needed[v.j] = max(needed.get(v.j, 0), v.k)
    images = {}
    for j, kmax in needed.items():
        cur = teq.A[j]
        for k in range(kmax + 1):
            images[coef_var(j, k)] = cur
            if k < kmax:
                cur = cur.total_derivative(fam.d)
    lhs = as_ratfunc(S.substitute(images))
    base = RatFunc(_composed(S))
    with_prime = base * as_ratfunc(fam.xi_prime) ** m
    with_xi = base * fam.xi_value ** m
    residual = lhs - with_prime
    return LawResult(fam.name, m, lower, residual.is_zero(), (lhs - with_xi).is_zero(), residual)


# -- infinitesimal generator ------------------------------------------------------

def _first_order(r: RatFunc) -> RatFunc:
    """d/d eps at eps = 0 of a rational function in eps."""
    n0, n1 = r.num.truncate(EPS, 1), r.num.partial(EPS).truncate(EPS, 1)
    d0, d1 = r.den.truncate(EPS, 1), r.den.partial(EPS).truncate(EPS, 1)
    return RatFunc(n1 * d0 - n0 * d1, d0 * d0)


def induced_generator(f: DiffPoly, n: int = 5, slots: Sequence[int] = (3, 4, 5)) -> VectorField:
    """Generator with d/dx part f read off the first-order transformation.

    phi_j = -(d/d eps) A_j at eps = 0 for xi = z + eps f(z),
    eta = 1 + eps (n-1)/2 f'(z); the sign makes the x-flow +f.
    """
    xv = x_var()
    for v in f.variables():
        if v.kind not in (INDEP, PARAM) or v == EPS:
            raise DomainError(f"f may only depend on x and group parameters, not {v!r}")
    if f.degree_in(xv) > 2:
        raise DomainError("only f of degree <= 2 in x preserves the canonical form")
    fz = f.substitute({xv: ZVAR})
    eps = DiffPoly.var(EPS)
    fp = D_Z(fz)
    xi_prime = ONE + eps * fp
    eta_expr = ONE + eps * fp * Fraction(n - 1, 2)
    teq = transform_equation(n, {j: comp(j) for j in slots}, xi_prime, eta_expr, D_Z, truncate=EPS)
    back = {z_var(): DiffPoly.var(xv)}
    back.update({comp_var(j): coef(j) for j in slots})
    phis = {}
    for j in range(1, n + 1):
        dj = _first_order(teq.A[j])
        if not dj.is_polynomial():
            raise DomainError(f"first-order part of A{j} is not polynomial")
        poly = (-dj.as_poly()).substitute(back)
        if j in slots:
            phis[j] = poly
        elif not poly.is_zero():
            raise DomainError(f"the family does not preserve the vanishing of a{j}")
    return VectorField(f, phis, n, tuple(slots))


def induced_generator_order5() -> VectorField:
    """k1 X(1) + k2 X(x) + k3 X(x^2) for the order-5 canonical form."""
    X = DiffPoly.var(x_var())
    parts = [(param("k1"), ONE), (param("k2"), X), (param("k3"), X * X)]
    total = None
    for k, f in parts:
        g = induced_generator(f).scale(k)
        total = g if total is None else total + g
    return total


# -- group law ---------------------------------------------------------------------

def composition_coherence(n: int = 3) -> bool:
    """Transform by (xi1, eta1) then (xi2, eta2) and by the composite; compare exactly."""
    if n > 3:
        raise DomainError("composition check is limited to n <= 3")
    first = transform_coefficients(n)
    p1 = {k: param_var(f"xi1_{k}") for k in range(n + 3)}
    q1 = {k: param_var(f"eta1_{k}") for k in range(n + 3)}
    rename = {xi_var(k): DiffPoly.var(p1[k]) for k in range(n + 2)}
    rename.update({eta_var(k): DiffPoly.var(q1[k]) for k in range(n + 2)})
    composite_prime = DiffPoly.var(p1[1]) * xi(1)
    rules = {}
    for k in range(n + 2):
        rules[p1[k]] = xi(1) * DiffPoly.var(p1[k + 1])
        rules[q1[k]] = xi(1) * DiffPoly.var(q1[k + 1])
    dt = ZDerivation(rules=rules, xi_prime=composite_prime)
    B = {j: first.A[j].substitute(rename) for j in range(1, n + 1)}
    second = transform_equation(n, B, xi(1), eta(0), dt)
    direct = transform_equation(n, {j: comp(j) for j in range(1, n + 1)}, composite_prime,
                                DiffPoly.var(q1[0]) * eta(0), dt)
    return all(second.A[j] == direct.A[j] for j in range(1, n + 1))
