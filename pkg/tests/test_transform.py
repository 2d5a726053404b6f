from fractions import Fraction

import pytest
import sympy as sp

from lodeinv.diffpoly import ZVAR, DiffPoly, ZDerivation, coef, comp, eta_var, param, spell, xi_var
from lodeinv.errors import DomainError
from lodeinv.ratfunc import RatFunc, as_ratfunc
from lodeinv.syntax import parse
from lodeinv.transform import (
    affine_family, composition_coherence, induced_generator, induced_generator_order5, moebius_family,
    schwarzian, transform_coefficients, transform_equation, verify_transformation_law,
)

zs = sp.Symbol("z")


def poly_to_sympy(p: DiffPoly, rename=None):
    rename = rename or {}
    out = sp.Integer(0)
    for mono, c in p.terms:
        c = Fraction(c)
        t = sp.Rational(c.numerator, c.denominator)
        for v, e in mono:
            name = spell(v)
            t *= sp.Symbol(rename.get(name, name)) ** e
        out += t
    return out


def to_sympy(r, rename=None):
    r = as_ratfunc(r)
    return poly_to_sympy(r.num, rename) / poly_to_sympy(r.den, rename)


def oracle_coefficients(n, xi_expr, eta_expr, coeffs, eps=None):
    """A_j of the transformed monic equation, straight from the chain rule.

    With ``eps`` given, every intermediate is truncated to first order in it.
    """
    def trunc(e):
        if eps is None:
            return e
        e = sp.expand(e)
        return e.coeff(eps, 0) + eps * e.coeff(eps, 1)

    w = sp.Function("w")(zs)
    xp = sp.diff(xi_expr, zs)
    if eps is None:
        inv_xp = 1 / xp
    else:
        p0, p1 = sp.expand(xp).coeff(eps, 0), sp.expand(xp).coeff(eps, 1)
        inv_xp = (1 - eps * p1 / p0) / p0
    ders = [eta_expr * w]
    for _ in range(n):
        ders.append(trunc(sp.diff(ders[-1], zs) * inv_xp))
    eq = ders[n] + sum(coeffs[j] * ders[n - j] for j in coeffs)
    ws = sp.symbols(f"W0:{n + 1}")
    for i in range(n, -1, -1):
        eq = eq.subs(sp.diff(w, zs, i) if i else w, ws[i])
    eq = sp.expand(eq)
    lead = eq.coeff(ws[n])
    if eps is None:
        return {j: sp.cancel(eq.coeff(ws[n - j]) / lead) for j in range(1, n + 1)}
    l0, l1 = lead.coeff(eps, 0), lead.coeff(eps, 1)
    inv_lead = (1 - eps * l1 / l0) / l0
    return {j: trunc(eq.coeff(ws[n - j]) * inv_lead) for j in range(1, n + 1)}


def replace_jets(expr, n):
    """Swap sympy derivatives of xi and eta for the engine's jet symbols."""
    for name, var in (("xi", xi_var), ("eta", eta_var)):
        fn = sp.Function(name)(zs)
        for k in range(n + 2, -1, -1):
            expr = expr.subs(sp.diff(fn, zs, k) if k else fn, sp.Symbol(spell(var(k))))
    return expr


@pytest.mark.parametrize("n", [1, 2, 3])
def test_chain_rule_oracle(n):
    xi, eta = sp.Function("xi")(zs), sp.Function("eta")(zs)
    abar = {j: sp.Symbol(f"abar{j}") for j in range(1, n + 1)}
    expected = oracle_coefficients(n, xi, eta, abar)
    ours = transform_coefficients(n)
    for j in range(1, n + 1):
        assert sp.cancel(replace_jets(expected[j], n) - to_sympy(ours.A[j])) == 0


def test_first_order_coefficient():
    a1 = transform_coefficients(1).A[1]
    assert a1 == RatFunc(parse("xi'*eta*abar1 + eta'"), parse("eta"))


def test_identity_transformation():
    teq = transform_equation(5, {j: comp(j) for j in (3, 4, 5)}, DiffPoly.constant(1), DiffPoly.constant(1),
                             ZDerivation(xi_prime=DiffPoly.constant(1)))
    for j in (3, 4, 5):
        assert teq.A[j] == comp(j)
    assert teq.A[1].is_zero() and teq.A[2].is_zero()


def test_order_out_of_range():
    with pytest.raises(DomainError):
        transform_coefficients(7)


def test_induced_generator_oracle():
    """First-order expansion of the finite action, done independently in sympy."""
    eps = sp.Symbol("eps")
    k1, k2, k3 = sp.symbols("k1 k2 k3")
    f = k1 + k2 * zs + k3 * zs ** 2
    abar = {j: sp.Symbol(f"a{j}") for j in (3, 4, 5)}
    A = oracle_coefficients(5, zs + eps * f, 1 + 2 * eps * sp.diff(f, zs), abar, eps)
    v = induced_generator_order5()
    rename = {"x": "z"}
    for j in (3, 4, 5):
        phi = -A[j].coeff(eps, 1)
        assert sp.expand(phi - poly_to_sympy(v.phis[j], rename)) == 0
    for j in (1, 2):
        assert A[j] == 0
    assert v.f == parse("k1 + k2*x + k3*x^2")


def test_induced_components():
    assert all(induced_generator(DiffPoly.constant(1)).phis[j].is_zero() for j in (3, 4, 5))
    v = induced_generator(parse("x"))
    assert v.phis[3] == parse("-3*a3")
    v2 = induced_generator(parse("x^2"))
    assert v2.phis[4] == parse("-8*x*a4 - 6*a3")
    assert v2.phis[5] == parse("-10*x*a5 - 4*a4")


def test_induced_linear_in_f():
    a, b = parse("x"), parse("x^2")
    lhs = induced_generator(a * 2 + b * 3)
    rhs = induced_generator(a).scale(2) + induced_generator(b).scale(3)
    assert lhs.f == rhs.f
    assert all(lhs.phis[j] == rhs.phis[j] for j in (3, 4, 5))


def test_induced_degree_limit():
    with pytest.raises(DomainError):
        induced_generator(parse("x^3"))


def test_schwarzian():
    d = ZDerivation()
    al, be, ga, de = (param(s) for s in ("alpha", "beta", "gamma", "delta"))
    moebius = RatFunc(al * ZVAR + be, ga * ZVAR + de)
    assert schwarzian(moebius, d).is_zero()
    assert schwarzian(RatFunc(ZVAR), d).is_zero()
    assert schwarzian(RatFunc(ZVAR * ZVAR), d) == RatFunc(DiffPoly.constant(-3), ZVAR * ZVAR * 2)
    for g in [ZVAR ** 3, ZVAR ** 3 + ZVAR, ZVAR ** 2 + ZVAR * 5]:
        assert not schwarzian(RatFunc(g), d).is_zero()


def test_law_for_s0():
    for fam in (moebius_family(), affine_family()):
        law = verify_transformation_law(coef(3), 3, fam)
        assert law.lower_terms_vanish
        assert law.holds_with_xi_prime and not law.holds_with_xi
        assert law.base == "dxi/dz"


def test_law_translation_factor_one():
    from lodeinv.transform import translation_family

    law = verify_transformation_law(parse("3*a5*a3 - a4^2"), 8, translation_family())
    assert law.verified


def test_law_wrong_index_fails():
    assert not verify_transformation_law(coef(3), 2, moebius_family()).verified


@pytest.mark.parametrize("n", [1, 2])
def test_composition_coherence(n):
    assert composition_coherence(n)


def test_composition_limit():
    with pytest.raises(DomainError):
        composition_coherence(4)
