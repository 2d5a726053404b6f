from fractions import Fraction

import pytest
import sympy as sp

from lodeinv import config
from lodeinv.diffpoly import coef, coef_var
from lodeinv.errors import JetOrderLimitError, SamplingError
from lodeinv.liesym import (
    Invariant, ansatz_monomials, ansatz_space, check_absolute, check_relative, count_report,
    find_relative_invariants, gamma_formula, infer_index, invariant_count, jacobian_rank, multiplier,
    prolong,
)
from lodeinv.syntax import parse, parse_rational

MU = parse("k2 + 2*k3*x")


def sympy_zeta(v, j, k):
    """Prolongation recursion evaluated with sympy functions a_j(x)."""
    x = sp.Symbol("x")
    k1, k2, k3 = sp.symbols("k1 k2 k3")
    a = {i: sp.Function(f"a{i}")(x) for i in v.slots}

    def conv(p):
        out = 0
        for mono, c in p.terms:
            t = sp.Rational(c.numerator, c.denominator) if isinstance(c, Fraction) else sp.Integer(c)
            for var, e in mono:
                if var.kind == coef_var(3).kind:
                    t *= sp.diff(a[var.j], x, var.k) ** e
                elif var.name == "x":
                    t *= x ** e
                else:
                    t *= sp.Symbol(var.name) ** e
            out += t
        return out

    f = conv(v.f)
    z = conv(v.phis[j])
    for i in range(1, k + 1):
        z = sp.diff(z, x) - sp.diff(a[j], x, i) * sp.diff(f, x)
    return sp.expand(z), conv


def test_prolongation_matches_sympy(printed):
    for j, k in [(3, 1), (4, 2), (5, 3)]:
        expected, conv = sympy_zeta(printed, j, k)
        assert sp.expand(conv(printed.zeta(j, k)) - expected) == 0


def test_multiplier(printed, induced):
    assert multiplier(printed) == MU
    assert multiplier(induced) == MU


def test_s0_relative_under_both(printed, induced):
    assert check_relative(coef(3), 3, printed).verified
    assert check_relative(coef(3), 3, induced).verified
    assert not check_relative(coef(3), 4, induced).verified


def test_printed_r0_rejected_induced_accepts(printed, induced):
    r0 = parse("3*a5*a3 - a4^2")
    res = check_relative(r0, 8, printed)
    assert not res.verified
    assert res.residual == parse("-24*k3*a3*a4")
    assert check_relative(r0, 8, induced).verified


def test_infer_index(induced):
    assert infer_index(parse("3*a5*a3 - a4^2"), induced) == 8
    assert infer_index(parse("a3 + a4"), induced) is None


def test_absolute_rational(induced):
    assert check_absolute(parse_rational("(-a4 + a3')^3/a3^4"), induced).verified
    assert not check_absolute(parse_rational("(-a4 + a3')^3/a3^3"), induced).verified


@pytest.mark.parametrize("w,r,size", [(8, 0, 2), (4, 1, 2), (8, 1, 5), (12, 1, 11), (8, 2, 6),
                                      (12, 2, 19), (16, 2, 53), (12, 3, 28), (16, 3, 85), (20, 3, 227)])
def test_ansatz_sizes(w, r, size):
    assert len(ansatz_monomials(w, r, (3, 4, 5))) == size


def test_ansatz_dimensions(printed, induced):
    assert ansatz_space(8, 1, printed).dimension == 3
    assert ansatz_space(12, 1, printed).dimension == 5
    assert find_relative_invariants(4, 1, induced) == [parse("a3' - a4")]
    assert find_relative_invariants(8, 0, induced) == [parse("3*a3*a5 - a4^2")]


def test_ansatz_limits(induced):
    with config.overridden(max_ansatz_weight=10):
        with pytest.raises(JetOrderLimitError):
            ansatz_space(12, 1, induced)
    with config.overridden(max_ansatz_size=10):
        with pytest.raises(JetOrderLimitError):
            ansatz_space(12, 1, induced)


def test_counts(printed, induced):
    for v in (printed, induced):
        assert [invariant_count(v, p, seed=1) for p in range(4)] == [1, 4, 7, 10]
    assert [gamma_formula(5, p) for p in (1, 2, 3)] == [6, 3, 0]
    assert not count_report(induced, 2)["consistent"]


def test_jacobian_rank_detects_dependence():
    i1 = Invariant.absolute("a", parse_rational("a4^2/a3"))
    i2 = Invariant.absolute("b", parse_rational("a4^4/a3^2"))
    i3 = Invariant.absolute("c", parse_rational("a5/a3"))
    assert jacobian_rank([i1, i2, i3], seed=3) == 2


def test_jacobian_rank_all_singular():
    inv = Invariant.absolute("a", parse_rational("a4/a3"))
    with pytest.raises(SamplingError):
        jacobian_rank([inv], sampler=lambda: {coef_var(3): 0, coef_var(4): 1}, trials=3)


def test_prolongation_order_limit(induced):
    with config.overridden(max_jet_order=2):
        with pytest.raises(JetOrderLimitError):
            prolong(induced, 3)
