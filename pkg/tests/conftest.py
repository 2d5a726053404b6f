from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import strategies as st

from lodeinv.diffpoly import DiffPoly, coef_var, comp_var, eta_var, param_var, x_var, xi_var, z_var
from lodeinv.liesym import ansatz_monomials

X_SIDE = [x_var(), param_var("k2")] + [coef_var(j, k) for j in (3, 4, 5) for k in range(3)]
Z_SIDE = [z_var()] + [xi_var(k) for k in range(1, 3)] + [eta_var(k) for k in range(2)] + \
    [comp_var(j, k) for j in (3, 4) for k in range(2)]

small_rationals = st.builds(
    Fraction,
    st.integers(-6, 6),
    st.integers(1, 4),
)


def monomials(pool):
    return st.lists(st.tuples(st.sampled_from(pool), st.integers(1, 2)), max_size=3)


def polys(pool=X_SIDE, max_terms=4):
    term = st.tuples(monomials(pool), small_rationals)

    def build(terms):
        acc = {}
        for mono, c in terms:
            exps = {}
            for v, e in mono:
                exps[v] = exps.get(v, 0) + e
            key = tuple(sorted(exps.items()))
            acc[key] = acc.get(key, 0) + c
        return DiffPoly(acc)

    return st.lists(term, max_size=max_terms).map(build)


def nonzero_polys(pool=X_SIDE, max_terms=3):
    return polys(pool, max_terms).filter(lambda p: not p.is_zero())


_MONOS = {w: ansatz_monomials(w, 2, (3, 4, 5)) for w in range(3, 10)}


@st.composite
def isobaric_polys(draw):
    w = draw(st.integers(3, 9))
    monos = _MONOS[w]
    picked = draw(st.lists(st.sampled_from(range(len(monos))), min_size=1, max_size=4, unique=True))
    out = DiffPoly()
    for i in picked:
        out = out + monos[i].scale(draw(st.integers(1, 9)) * draw(st.sampled_from((1, -1))))
    return out


# -- acceptance summary ------------------------------------------------------------

_OUTCOMES: dict = {}


def pytest_runtest_logreport(report):
    if "test_acceptance.py" not in report.nodeid or "::test_criterion_" not in report.nodeid:
        return
    name = report.nodeid.split("::")[-1]
    if report.when == "call" or report.failed or report.skipped:
        prev = _OUTCOMES.get(name)
        if prev != "FAIL":
            _OUTCOMES[name] = "PASS" if report.passed else ("SKIP" if report.skipped else "FAIL")


def pytest_terminal_summary(terminalreporter):
    if not _OUTCOMES:
        return
    terminalreporter.section("acceptance criteria")
    for name in sorted(_OUTCOMES):
        number = int(name.split("_")[2])
        title = " ".join(name.split("_")[3:])
        terminalreporter.write_line(f"criterion {number:2d} {_OUTCOMES[name]}: {title}")


@pytest.fixture(scope="session")
def printed():
    from lodeinv.halphen import printed_generator

    return printed_generator()


@pytest.fixture(scope="session")
def induced():
    from lodeinv.halphen import arbiter_generator

    return arbiter_generator()


@pytest.fixture(scope="session")
def catalog():
    from lodeinv.halphen import resolved_catalog

    return resolved_catalog()
