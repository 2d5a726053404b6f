from fractions import Fraction

import sympy as sp
from hypothesis import given, settings
from hypothesis import strategies as st

from lodeinv.linalg import Echelon, integer_normalize, nullspace, rank, solve_least_squares

matrices = st.integers(1, 5).flatmap(
    lambda cols: st.lists(st.lists(st.integers(-3, 3), min_size=cols, max_size=cols), min_size=1, max_size=5))


@settings(max_examples=150, deadline=None)
@given(matrices)
def test_rank_matches_sympy(m):
    assert rank(m) == sp.Matrix(m).rank()


@settings(max_examples=150, deadline=None)
@given(matrices)
def test_nullspace_annihilates(m):
    ncols = len(m[0])
    basis = nullspace([{i: v for i, v in enumerate(row) if v} for row in m], ncols)
    assert len(basis) == ncols - sp.Matrix(m).rank()
    for vec in basis:
        assert all(sum(Fraction(a) * b for a, b in zip(row, vec)) == 0 for row in m)


def test_integer_normalize():
    assert integer_normalize([Fraction(-1, 2), Fraction(3, 4), 0]) == [2, -3, 0]
    assert integer_normalize([0, 0]) == [0, 0]


def test_echelon_reports_rank_increase():
    e = Echelon()
    assert e.add({0: 1, 1: 2})
    assert not e.add({0: 2, 1: 4})
    assert e.add({1: 1})
    assert e.rank == 2


def test_least_squares_projection():
    basis = [[1, 0, 0], [0, 1, 0]]
    assert solve_least_squares(basis, [3, Fraction(1, 2), 7]) == [3, Fraction(1, 2)]
