"""Exact sparse linear algebra over Q (row echelon, nullspace, rank)."""

from __future__ import annotations

from fractions import Fraction
from math import gcd, lcm
from typing import Dict, Iterable, List, Sequence

Row = Dict[int, Fraction]


class Echelon:
    """Incrementally maintained reduced row echelon form.

    Rows are sparse dicts ``column -> value``.  Every pivot row has a 1 in its
    pivot column and zeros in all other pivot columns.
    """

    def __init__(self):
        self.pivots: Dict[int, Row] = {}

    @property
    def rank(self) -> int:
        return len(self.pivots)

    def reduce(self, row: Row) -> Row:
        r = {c: Fraction(v) for c, v in row.items() if v}
        for c in [c for c in r if c in self.pivots]:
            f = r.get(c)
            if not f:
                continue
            for cc, vv in self.pivots[c].items():
                nv = r.get(cc, 0) - f * vv
                if nv:
                    r[cc] = nv
                else:
                    r.pop(cc, None)
        return r

    def add(self, row: Row) -> bool:
        """Insert a row; returns True when it increased the rank."""
        r = self.reduce(row)
        if not r:
            return False
        p = min(r)
        inv = 1 / r[p]
        r = {c: v * inv for c, v in r.items()}
        for other in self.pivots.values():
            f = other.get(p)
            if f:
                for cc, vv in r.items():
                    nv = other.get(cc, 0) - f * vv
                    if nv:
                        other[cc] = nv
                    else:
                        other.pop(cc, None)
        self.pivots[p] = r
        return True

    def nullspace(self, ncols: int) -> List[List[Fraction]]:
        basis = []
        for free in range(ncols):
            if free in self.pivots:
                continue
            v = [Fraction(0)] * ncols
            v[free] = Fraction(1)
            for p, row in self.pivots.items():
                v[p] = -row.get(free, 0)
            basis.append(v)
        return basis


def nullspace(rows: Iterable[Row], ncols: int) -> List[List[Fraction]]:
    e = Echelon()
    for r in rows:
        e.add(r)
    return e.nullspace(ncols)


def rank(matrix: Sequence[Sequence]) -> int:
    e = Echelon()
    for r in matrix:
        e.add({i: v for i, v in enumerate(r) if v})
    return e.rank


def integer_normalize(v: Sequence) -> List[int]:
    """Scale to integers with gcd 1 and first nonzero entry positive."""
    fr = [Fraction(x) for x in v]
    den = 1
    for x in fr:
        den = lcm(den, x.denominator)
    ints = [int(x * den) for x in fr]
    g = 0
    for x in ints:
        g = gcd(g, x)
    if g == 0:
        return ints
    lead = next(x for x in ints if x)
    if lead < 0:
        g = -g
    return [x // g for x in ints]


def solve_least_squares(basis: Sequence[Sequence], target: Sequence) -> List[Fraction]:
    """Exact coefficients c minimising ||sum c_i basis_i - target||_2.

    ``basis`` must be linearly independent.
    """
    k = len(basis)
    gram = [[sum(Fraction(a) * b for a, b in zip(basis[i], basis[j])) for j in range(k)] for i in range(k)]
    rhs = [sum(Fraction(a) * b for a, b in zip(basis[i], target)) for i in range(k)]
    # Gauss-Jordan on the (positive definite) Gram system
    aug = [row[:] + [rhs[i]] for i, row in enumerate(gram)]
    for col in range(k):
        piv = next(r for r in range(col, k) if aug[r][col])
        aug[col], aug[piv] = aug[piv], aug[col]
        inv = 1 / aug[col][col]
        aug[col] = [x * inv for x in aug[col]]
        for r in range(k):
            if r != col and aug[r][col]:
                f = aug[r][col]
                aug[r] = [x - f * y for x, y in zip(aug[r], aug[col])]
    return [aug[i][k] for i in range(k)]
