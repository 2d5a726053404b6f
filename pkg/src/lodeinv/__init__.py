"""Exact symbolic engine for relative and absolute invariants of linear ODEs."""

from .diffpoly import D_X, D_Z, DiffPoly, JetVar, Weight, coef
from .ratfunc import RatFunc
from .syntax import parse, parse_rational

__version__ = "0.1.0"

__all__ = ["D_X", "D_Z", "DiffPoly", "JetVar", "RatFunc", "Weight", "coef", "parse", "parse_rational"]
