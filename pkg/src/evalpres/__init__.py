"""Computable presentations of C*-algebras of continuous functions on compact metric spaces."""

from .cstar import PresentedCStar, VectorName, induce, norm
from .errors import EvalPresError
from .evalmap import ComputableMap, ProductName, evaluate
from .exactnum import Approximation, GaussianRational
from .space import PointName, PresentedSpace, RationalBall, builtin
from .starpoly import StarPoly, format_poly, index_of, parse_poly, poly_from_index

__all__ = [
    "Approximation", "ComputableMap", "EvalPresError", "GaussianRational", "PointName",
    "PresentedCStar", "PresentedSpace", "ProductName", "RationalBall", "StarPoly", "VectorName",
    "builtin", "evaluate", "format_poly", "index_of", "induce", "norm", "parse_poly",
    "poly_from_index",
]
