"""Exact rational polynomial arithmetic."""

from fractions import Fraction

from .mpoly import (
    ContextMismatchError,
    MPoly,
    Rational,
    UnknownVariableError,
    as_univariate,
    degree_in,
    evaluate,
    partial_derivative,
)
from .parse import PolySyntaxError, format_poly, parse_poly
from .unipoly import (
    UniPoly,
    isolate_real_roots,
    real_roots,
    root_bound,
    squarefree_part,
    sturm_count,
    sturm_sequence,
    uni_gcd,
)

__all__ = [
    "ContextMismatchError",
    "Fraction",
    "MPoly",
    "PolySyntaxError",
    "Rational",
    "UniPoly",
    "UnknownVariableError",
    "as_univariate",
    "degree_in",
    "evaluate",
    "format_poly",
    "isolate_real_roots",
    "parse_poly",
    "partial_derivative",
    "real_roots",
    "root_bound",
    "squarefree_part",
    "sturm_count",
    "sturm_sequence",
    "uni_gcd",
]
