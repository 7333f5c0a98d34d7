"""Concrete structures: numbers, finite fields, polynomial and Laurent rings."""

from .base import EvalError, FiniteStructure, Structure
from .laurent import Laurent, MLaurent
from .polynomials import (MINUS_INF, KRONECKER_DEGREE_CAP, MPoly, Poly,
                          eisenstein_irreducible, factor, format_poly,
                          is_irreducible, poly_gcd, poly_gcd_bezout)
from .registry import get_structure, parse_element, structure_names
from .rings import QQ, ZZ, gf

__all__ = [
    "EvalError", "FiniteStructure", "Structure",
    "Laurent", "MLaurent",
    "MINUS_INF", "KRONECKER_DEGREE_CAP", "MPoly", "Poly",
    "eisenstein_irreducible", "factor", "format_poly", "is_irreducible",
    "poly_gcd", "poly_gcd_bezout",
    "get_structure", "parse_element", "structure_names",
    "QQ", "ZZ", "gf",
]
