"""Interpretations: codes, formula translation, and interpreted structures."""

from .code import (
    CodeError, DefinedFormula, InterpretationCode, TupleSpec, identity_code,
)
from .quotient import (
    CoordinateMap, InterpretationError, QuotientStructure, block_product,
    build_quotient,
)
from .translate import TranslationError, TranslationResult, compose, translate

__all__ = [
    "CodeError", "DefinedFormula", "InterpretationCode", "TupleSpec",
    "identity_code", "CoordinateMap", "InterpretationError",
    "QuotientStructure", "block_product", "build_quotient",
    "TranslationError", "TranslationResult", "compose", "translate",
]
