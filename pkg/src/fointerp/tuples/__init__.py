"""Number<->tuple codecs and list superstructures."""

from .codecs import (
    CantorCodec, DigitsCodec, SwapCodec, TupleCodec,
    check_axioms, check_translation, entry_hints, get_codec,
    same_tuple_formula,
)
from .lists import (
    ListStructure, apply_permutation, concat, concat_formula, count_formula,
    count_occurrences, extensionality_body, fold_formula, fold_left,
    fold_product, fold_sum, is_permutation, is_permutation_of,
    make_list_structure, member, member_formula, permutation_covers,
    permutation_covers_formula, permutation_distinct,
    permutation_distinct_formula, permutation_formula, permutation_of_formula,
    standard_hints,
)

__all__ = [
    "CantorCodec", "DigitsCodec", "SwapCodec", "TupleCodec",
    "check_axioms", "check_translation", "entry_hints", "get_codec",
    "same_tuple_formula",
    "ListStructure", "apply_permutation", "concat", "concat_formula",
    "count_formula", "count_occurrences", "extensionality_body",
    "fold_formula", "fold_left", "fold_product", "fold_sum",
    "is_permutation", "is_permutation_of", "make_list_structure", "member",
    "member_formula", "permutation_covers", "permutation_covers_formula",
    "permutation_distinct", "permutation_distinct_formula",
    "permutation_formula", "permutation_of_formula", "standard_hints",
]
