"""Multi-sorted first-order syntax: AST, parser, printer, macros."""

from .ast import (
    And, App, Atom, Bound, Eq, Exists, ExistsUnique, FalseF, Forall, Formula,
    HintTag, Iff, Implies, IntLit, Lit, MacroApp, Not, Or, Pow, RatLit,
    Signature, SortError, Term, TrueF, Var, alpha_eq, alpha_normalize,
    check_formula, check_term, free_vars, fresh_name, substitute,
    substitute_term,
)
from .macros import Macro, MacroError, expand_macros
from .parser import ParseError, parse, parse_term
from .printer import print_formula, print_term

__all__ = [
    "And", "App", "Atom", "Bound", "Eq", "Exists", "ExistsUnique", "FalseF",
    "Forall", "Formula", "HintTag", "Iff", "Implies", "IntLit", "Lit",
    "Macro", "MacroApp", "MacroError", "Not", "Or", "ParseError", "Pow",
    "RatLit", "Signature", "SortError", "Term", "TrueF", "Var", "alpha_eq",
    "alpha_normalize", "check_formula", "check_term", "expand_macros",
    "free_vars", "fresh_name", "parse", "parse_term", "print_formula",
    "print_term", "substitute", "substitute_term",
]
