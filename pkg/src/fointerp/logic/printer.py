"""Canonical text rendering of terms and formulas.

The output re-parses to the same AST (hint tags are dropped; embedded Lit
values re-parse to literal terms that evaluate to the same element).
Binary connectives and quantifier bodies are always parenthesized.
"""

from __future__ import annotations

from .ast import (
    And, App, Atom, Eq, Exists, ExistsUnique, FalseF, Forall, Iff, Implies,
    IntLit, Lit, MacroApp, Not, Or, Pow, RatLit, TrueF, Var,
)

INFIX_RELS = ("<=", "<", "|")

_ADD, _MUL, _UNARY, _ATOM = 0, 1, 2, 3


def print_term(t, level=_ADD):
    tt = type(t)
    if tt is Var:
        return t.name
    if tt is IntLit:
        if t.value < 0 and level > _ADD:
            return f"({t.value})"
        return str(t.value)
    if tt is RatLit:
        s = f"{t.value.numerator}/{t.value.denominator}"
        return f"({s})" if level > _MUL else s
    if tt is Lit:
        s = str(t.value)
        plain = s and all(c.isalnum() or c in "_./^" for c in s)
        return s if plain else f"({s})"
    if tt is Pow:
        s = f"{print_term(t.base, _ATOM)}^{t.exp}"
        return f"({s})" if level > _UNARY else s
    if tt is App:
        if t.op == "neg" and len(t.args) == 1:
            s = f"-{print_term(t.args[0], _ATOM)}"
            return f"({s})" if level > _UNARY else s
        if t.op in ("+", "-") and len(t.args) == 2:
            s = (f"{print_term(t.args[0], _ADD)} {t.op} "
                 f"{print_term(t.args[1], _MUL)}")
            return f"({s})" if level > _ADD else s
        if t.op == "*" and len(t.args) == 2:
            s = (f"{print_term(t.args[0], _MUL)} * "
                 f"{print_term(t.args[1], _UNARY)}")
            return f"({s})" if level > _MUL else s
        if not t.args:
            return t.op
        return f"{t.op}({', '.join(print_term(a) for a in t.args)})"
    raise TypeError(f"not a term: {t!r}")


def _quant_header(kw, q):
    if q.bound is not None:
        b = q.bound
        upper = print_term(b.term, _MUL)
        if b.low == 1:
            return f"{kw} 1 <= {q.var.name} <= {upper}"
        return f"{kw} {q.var.name} {b.op} {upper}"
    return f"{kw} {q.var.name}:{q.var.sort}"


def print_formula(f):
    ft = type(f)
    if ft is TrueF:
        return "true"
    if ft is FalseF:
        return "false"
    if ft is Atom:
        if f.rel in INFIX_RELS and len(f.args) == 2:
            return f"{print_term(f.args[0])} {f.rel} {print_term(f.args[1])}"
        return f"{f.rel}({', '.join(print_term(a) for a in f.args)})"
    if ft is MacroApp:
        return f"{f.name}({', '.join(print_term(a) for a in f.args)})"
    if ft is Eq:
        return f"{print_term(f.left)} = {print_term(f.right)}"
    if ft is Not:
        b = f.body
        bare = (type(b) in (TrueF, FalseF, Not, MacroApp)
                or (type(b) is Atom and b.rel not in INFIX_RELS))
        if bare:
            return f"!{print_formula(b)}"
        return f"!({print_formula(b)})"
    if ft is And:
        return f"({print_formula(f.left)} & {print_formula(f.right)})"
    if ft is Or:
        return f"({print_formula(f.left)} | {print_formula(f.right)})"
    if ft is Implies:
        return f"({print_formula(f.left)} -> {print_formula(f.right)})"
    if ft is Iff:
        return f"({print_formula(f.left)} <-> {print_formula(f.right)})"
    if ft is Forall:
        return f"{_quant_header('forall', f)} ({print_formula(f.body)})"
    if ft is Exists:
        return f"{_quant_header('exists', f)} ({print_formula(f.body)})"
    if ft is ExistsUnique:
        return f"{_quant_header('exists!', f)} ({print_formula(f.body)})"
    raise TypeError(f"not a formula: {f!r}")
