"""Named derived notations expanded into plain formulas before use."""

from __future__ import annotations

from dataclasses import dataclass

from .ast import (
    BINARY, QUANTIFIERS, Atom, Eq, FalseF, Formula, MacroApp,
    Not, SortError, TrueF, free_vars, substitute,
)


class MacroError(Exception):
    pass


@dataclass(frozen=True)
class Macro:
    name: str
    params: tuple
    body: Formula

    def __post_init__(self):
        declared = {p.name for p in self.params}
        free = set(free_vars(self.body))
        extra = free - declared
        if extra:
            raise MacroError(f"macro {self.name}: undeclared free variables {sorted(extra)}")


def expand_macros(f, macros):
    """Expand all macro applications; macros may reference other macros but
    not recursively."""
    table = {m.name: m for m in macros} if not isinstance(macros, dict) else macros
    return _expand(f, table, ())


def _expand(f, table, stack):
    ft = type(f)
    if ft in (TrueF, FalseF, Atom, Eq):
        return f
    if ft is MacroApp:
        macro = table.get(f.name)
        if macro is None:
            raise MacroError(f"unknown macro {f.name}")
        if f.name in stack:
            raise MacroError(f"recursive macro {f.name} via {stack}")
        if len(f.args) != len(macro.params):
            raise MacroError(
                f"macro {f.name} takes {len(macro.params)} arguments, got {len(f.args)}")
        mapping = {}
        for p, a in zip(macro.params, f.args):
            asort = getattr(a, "sort", None)
            if asort is not None and asort != p.sort:
                raise SortError(f"macro {f.name}: parameter {p.name} has sort "
                                f"{p.sort}, argument has {asort}")
            mapping[p.name] = a
        return _expand(substitute(macro.body, mapping), table, stack + (f.name,))
    if ft is Not:
        return Not(_expand(f.body, table, stack))
    if ft in BINARY:
        return ft(_expand(f.left, table, stack), _expand(f.right, table, stack))
    if ft in QUANTIFIERS:
        return ft(f.var, _expand(f.body, table, stack), f.bound, f.tag)
    raise TypeError(f"not a formula: {f!r}")
