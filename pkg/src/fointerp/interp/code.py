"""Interpretation codes: one structure described inside another.

A code packages, for a source signature and a target signature, the data
of an interpretation: every source sort is represented by fixed-width
tuples of target elements cut out by a domain formula and identified by
an equivalence formula, and every source symbol (constant, function,
relation) is given by a formula over the target that defines its graph on
those tuples. Codes may take parameters: distinguished free variables of
every member formula, bound to concrete target elements at use time.

All member formulas are stored with explicitly declared argument
variables (`DefinedFormula`), so nothing depends on naming conventions:
instantiation substitutes terms for the declared names and leaves the
parameter variables free.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from ..logic.ast import (
    App, Atom, Eq, IntLit, Lit, Signature, SortError, TrueF, Var,
    check_formula, free_vars, substitute,
)

__all__ = [
    "CodeError", "DefinedFormula", "TupleSpec", "InterpretationCode",
    "identity_code",
]


class CodeError(ValueError):
    """A code is malformed: bad arity, unknown sort, ill-sorted formula."""


@dataclass(frozen=True)
class DefinedFormula:
    """A formula with an explicit ordered tuple of argument variables.

    Argument variables carry their sorts; any other free variables must
    be parameters declared by the owning code.
    """

    args: tuple
    formula: object

    def __post_init__(self):
        names = [v.name for v in self.args]
        if len(set(names)) != len(names):
            raise CodeError(f"duplicate argument names: {names}")

    @property
    def arg_names(self):
        return tuple(v.name for v in self.args)

    @property
    def arg_sorts(self):
        return tuple(v.sort for v in self.args)

    def apply(self, terms):
        """Substitute terms for the declared arguments, in order."""
        if len(terms) != len(self.args):
            raise CodeError(
                f"expected {len(self.args)} arguments, got {len(terms)}")
        return substitute(self.formula, dict(zip(self.arg_names, terms)))


@dataclass(frozen=True)
class TupleSpec:
    """How one source sort is represented: coordinate sorts, domain, equality.

    `domain` takes one block of arguments (the tuple), `equiv` takes two
    blocks (left tuple then right tuple).
    """

    sorts: tuple
    domain: DefinedFormula
    equiv: DefinedFormula

    @property
    def width(self):
        return len(self.sorts)


def _symbol_label(kind, key):
    name, extra = key
    return f"{kind} {name}{extra if kind != 'const' else ':' + extra}"


@dataclass(frozen=True)
class InterpretationCode:
    """All formulas of one interpretation, validated against both signatures.

    specs:      source sort -> TupleSpec
    constants:  (name, sort) -> DefinedFormula over one block
    functions:  (name, argsorts) -> DefinedFormula over arg blocks + result
    relations:  (name, argsorts) -> DefinedFormula over arg blocks
    params:     ordered target-sorted variables, free in every formula
    numerals:   (value, sort) -> DefinedFormula over one block, defining
                the classes of 0 and 1 in each integer-bearing sort, for
                translating integer literals
    literals:   source literal name -> DefinedFormula over one block
    witnesses:  optional native candidate generators, keyed
                ("equiv", sort), ("const", name, sort),
                ("fun", name, argsorts), ("numeral", value, sort) or
                ("literal", name); each maps (structure, params,
                *arg blocks) to an iterable of candidate result blocks.
                Candidates are always verified against the defining
                formula before use, so they accelerate searches but
                cannot change any verdict.
    """

    name: str
    source: Signature
    target: Signature
    specs: dict
    constants: dict = field(default_factory=dict)
    functions: dict = field(default_factory=dict)
    relations: dict = field(default_factory=dict)
    params: tuple = ()
    numerals: dict = field(default_factory=dict)
    literals: dict = field(default_factory=dict)
    witnesses: dict = field(default_factory=dict)

    def __post_init__(self):
        for sort in self.specs:
            if sort not in self.source.sorts:
                raise CodeError(f"spec for unknown source sort {sort}")
        for sort in self.source.sorts:
            if sort not in self.specs:
                raise CodeError(f"missing spec for source sort {sort}")
        for v in self.params:
            if v.sort not in self.target.sorts:
                raise CodeError(f"parameter {v.name}: unknown target sort "
                                f"{v.sort}")
        names = [v.name for v in self.params]
        if len(set(names)) != len(names):
            raise CodeError(f"duplicate parameter names: {names}")

        for sort, spec in self.specs.items():
            for s in spec.sorts:
                if s not in self.target.sorts:
                    raise CodeError(
                        f"spec {sort}: unknown target sort {s}")
            self._check(spec.domain, spec.sorts, f"domain of {sort}")
            self._check(spec.equiv, spec.sorts * 2, f"equiv of {sort}")

        for (name, sort), df in self.constants.items():
            if (name, ()) not in self.source.functions:
                raise CodeError(f"constant {name} not in source signature")
            self._check(df, self._block(sort), f"const {name}")
        for (name, argsorts), df in self.functions.items():
            res = self.source.fn_result(name, argsorts)
            if res is None:
                raise CodeError(
                    f"function {name}{argsorts} not in source signature")
            expect = sum((self._block(s) for s in argsorts), ())
            self._check(df, expect + self._block(res),
                        f"fun {name}{argsorts}")
        for (name, argsorts), df in self.relations.items():
            if not self.source.has_relation(name, argsorts):
                raise CodeError(
                    f"relation {name}{argsorts} not in source signature")
            expect = sum((self._block(s) for s in argsorts), ())
            self._check(df, expect, f"rel {name}{argsorts}")

        for k, df in self.numerals.items():
            if k not in (0, 1):
                raise CodeError(f"numeral formulas only for 0 and 1, got {k}")
            ns = self.source.number_sort
            if ns is None:
                raise CodeError("numeral formula but source has no "
                                "number sort")
            self._check(df, self._block(ns), f"numeral {k}")
        for name, df in self.literals.items():
            entry = (self.source.literals or {}).get(name)
            if entry is None:
                raise CodeError(f"literal {name} not in source signature")
            self._check(df, self._block(entry[0]), f"literal {name}")

    # -- helpers ----------------------------------------------------------

    def _block(self, sort):
        spec = self.specs.get(sort)
        if spec is None:
            raise CodeError(f"no spec for source sort {sort}")
        return spec.sorts

    def _check(self, df, expected_sorts, label):
        if not isinstance(df, DefinedFormula):
            raise CodeError(f"{label}: expected a DefinedFormula")
        if df.arg_sorts != tuple(expected_sorts):
            raise CodeError(
                f"{label}: argument sorts {df.arg_sorts}, "
                f"expected {tuple(expected_sorts)}")
        env = {v.name: v.sort for v in df.args}
        allowed = set(env)
        for v in self.params:
            env[v.name] = v.sort
            allowed.add(v.name)
        try:
            check_formula(df.formula, self.target, env)
        except SortError as e:
            raise CodeError(f"{label}: {e}") from e
        extra = set(free_vars(df.formula)) - allowed
        if extra:
            raise CodeError(
                f"{label}: undeclared free variables {sorted(extra)}")

    # -- metadata ----------------------------------------------------------

    @property
    def dims(self):
        """Tuple width per source sort."""
        return {sort: spec.width for sort, spec in self.specs.items()}

    @property
    def dim(self):
        """The common tuple width, when every source sort has the same."""
        widths = set(self.dims.values())
        if len(widths) != 1:
            raise CodeError(f"{self.name}: widths differ per sort "
                            f"{self.dims}")
        return widths.pop()

    @property
    def param_dim(self):
        return len(self.params)

    @property
    def param_names(self):
        return tuple(v.name for v in self.params)

    def param_env(self, values):
        if len(values) != len(self.params):
            raise CodeError(
                f"{self.name} takes {len(self.params)} parameters, "
                f"got {len(values)}")
        return {v.name: val for v, val in zip(self.params, values)}

    def symbol_formula(self, kind, key):
        table = {"const": self.constants, "fun": self.functions,
                 "rel": self.relations}[kind]
        df = table.get(key)
        if df is None:
            raise CodeError(f"{self.name} has no {_symbol_label(kind, key)}")
        return df


def identity_code(sig, name="identity"):
    """The width-1 code of a structure in itself: domain is everything,
    equivalence is equality, and every symbol is defined by its own atom."""
    specs = {}
    for sort in sig.sorts:
        x = Var("x1", sort)
        z = Var("z1", sort)
        specs[sort] = TupleSpec(
            sorts=(sort,),
            domain=DefinedFormula((x,), TrueF()),
            equiv=DefinedFormula((x, z), Eq(x, z)),
        )
    constants = {}
    functions = {}
    for (fname, argsorts), res in sig.functions.items():
        if argsorts == ():
            x = Var("x1", res)
            constants[(fname, res)] = DefinedFormula(
                (x,), Eq(x, App(fname, (), res)))
            continue
        args = tuple(Var(f"a{i + 1}", s) for i, s in enumerate(argsorts))
        out = Var("b1", res)
        functions[(fname, argsorts)] = DefinedFormula(
            args + (out,), Eq(App(fname, args, res), out))
    relations = {}
    for (rname, argsorts) in sig.relations:
        args = tuple(Var(f"a{i + 1}", s) for i, s in enumerate(argsorts))
        relations[(rname, argsorts)] = DefinedFormula(
            args, Atom(rname, args))
    numerals = {}
    if sig.number_sort is not None:
        for k in (0, 1):
            x = Var("x1", sig.number_sort)
            numerals[k] = DefinedFormula(
                (x,), Eq(x, IntLit(k, sig.number_sort)))
    literals = {}
    for lname, (lsort, value) in (sig.literals or {}).items():
        x = Var("x1", lsort)
        literals[lname] = DefinedFormula((x,), Eq(x, Lit(value, lsort)))
    return InterpretationCode(
        name=name, source=sig, target=sig, specs=specs,
        constants=constants, functions=functions, relations=relations,
        numerals=numerals, literals=literals,
    )
