"""Compiling source-language formulas into target-language formulas.

Given a code, every formula over the source signature becomes a formula
over the target signature: each source variable turns into a block of
target variables, equality routes through the code's equivalence
formula, every atom routes through the corresponding symbol formula, and
quantifiers are relativized to the domain formula. The soundness
contract: with the source structure isomorphic to the code's quotient,
the source satisfies the formula at elements a1..am exactly when the
target satisfies the translation at representative blocks of a1..am
(with the code's parameters bound).

Composition of two codes is translation applied to every member formula
of the outer code, which multiplies tuple widths and combines parameter
lists.
"""

from __future__ import annotations

from dataclasses import dataclass

from ..logic.ast import (
    BINARY, QUANTIFIERS, And, App, Atom, Eq, Exists, ExistsUnique,
    FalseF, Forall, Implies, IntLit, Lit, MacroApp, Not, Pow, RatLit,
    TrueF, Var, all_var_names, free_vars, fresh_name, substitute,
)
from ..logic.macros import expand_macros
from .code import CodeError, DefinedFormula, InterpretationCode, TupleSpec

__all__ = ["TranslationError", "TranslationResult", "translate", "compose"]

LITERAL_UNFOLD_CAP = 64


class TranslationError(ValueError):
    """The formula uses a construct the code cannot express."""


@dataclass(frozen=True)
class TranslationResult:
    """A translated formula and the bookkeeping to evaluate it.

    blocks maps each free source variable to its tuple of target
    variables; params are the code's parameter variables (free in the
    formula).
    """

    formula: object
    blocks: dict
    params: tuple

    def env(self, assignment, param_values=()):
        """Build an evaluation environment from a source-variable
        assignment (name -> block tuple) and parameter values."""
        env = {}
        for name, block in self.blocks.items():
            values = assignment[name]
            if len(values) != len(block):
                raise TranslationError(
                    f"variable {name}: block of width {len(block)} "
                    f"needs {len(block)} values, got {len(values)}")
            for v, val in zip(block, values):
                env[v.name] = val
        if len(param_values) != len(self.params):
            raise TranslationError(
                f"expected {len(self.params)} parameters, "
                f"got {len(param_values)}")
        for v, val in zip(self.params, param_values):
            env[v.name] = val
        return env


# ---------------------------------------------------------------------------
# source-level desugaring


def _desugar(f, sig):
    """Rewrite exists-unique, bounded quantifiers, powers, and wide
    integer literals into the plain fragment the translator handles."""
    ft = type(f)
    if ft in (TrueF, FalseF):
        return f
    if ft is Atom:
        return Atom(f.rel, tuple(_desugar_term(t, sig) for t in f.args))
    if ft is Eq:
        return Eq(_desugar_term(f.left, sig), _desugar_term(f.right, sig))
    if ft is Not:
        return Not(_desugar(f.body, sig))
    if ft in BINARY:
        return ft(_desugar(f.left, sig), _desugar(f.right, sig))
    if ft in QUANTIFIERS:
        body = _desugar(f.body, sig)
        var = f.var
        if f.bound is not None:
            guard = _bound_guard(var, f.bound, sig)
            if ft is Forall:
                return Forall(var, Implies(guard, body))
            body = And(guard, body)
        if ft is ExistsUnique:
            other = Var(fresh_name(var.name + "'",
                                   all_var_names(body) | {var.name}),
                        var.sort)
            same = Eq(other, var)
            copy = substitute(body, {var.name: other})
            return Exists(var, And(body, Forall(other,
                                                Implies(copy, same))))
        return ft(var, body) if f.bound is None else \
            (Exists(var, body) if ft is Exists else Forall(var, body))
    if ft is MacroApp:
        raise TranslationError(
            f"macro {f.name} must be expanded before translation")
    raise TranslationError(f"not a formula: {f!r}")


def _bound_guard(var, bound, sig):
    ns = sig.number_sort
    if ns is None or var.sort != ns:
        raise TranslationError("bounded quantifier outside the number sort")
    if not sig.has_relation("<=", (ns, ns)):
        raise TranslationError(
            "translating a bounded quantifier needs <= in the source "
            "signature")
    low = Atom("<=", (IntLit(bound.low, ns), var))
    upper_rel = bound.op
    if upper_rel == "<" and not sig.has_relation("<", (ns, ns)):
        raise TranslationError(
            "translating a strict bound needs < in the source signature")
    high = Atom(upper_rel, (var, _desugar_term(bound.term, sig)))
    return And(low, high)


def _desugar_term(t, sig):
    tt = type(t)
    if tt is Pow:
        base = _desugar_term(t.base, sig)
        if t.exp < 0:
            raise TranslationError("negative powers cannot be translated")
        if t.exp > LITERAL_UNFOLD_CAP:
            raise TranslationError(
                f"power {t.exp} exceeds the unfold cap {LITERAL_UNFOLD_CAP}")
        sort = t.sort or t.base.sort
        if t.exp == 0:
            return IntLit(1, sort)
        out = base
        for _ in range(t.exp - 1):
            out = App("*", (out, base), sort)
        return out
    if tt is IntLit:
        if t.value in (0, 1):
            return t
        if t.value < 0 or t.value > LITERAL_UNFOLD_CAP:
            raise TranslationError(
                f"integer literal {t.value} outside the unfoldable range "
                f"0..{LITERAL_UNFOLD_CAP}")
        sort = t.sort or sig.number_sort
        out = IntLit(1, sort)
        for _ in range(t.value - 1):
            out = App("+", (out, IntLit(1, sort)), sort)
        return out
    if tt is RatLit:
        raise TranslationError("rational literals cannot be translated")
    if tt is App:
        return App(t.op, tuple(_desugar_term(a, sig) for a in t.args),
                   t.sort)
    return t


# ---------------------------------------------------------------------------
# the translator


class _Translator:
    def __init__(self, code, fixed_blocks=None):
        self.code = code
        self.fixed = dict(fixed_blocks or {})
        self.counter = 0
        self.avoid = set(code.param_names)
        for names in self.fixed.values():
            self.avoid.update(names)

    def block_for(self, name, sort):
        """The block of target variables standing for source variable
        `name` of source sort `sort`."""
        spec = self.spec(sort)
        fixed = self.fixed.get(name)
        if fixed is not None:
            if len(fixed) != spec.width:
                raise TranslationError(
                    f"fixed block for {name} has width {len(fixed)}, "
                    f"spec needs {spec.width}")
            return tuple(Var(n, s) for n, s in zip(fixed, spec.sorts))
        base = name
        while any(f"{base}__{i + 1}" in self.avoid
                  for i in range(spec.width)):
            base += "'"
        names = tuple(f"{base}__{i + 1}" for i in range(spec.width))
        self.avoid.update(names)
        self.fixed[name] = names
        return tuple(Var(n, s) for n, s in zip(names, spec.sorts))

    def fresh_block(self, sort):
        spec = self.spec(sort)
        self.counter += 1
        base = f"w{self.counter}"
        while any(f"{base}__{i + 1}" in self.avoid
                  for i in range(spec.width)):
            self.counter += 1
            base = f"w{self.counter}"
        names = tuple(f"{base}__{i + 1}" for i in range(spec.width))
        self.avoid.update(names)
        return tuple(Var(n, s) for n, s in zip(names, spec.sorts))

    def spec(self, sort):
        spec = self.code.specs.get(sort)
        if spec is None:
            raise TranslationError(f"code {self.code.name} has no spec "
                                   f"for source sort {sort}")
        return spec

    def domain(self, sort, block):
        return self.spec(sort).domain.apply(block)

    def equiv(self, sort, left, right):
        return self.spec(sort).equiv.apply(tuple(left) + tuple(right))

    # -- terms -------------------------------------------------------------

    def term_block(self, t):
        """Return (block, intro) for a source term: the block of target
        variables denoting its value, and one (vars, pin) entry per fresh
        block introduced along the way. Each pin formula may mention only
        its own block and earlier ones, so `close` can nest each pin
        directly under its own existential."""
        tt = type(t)
        if tt is Var:
            return self.block_for(t.name, t.sort), []
        if tt is IntLit:
            df = self.code.numerals.get(t.value)
            if df is None:
                raise TranslationError(
                    f"code {self.code.name} does not define the numeral "
                    f"{t.value}")
            sort = t.sort or self.code.source.number_sort
            block = self.fresh_block(sort)
            return block, [(block, self._pin(sort, block, df.apply(block)))]
        if tt is Lit:
            name = self._literal_name(t)
            df = self.code.literals.get(name) if name is not None else None
            if df is None:
                raise TranslationError(
                    f"code {self.code.name} does not define the literal "
                    f"{t.value!r}")
            block = self.fresh_block(t.sort)
            return block, [(block,
                            self._pin(t.sort, block, df.apply(block)))]
        if tt is App:
            if not t.args:  # a source constant
                sort = t.sort or self.code.source.fn_result(t.op, ())
                df = self.code.symbol_formula("const", (t.op, sort))
                block = self.fresh_block(sort)
                return block, [(block,
                                self._pin(sort, block, df.apply(block)))]
            argsorts = tuple(a.sort or self._term_sort(a) for a in t.args)
            res = t.sort or self.code.source.fn_result(t.op, argsorts)
            if res is None:
                raise TranslationError(
                    f"cannot resolve source function {t.op}{argsorts}")
            df = self.code.symbol_formula("fun", (t.op, argsorts))
            blocks, intro = [], []
            for a in t.args:
                b, q = self.term_block(a)
                blocks.append(b)
                intro.extend(q)
            out = self.fresh_block(res)
            flat = sum((tuple(b) for b in blocks), ()) + tuple(out)
            intro.append((out, self._pin(res, out, df.apply(flat))))
            return out, intro
        raise TranslationError(f"cannot translate term {t!r}")

    def _pin(self, sort, block, symbol_formula):
        dom = self.domain(sort, block)
        if type(dom) is TrueF:
            return symbol_formula
        return And(dom, symbol_formula)

    def _term_sort(self, t):
        tt = type(t)
        if tt is Var or tt is Lit:
            return t.sort
        if tt in (IntLit, RatLit):
            return t.sort or self.code.source.number_sort
        if tt is App:
            argsorts = tuple(self._term_sort(a) for a in t.args)
            return self.code.source.fn_result(t.op, argsorts)
        raise TranslationError(f"cannot sort term {t!r}")

    def _literal_name(self, t):
        for name, (sort, value) in (self.code.source.literals or {}).items():
            if sort == t.sort and value == t.value:
                return name
        return None

    def close(self, body, intro):
        """Wrap `body` in the existentials of `intro`, innermost last,
        pinning each fresh block right under its own quantifier."""
        for vars_, pin in reversed(intro):
            body = And(pin, body)
            for v in reversed(vars_):
                body = Exists(v, body)
        return body

    # -- formulas ------------------------------------------------------------

    def formula(self, f):
        ft = type(f)
        if ft is TrueF or ft is FalseF:
            return f
        if ft is Eq:
            lsort = self._term_sort(f.left)
            lb, lq = self.term_block(f.left)
            rb, rq = self.term_block(f.right)
            return self.close(self.equiv(lsort, lb, rb), lq + rq)
        if ft is Atom:
            argsorts = tuple(self._term_sort(a) for a in f.args)
            df = self.code.symbol_formula("rel", (f.rel, argsorts))
            blocks, intro = [], []
            for a in f.args:
                b, q = self.term_block(a)
                blocks.append(b)
                intro.extend(q)
            flat = sum((tuple(b) for b in blocks), ())
            return self.close(df.apply(flat), intro)
        if ft is Not:
            return Not(self.formula(f.body))
        if ft in BINARY:
            return ft(self.formula(f.left), self.formula(f.right))
        if ft is Forall or ft is Exists:
            # a bound variable shadows any outer variable of the same
            # name: pop its block for the body, then restore it
            prev = self.fixed.pop(f.var.name, None)
            block = self.block_for(f.var.name, f.var.sort)
            body = self.formula(f.body)
            if prev is None:
                del self.fixed[f.var.name]
            else:
                self.fixed[f.var.name] = prev
            dom = self.domain(f.var.sort, block)
            if ft is Forall:
                out = body if type(dom) is TrueF else Implies(dom, body)
                for v in reversed(block):
                    out = Forall(v, out)
            else:
                out = body if type(dom) is TrueF else And(dom, body)
                for v in reversed(block):
                    out = Exists(v, out)
            return out
        raise TranslationError(f"cannot translate {f!r}")


def translate(code, formula, *, macros=None, relativize_free=True):
    """Translate a source formula through a code.

    The result's free variables are the blocks of the source formula's
    free variables plus the code's parameters. With relativize_free (the
    default), the translation conjoins the domain formula on every free
    variable's block, so it can only hold at genuine carrier tuples.
    """
    if macros:
        formula = expand_macros(formula, macros)
    formula = _desugar(formula, code.source)
    tr = _Translator(code)
    fv = free_vars(formula)
    # allocate blocks for free variables first, in sorted order, so the
    # result is deterministic
    for name in sorted(fv):
        tr.block_for(name, fv[name])
    out = tr.formula(formula)
    if relativize_free:
        for name in sorted(fv, reverse=True):
            block = tr.block_for(name, fv[name])
            dom = tr.domain(fv[name], block)
            if type(dom) is not TrueF:
                out = And(dom, out)
    blocks = {name: tr.block_for(name, fv[name]) for name in fv}
    return TranslationResult(formula=out, blocks=blocks, params=code.params)


# ---------------------------------------------------------------------------
# composition


def compose(outer, inner, name=None):
    """The code of the composed interpretation: translate every member
    formula of `outer` through `inner`. Tuple widths multiply; the
    parameter list is inner-blocks for outer's parameters followed by
    inner's own parameters."""
    if outer.target is not inner.source and outer.target != inner.source:
        raise CodeError(
            f"cannot compose {outer.name} after {inner.name}: outer's "
            f"target signature differs from inner's source signature")

    # one shared block per outer parameter, used by every member formula
    taken = set(inner.param_names)
    param_blocks = {}
    new_params = []
    for v in outer.params:
        spec = inner.specs.get(v.sort)
        if spec is None:
            raise CodeError(f"outer parameter {v.name}: inner code has "
                            f"no spec for sort {v.sort}")
        base = v.name
        while any(f"{base}__{i + 1}" in taken for i in range(spec.width)):
            base += "'"
        names = tuple(f"{base}__{i + 1}" for i in range(spec.width))
        taken.update(names)
        param_blocks[v.name] = names
        new_params.extend(Var(n, s) for n, s in zip(names, spec.sorts))
    new_params.extend(inner.params)

    def through(df):
        """Translate one DefinedFormula of the outer code."""
        fixed = dict(param_blocks)
        tr = _Translator(inner, fixed_blocks=fixed)
        arg_blocks = [tr.block_for(v.name, v.sort) for v in df.args]
        body = tr.formula(_desugar(df.formula, inner.source))
        # relativize the argument blocks and the outer parameter blocks
        for v in reversed(outer.params):
            block = tr.block_for(v.name, v.sort)
            dom = tr.domain(v.sort, block)
            if type(dom) is not TrueF:
                body = And(dom, body)
        for v, block in zip(reversed(df.args),
                            reversed(arg_blocks)):
            dom = tr.domain(v.sort, block)
            if type(dom) is not TrueF:
                body = And(dom, body)
        args = sum((tuple(b) for b in arg_blocks), ())
        return DefinedFormula(args, body)

    specs = {}
    for sort, spec in outer.specs.items():
        inner_sorts = sum((inner.specs[s].sorts for s in spec.sorts), ())
        specs[sort] = TupleSpec(
            sorts=inner_sorts,
            domain=through(spec.domain),
            equiv=through(spec.equiv),
        )
    constants = {k: through(df) for k, df in outer.constants.items()}
    functions = {k: through(df) for k, df in outer.functions.items()}
    relations = {k: through(df) for k, df in outer.relations.items()}
    numerals = {k: through(df) for k, df in outer.numerals.items()}
    literals = {k: through(df) for k, df in outer.literals.items()}

    return InterpretationCode(
        name=name or f"{outer.name}∘{inner.name}",
        source=outer.source,
        target=inner.target,
        specs=specs,
        constants=constants,
        functions=functions,
        relations=relations,
        params=tuple(new_params),
        numerals=numerals,
        literals=literals,
    )
