"""Three-valued evaluation of formulas over structures.

A verdict is True or False only when backed by a certificate:

* an explicit witness (for exists) or counterexample (for forall) whose
  body evaluated definitely,
* a scan that exhausted the whole carrier (the enumerator terminated),
* a definite answer from a relation's native decision procedure,
* a registered decision procedure for a tagged quantifier node, or
* two distinct certified witnesses, which refute exists-unique outright.

Everything else is Unknown, carrying a reason: "budget-exhausted" when a
scan hit its candidate limit or the global node budget ran out, and
"no-enumerator" when a carrier cannot be enumerated at all.

Enumeration order is canonical per structure, so enlarging the budget
only extends scans: a definite verdict never flips, Unknown can only
resolve. Enumerators must yield pairwise distinct elements and terminate
exactly when the carrier is finite.

Quantifier nodes may carry a tag (`HintTag`). Two registries key on the
tag kind: `hints` maps it to a provider yielding candidate elements to
try before enumeration (witness candidates for exists, counterexample
candidates for forall); `oracles` maps it to a trusted decision
procedure for the whole tagged subformula. Hint candidates are verified
by evaluating the body, so a wrong hint can never produce a wrong
verdict; oracle answers are trusted as given.
"""

from __future__ import annotations

from .logic.ast import (
    And, App, Atom, Eq, Exists, ExistsUnique, FalseF, Forall, Iff, Implies,
    IntLit, Lit, MacroApp, Not, Or, Pow, RatLit, TrueF, Var,
)
from .logic.macros import expand_macros
from .structures.base import EvalError

BUDGET_EXHAUSTED = "budget-exhausted"
NO_ENUMERATOR = "no-enumerator"


class TV:
    """A Kleene truth value with an optional reason for Unknown."""

    __slots__ = ("status", "reason")

    def __init__(self, status, reason=None):
        self.status = status
        self.reason = reason

    @property
    def is_true(self):
        return self.status == "true"

    @property
    def is_false(self):
        return self.status == "false"

    @property
    def is_unknown(self):
        return self.status == "unknown"

    @property
    def definite(self):
        return self.status != "unknown"

    def __eq__(self, other):
        if isinstance(other, TV):
            return self.status == other.status
        return NotImplemented

    def __hash__(self):
        return hash(self.status)

    def __repr__(self):
        if self.reason:
            return f"TV({self.status}: {self.reason})"
        return f"TV({self.status})"


TRUE = TV("true")
FALSE = TV("false")


def unknown(reason):
    return TV("unknown", reason)


def from_bool(b):
    return TRUE if b else FALSE


def tv_not(a):
    if a.is_true:
        return FALSE
    if a.is_false:
        return TRUE
    return a


def tv_and(a, b):
    if a.is_false or b.is_false:
        return FALSE
    if a.is_unknown:
        return a
    if b.is_unknown:
        return b
    return TRUE


def tv_or(a, b):
    if a.is_true or b.is_true:
        return TRUE
    if a.is_unknown:
        return a
    if b.is_unknown:
        return b
    return FALSE


def tv_implies(a, b):
    return tv_or(tv_not(a), b)


def tv_iff(a, b):
    if a.definite and b.definite:
        return from_bool(a.status == b.status)
    return a if a.is_unknown else b


class NodesExhausted(Exception):
    """Internal: the global node budget ran out."""


class Budget:
    """Resource limits: candidates scanned per quantifier, total nodes."""

    def __init__(self, candidates=10_000, nodes=10_000_000):
        self.candidates = candidates
        self.nodes = nodes

    def spend(self, n=1):
        self.nodes -= n
        if self.nodes < 0:
            raise NodesExhausted


# ---------------------------------------------------------------------------
# The quantifier scan shared by both evaluation routes


def _scan(kind, structure, sort, bound, bound_value, tag, role_values,
          env, budget, hints, oracles, node, body_eval):
    """Evaluate one quantifier.

    kind: Forall | Exists | ExistsUnique (the node class)
    bound: the Bound guard or None; bound_value: evaluated guard term
    body_eval(value) -> TV, binds the variable and evaluates the body
    """
    if tag is not None and tag.kind in oracles:
        r = oracles[tag.kind](structure, env, node)
        if r is True:
            return TRUE
        if r is False:
            return FALSE

    if bound is not None:
        low, strict = bound.low, bound.op == "<"
        hi = structure.to_int(bound_value)
        domain = structure.number_range(low, hi, strict)

        def admissible(v):
            try:
                k = structure.to_int(v)
            except EvalError:
                return False
            if k < low:
                return False
            return k < hi if strict else k <= hi
    else:
        domain = structure.enum_sort(sort)

        def admissible(v):
            return structure.contains(sort, v)

    found = []  # certified witnesses, deduplicated (exists-unique)
    saw_unknown = None

    def record_witness(value):
        for w in found:
            if structure.equal(sort, w, value):
                return False
        found.append(value)
        return len(found) >= 2

    if tag is not None and tag.kind in hints:
        for cand in hints[tag.kind](structure, env, role_values):
            budget.spend()
            if not admissible(cand):
                continue
            r = body_eval(cand)
            if kind is Forall:
                if r.is_false:
                    return FALSE
            elif kind is Exists:
                if r.is_true:
                    return TRUE
            else:
                if r.is_true and record_witness(cand):
                    return FALSE

    if domain is None:
        return unknown(NO_ENUMERATOR)

    limit = budget.candidates
    count = 0
    exhausted = True
    for cand in domain:
        if count >= limit:
            exhausted = False
            break
        count += 1
        r = body_eval(cand)
        if kind is Forall:
            if r.is_false:
                return FALSE
            if r.is_unknown and saw_unknown is None:
                saw_unknown = r
        elif kind is Exists:
            if r.is_true:
                return TRUE
            if r.is_unknown and saw_unknown is None:
                saw_unknown = r
        else:
            if r.is_true and record_witness(cand):
                return FALSE
            if r.is_unknown and saw_unknown is None:
                saw_unknown = r

    if kind is ExistsUnique:
        if not exhausted:
            return unknown(BUDGET_EXHAUSTED)
        if saw_unknown is not None:
            return saw_unknown
        return from_bool(len(found) == 1)

    if not exhausted:
        return unknown(BUDGET_EXHAUSTED)
    if saw_unknown is not None:
        return saw_unknown
    return TRUE if kind is Forall else FALSE


# ---------------------------------------------------------------------------
# Symbol resolution shared by both evaluation routes


def _function_for(structure, t):
    argsorts = tuple(a.sort for a in t.args)
    if all(s is not None for s in argsorts):
        return structure.function(t.op, argsorts)
    overloads = [k for k in structure.sig.functions
                 if k[0] == t.op and len(k[1]) == len(t.args)]
    if len(overloads) != 1:
        raise EvalError(f"cannot resolve overload of {t.op}")
    return structure.function(*overloads[0])


def _relation_for(structure, f):
    argsorts = tuple(a.sort for a in f.args)
    if all(s is not None for s in argsorts):
        return structure.relation(f.rel, argsorts)
    overloads = [k for k in structure.sig.relations
                 if k[0] == f.rel and len(k[1]) == len(f.args)]
    if len(overloads) != 1:
        raise EvalError(f"cannot resolve overload of relation {f.rel}")
    return structure.relation(*overloads[0])


# ---------------------------------------------------------------------------
# Reference evaluator: direct recursion over the tree


class _Reference:
    def __init__(self, structure, hints, oracles, macros):
        self.structure = structure
        self.hints = hints
        self.oracles = oracles
        self.macros = macros

    def term(self, t, env, budget):
        budget.spend()
        tt = type(t)
        if tt is Var:
            try:
                return env[t.name]
            except KeyError:
                raise EvalError(f"unbound variable {t.name}")
        if tt is IntLit:
            sort = t.sort or self.structure.sig.number_sort
            return self.structure.embed_int(t.value, sort)
        if tt is RatLit:
            return self.structure.embed_rat(t.value, t.sort)
        if tt is Lit:
            return self.structure.embed_lit(t.value, t.sort)
        if tt is Pow:
            sort = t.sort or t.base.sort
            base = self.term(t.base, env, budget)
            return self.structure.power(sort, base, t.exp)
        if tt is App:
            fn = _function_for(self.structure, t)
            return fn(*(self.term(a, env, budget) for a in t.args))
        raise EvalError(f"not a term: {t!r}")

    def formula(self, f, env, budget):
        budget.spend()
        ft = type(f)
        if ft is TrueF:
            return TRUE
        if ft is FalseF:
            return FALSE
        if ft is Atom:
            rel = _relation_for(self.structure, f)
            vals = [self.term(a, env, budget) for a in f.args]
            r = rel(*vals)
            if r is None:
                return unknown(f"relation {f.rel} gave no verdict")
            return from_bool(r)
        if ft is Eq:
            left = self.term(f.left, env, budget)
            right = self.term(f.right, env, budget)
            sort = f.left.sort or f.right.sort
            return from_bool(self.structure.equal(sort, left, right))
        if ft is MacroApp:
            if f.name not in self.macros:
                raise EvalError(f"undefined macro {f.name}")
            return self.formula(expand_macros(f, self.macros), env, budget)
        if ft is Not:
            return tv_not(self.formula(f.body, env, budget))
        if ft is And:
            a = self.formula(f.left, env, budget)
            if a.is_false:
                return FALSE
            return tv_and(a, self.formula(f.right, env, budget))
        if ft is Or:
            a = self.formula(f.left, env, budget)
            if a.is_true:
                return TRUE
            return tv_or(a, self.formula(f.right, env, budget))
        if ft is Implies:
            a = self.formula(f.left, env, budget)
            if a.is_false:
                return TRUE
            return tv_implies(a, self.formula(f.right, env, budget))
        if ft is Iff:
            return tv_iff(self.formula(f.left, env, budget),
                          self.formula(f.right, env, budget))
        if ft in (Forall, Exists, ExistsUnique):
            return self.quantifier(f, env, budget)
        raise EvalError(f"not a formula: {f!r}")

    def quantifier(self, f, env, budget):
        name = f.var.name
        bound_value = None
        if f.bound is not None:
            bound_value = self.term(f.bound.term, env, budget)
        role_values = {}
        if f.tag is not None and f.tag.kind in self.hints:
            role_values = {role: self.term(t, env, budget)
                           for role, t in f.tag.roles}

        def body_eval(value):
            missing = name not in env
            saved = env.get(name)
            env[name] = value
            try:
                return self.formula(f.body, env, budget)
            finally:
                if missing:
                    del env[name]
                else:
                    env[name] = saved

        return _scan(type(f), self.structure, f.var.sort, f.bound, bound_value,
                     f.tag, role_values, env, budget, self.hints, self.oracles,
                     f, body_eval)


# ---------------------------------------------------------------------------
# Compiled evaluator: build closures once, evaluate many times


class _Compiler:
    def __init__(self, structure, hints, oracles, macros):
        self.structure = structure
        self.hints = hints
        self.oracles = oracles
        self.macros = macros

    def term(self, t):
        tt = type(t)
        if tt is Var:
            name = t.name
            def run(env, budget):
                budget.spend()
                try:
                    return env[name]
                except KeyError:
                    raise EvalError(f"unbound variable {name}")
            return run
        if tt is IntLit:
            value = self.structure.embed_int(
                t.value, t.sort or self.structure.sig.number_sort)
            def run(env, budget):
                budget.spend()
                return value
            return run
        if tt is RatLit:
            value = self.structure.embed_rat(t.value, t.sort)
            def run(env, budget):
                budget.spend()
                return value
            return run
        if tt is Lit:
            value = self.structure.embed_lit(t.value, t.sort)
            def run(env, budget):
                budget.spend()
                return value
            return run
        if tt is Pow:
            base = self.term(t.base)
            sort = t.sort or t.base.sort
            exp = t.exp
            structure = self.structure
            def run(env, budget):
                budget.spend()
                return structure.power(sort, base(env, budget), exp)
            return run
        if tt is App:
            args = tuple(self.term(a) for a in t.args)
            fn = _function_for(self.structure, t)
            def run(env, budget):
                budget.spend()
                return fn(*(a(env, budget) for a in args))
            return run
        raise EvalError(f"not a term: {t!r}")

    def formula(self, f):
        ft = type(f)
        if ft is TrueF:
            return lambda env, budget: TRUE
        if ft is FalseF:
            return lambda env, budget: FALSE
        if ft is Atom:
            rel = _relation_for(self.structure, f)
            args = tuple(self.term(a) for a in f.args)
            name = f.rel
            def run(env, budget):
                budget.spend()
                r = rel(*(a(env, budget) for a in args))
                if r is None:
                    return unknown(f"relation {name} gave no verdict")
                return from_bool(r)
            return run
        if ft is Eq:
            left = self.term(f.left)
            right = self.term(f.right)
            sort = f.left.sort or f.right.sort
            equal = self.structure.equal
            def run(env, budget):
                budget.spend()
                return from_bool(equal(sort, left(env, budget),
                                       right(env, budget)))
            return run
        if ft is MacroApp:
            if f.name not in self.macros:
                raise EvalError(f"undefined macro {f.name}")
            return self.formula(expand_macros(f, self.macros))
        if ft is Not:
            body = self.formula(f.body)
            def run(env, budget):
                budget.spend()
                return tv_not(body(env, budget))
            return run
        if ft in (And, Or, Implies, Iff):
            left = self.formula(f.left)
            right = self.formula(f.right)
            if ft is And:
                def run(env, budget):
                    budget.spend()
                    a = left(env, budget)
                    if a.is_false:
                        return FALSE
                    return tv_and(a, right(env, budget))
            elif ft is Or:
                def run(env, budget):
                    budget.spend()
                    a = left(env, budget)
                    if a.is_true:
                        return TRUE
                    return tv_or(a, right(env, budget))
            elif ft is Implies:
                def run(env, budget):
                    budget.spend()
                    a = left(env, budget)
                    if a.is_false:
                        return TRUE
                    return tv_implies(a, right(env, budget))
            else:
                def run(env, budget):
                    budget.spend()
                    return tv_iff(left(env, budget), right(env, budget))
            return run
        if ft in (Forall, Exists, ExistsUnique):
            return self.quantifier(f)
        raise EvalError(f"not a formula: {f!r}")

    def quantifier(self, f):
        body = self.formula(f.body)
        bound_term = self.term(f.bound.term) if f.bound is not None else None
        role_fns = ()
        if f.tag is not None and f.tag.kind in self.hints:
            role_fns = tuple((role, self.term(t)) for role, t in f.tag.roles)
        name = f.var.name
        sort = f.var.sort
        kind = type(f)
        structure = self.structure
        hints = self.hints
        oracles = self.oracles

        def run(env, budget):
            budget.spend()
            bound_value = (bound_term(env, budget)
                           if bound_term is not None else None)
            role_values = {role: fn(env, budget) for role, fn in role_fns}

            def body_eval(value):
                missing = name not in env
                saved = env.get(name)
                env[name] = value
                try:
                    return body(env, budget)
                finally:
                    if missing:
                        del env[name]
                    else:
                        env[name] = saved

            return _scan(kind, structure, sort, f.bound, bound_value,
                         f.tag, role_values, env, budget, hints, oracles,
                         f, body_eval)

        return run


# ---------------------------------------------------------------------------
# Public API


def evaluate(structure, formula, env=None, budget=None,
             hints=None, oracles=None, macros=None):
    """Evaluate a formula in a structure; returns a TV.

    env maps free variable names to structure elements. Formula-level
    resource exhaustion yields Unknown("budget-exhausted"), never a wrong
    definite verdict.
    """
    ref = _Reference(structure, hints or {}, oracles or {}, macros or {})
    b = budget if budget is not None else Budget()
    try:
        return ref.formula(formula, dict(env or {}), b)
    except NodesExhausted:
        return unknown(BUDGET_EXHAUSTED)


def evaluate_term(structure, term, env=None, budget=None):
    ref = _Reference(structure, {}, {}, {})
    b = budget if budget is not None else Budget()
    return ref.term(term, dict(env or {}), b)


def compile_formula(structure, formula, hints=None, oracles=None, macros=None):
    """Compile a formula once; the result maps (env, budget) to a TV.

    Same semantics as `evaluate`, resolved ahead of time. Use when the
    same formula is evaluated under many environments.
    """
    comp = _Compiler(structure, hints or {}, oracles or {}, macros or {})
    run = comp.formula(formula)

    def evaluator(env=None, budget=None):
        b = budget if budget is not None else Budget()
        try:
            return run(dict(env or {}), b)
        except NodesExhausted:
            return unknown(BUDGET_EXHAUSTED)

    return evaluator
