"""Multi-sorted first-order syntax trees.

Terms and formulas are immutable. Sorts are plain strings. A Signature
declares sorts, functions, relations, constants, and named literal atoms;
functions and relations are keyed by (name, argument sorts) so arithmetic
symbols may be overloaded across sorts.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction


class SortError(Exception):
    pass


@dataclass(frozen=True)
class Signature:
    sorts: tuple[str, ...]
    functions: dict
    relations: dict
    constants: dict
    number_sort: str | None = None
    literals: dict | None = None
    default_sort: str | None = None
    int_sorts: tuple | None = None
    rat_sorts: tuple | None = None
    tuple_literal: object = None

    def __post_init__(self):
        if self.literals is None:
            object.__setattr__(self, "literals", {})
        if self.int_sorts is None:
            object.__setattr__(self, "int_sorts", self.sorts)
        if self.rat_sorts is None:
            object.__setattr__(self, "rat_sorts", ())
        for name, sort in self.constants.items():
            self.functions.setdefault((name, ()), sort)

    def fn_result(self, name, argsorts):
        return self.functions.get((name, tuple(argsorts)))

    def fn_overloads(self, name):
        return [k for k in self.functions if k[0] == name]

    def has_relation(self, name, argsorts):
        return (name, tuple(argsorts)) in self.relations

    def rel_overloads(self, name):
        return [k for k in self.relations if k[0] == name]

    def is_symbol(self, name):
        return bool(self.fn_overloads(name) or self.rel_overloads(name))

    def single_sort(self):
        if self.default_sort is not None:
            return self.default_sort
        if len(self.sorts) == 1:
            return self.sorts[0]
        return None


# ---------------------------------------------------------------------------
# Terms

class Term:
    __slots__ = ()


@dataclass(frozen=True, slots=True)
class Var(Term):
    name: str
    sort: str


@dataclass(frozen=True, slots=True)
class IntLit(Term):
    value: int
    sort: str | None = None


@dataclass(frozen=True, slots=True)
class RatLit(Term):
    value: Fraction
    sort: str | None = None


@dataclass(frozen=True, slots=True)
class Lit(Term):
    """An opaque structure element embedded as a term (e.g. a polynomial)."""
    value: object
    sort: str


@dataclass(frozen=True, slots=True)
class App(Term):
    op: str
    args: tuple
    sort: str | None = None


@dataclass(frozen=True, slots=True)
class Pow(Term):
    base: Term
    exp: int
    sort: str | None = None


# ---------------------------------------------------------------------------
# Formulas

class Formula:
    __slots__ = ()


@dataclass(frozen=True, slots=True)
class TrueF(Formula):
    pass


@dataclass(frozen=True, slots=True)
class FalseF(Formula):
    pass


@dataclass(frozen=True, slots=True)
class Atom(Formula):
    rel: str
    args: tuple


@dataclass(frozen=True, slots=True)
class MacroApp(Formula):
    name: str
    args: tuple


@dataclass(frozen=True, slots=True)
class Eq(Formula):
    left: Term
    right: Term


@dataclass(frozen=True, slots=True)
class Not(Formula):
    body: Formula


@dataclass(frozen=True, slots=True)
class And(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True, slots=True)
class Or(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True, slots=True)
class Implies(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True, slots=True)
class Iff(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True, slots=True)
class Bound:
    """Finite range guard for a number-sort quantifier.

    low is 0 or 1; op is "<=" or "<"; term evaluates to the upper limit.
    The quantifier ranges over {low..k} for "<=" and {low..k-1} for "<".
    """
    low: int
    op: str
    term: Term


@dataclass(frozen=True, slots=True)
class HintTag:
    """Marks a quantifier so hint providers and certified oracles can find it.

    roles maps role names to terms; substitution rewrites the terms, so the
    roles stay meaningful after the formula is instantiated.
    """
    kind: str
    roles: tuple = ()

    def role_map(self):
        return dict(self.roles)


@dataclass(frozen=True, slots=True)
class Forall(Formula):
    var: Var
    body: Formula
    bound: Bound | None = None
    tag: HintTag | None = None


@dataclass(frozen=True, slots=True)
class Exists(Formula):
    var: Var
    body: Formula
    bound: Bound | None = None
    tag: HintTag | None = None


@dataclass(frozen=True, slots=True)
class ExistsUnique(Formula):
    var: Var
    body: Formula
    bound: Bound | None = None
    tag: HintTag | None = None


QUANTIFIERS = (Forall, Exists, ExistsUnique)
BINARY = (And, Or, Implies, Iff)


# ---------------------------------------------------------------------------
# Variable bookkeeping

def term_free_vars(t, out):
    tt = type(t)
    if tt is Var:
        prev = out.get(t.name)
        if prev is not None and prev != t.sort:
            raise SortError(f"variable {t.name} used at sorts {prev} and {t.sort}")
        out[t.name] = t.sort
    elif tt is App:
        for a in t.args:
            term_free_vars(a, out)
    elif tt is Pow:
        term_free_vars(t.base, out)
    return out


def free_vars(f):
    """Free variables of a formula as a dict name -> sort."""
    out = {}
    _free_vars(f, out, set())
    return out


def _free_vars(f, out, bound):
    ft = type(f)
    if ft in (TrueF, FalseF):
        return
    if ft in (Atom, MacroApp):
        tmp = {}
        for a in f.args:
            term_free_vars(a, tmp)
        _merge_free(tmp, out, bound)
    elif ft is Eq:
        tmp = {}
        term_free_vars(f.left, tmp)
        term_free_vars(f.right, tmp)
        _merge_free(tmp, out, bound)
    elif ft is Not:
        _free_vars(f.body, out, bound)
    elif ft in BINARY:
        _free_vars(f.left, out, bound)
        _free_vars(f.right, out, bound)
    elif ft in QUANTIFIERS:
        if f.bound is not None:
            tmp = {}
            term_free_vars(f.bound.term, tmp)
            _merge_free(tmp, out, bound)
        _free_vars(f.body, out, bound | {f.var.name})
    else:
        raise TypeError(f"not a formula: {f!r}")


def _merge_free(tmp, out, bound):
    for name, sort in tmp.items():
        if name in bound:
            continue
        prev = out.get(name)
        if prev is not None and prev != sort:
            raise SortError(f"variable {name} used at sorts {prev} and {sort}")
        out[name] = sort


def all_var_names(f):
    """Every variable name occurring in f, free or bound."""
    names = set()

    def walk_t(t):
        tt = type(t)
        if tt is Var:
            names.add(t.name)
        elif tt is App:
            for a in t.args:
                walk_t(a)
        elif tt is Pow:
            walk_t(t.base)

    def walk(g):
        gt = type(g)
        if gt in (Atom, MacroApp):
            for a in g.args:
                walk_t(a)
        elif gt is Eq:
            walk_t(g.left)
            walk_t(g.right)
        elif gt is Not:
            walk(g.body)
        elif gt in BINARY:
            walk(g.left)
            walk(g.right)
        elif gt in QUANTIFIERS:
            names.add(g.var.name)
            if g.bound is not None:
                walk_t(g.bound.term)
            walk(g.body)

    walk(f)
    return names


def fresh_name(base, avoid):
    name = base
    while name in avoid:
        name = name + "'"
    return name


# ---------------------------------------------------------------------------
# Substitution

def substitute_term(t, mapping):
    tt = type(t)
    if tt is Var:
        rep = mapping.get(t.name)
        if rep is None:
            return t
        rsort = getattr(rep, "sort", None)
        if rsort is not None and rsort != t.sort:
            raise SortError(
                f"substituting {t.name}:{t.sort} with a term of sort {rsort}")
        return rep
    if tt is App:
        return App(t.op, tuple(substitute_term(a, mapping) for a in t.args), t.sort)
    if tt is Pow:
        return Pow(substitute_term(t.base, mapping), t.exp, t.sort)
    return t


def _substitute_tag(tag, mapping):
    if tag is None:
        return None
    return HintTag(tag.kind, tuple(
        (role, substitute_term(term, mapping)) for role, term in tag.roles))


def substitute(f, mapping):
    """Capture-avoiding substitution of terms for free variables."""
    if not mapping:
        return f
    ft = type(f)
    if ft in (TrueF, FalseF):
        return f
    if ft is Atom:
        return Atom(f.rel, tuple(substitute_term(a, mapping) for a in f.args))
    if ft is MacroApp:
        return MacroApp(f.name, tuple(substitute_term(a, mapping) for a in f.args))
    if ft is Eq:
        return Eq(substitute_term(f.left, mapping), substitute_term(f.right, mapping))
    if ft is Not:
        return Not(substitute(f.body, mapping))
    if ft in BINARY:
        return ft(substitute(f.left, mapping), substitute(f.right, mapping))
    if ft in QUANTIFIERS:
        bound = f.bound
        if bound is not None:
            bound = Bound(bound.low, bound.op, substitute_term(bound.term, mapping))
        inner = {k: v for k, v in mapping.items() if k != f.var.name}
        if not inner:
            return ft(f.var, f.body, bound, f.tag)
        clash = set()
        for v in inner.values():
            term_free_vars(v, d := {})
            clash |= d.keys()
        var, body, tag = f.var, f.body, f.tag
        if var.name in clash:
            newname = fresh_name(var.name, clash | all_var_names(body) | set(inner))
            ren = {var.name: Var(newname, var.sort)}
            body = substitute(body, ren)
            tag = _substitute_tag(tag, ren)
            var = Var(newname, var.sort)
        return ft(var, substitute(body, inner), bound,
                  _substitute_tag(tag, inner))
    raise TypeError(f"not a formula: {f!r}")


# ---------------------------------------------------------------------------
# Alpha normalization

def alpha_normalize(f):
    """Rename bound variables to v0, v1, ... in binder order; drop hint tags.

    Two formulas are alpha-equivalent iff their normal forms are equal.
    """
    counter = [0]

    def norm_t(t, ren):
        tt = type(t)
        if tt is Var:
            return Var(ren.get(t.name, t.name), t.sort)
        if tt is App:
            return App(t.op, tuple(norm_t(a, ren) for a in t.args), t.sort)
        if tt is Pow:
            return Pow(norm_t(t.base, ren), t.exp, t.sort)
        return t

    def norm(g, ren):
        gt = type(g)
        if gt in (TrueF, FalseF):
            return g
        if gt is Atom:
            return Atom(g.rel, tuple(norm_t(a, ren) for a in g.args))
        if gt is MacroApp:
            return MacroApp(g.name, tuple(norm_t(a, ren) for a in g.args))
        if gt is Eq:
            return Eq(norm_t(g.left, ren), norm_t(g.right, ren))
        if gt is Not:
            return Not(norm(g.body, ren))
        if gt in BINARY:
            return gt(norm(g.left, ren), norm(g.right, ren))
        if gt in QUANTIFIERS:
            bound = g.bound
            if bound is not None:
                bound = Bound(bound.low, bound.op, norm_t(bound.term, ren))
            newname = f"v{counter[0]}"
            counter[0] += 1
            ren2 = dict(ren)
            ren2[g.var.name] = newname
            return gt(Var(newname, g.var.sort), norm(g.body, ren2), bound, None)
        raise TypeError(f"not a formula: {g!r}")

    return norm(f, {})


def alpha_eq(f, g):
    return alpha_normalize(f) == alpha_normalize(g)


# ---------------------------------------------------------------------------
# Well-sortedness

def check_term(t, sig, env):
    """Return the sort of t, checking declarations; env maps var name -> sort."""
    tt = type(t)
    if tt is Var:
        declared = env.get(t.name)
        if declared is not None and declared != t.sort:
            raise SortError(f"variable {t.name}: bound at {declared}, used at {t.sort}")
        if t.sort not in sig.sorts:
            raise SortError(f"unknown sort {t.sort}")
        return t.sort
    if tt in (IntLit, RatLit):
        if t.sort is None:
            raise SortError(f"unresolved literal {t!r}")
        return t.sort
    if tt is Lit:
        return t.sort
    if tt is App:
        argsorts = tuple(check_term(a, sig, env) for a in t.args)
        res = sig.fn_result(t.op, argsorts)
        if res is None:
            raise SortError(f"no function {t.op}{argsorts} in signature")
        if t.sort is not None and t.sort != res:
            raise SortError(f"term {t.op} annotated {t.sort}, declared {res}")
        return res
    if tt is Pow:
        return check_term(t.base, sig, env)
    raise TypeError(f"not a term: {t!r}")


def check_formula(f, sig, env=None):
    """Raise SortError if f is not well-sorted over sig."""
    env = dict(env or {})

    def chk(g, env):
        gt = type(g)
        if gt in (TrueF, FalseF):
            return
        if gt is Atom:
            argsorts = tuple(check_term(a, sig, env) for a in g.args)
            if not sig.has_relation(g.rel, argsorts):
                raise SortError(f"no relation {g.rel}{argsorts} in signature")
            return
        if gt is MacroApp:
            for a in g.args:
                check_term(a, sig, env)
            return
        if gt is Eq:
            ls = check_term(g.left, sig, env)
            rs = check_term(g.right, sig, env)
            if ls != rs:
                raise SortError(f"equality between sorts {ls} and {rs}")
            return
        if gt is Not:
            chk(g.body, env)
            return
        if gt in BINARY:
            chk(g.left, env)
            chk(g.right, env)
            return
        if gt in QUANTIFIERS:
            if g.bound is not None:
                bsort = check_term(g.bound.term, sig, env)
                if sig.number_sort is None or bsort != sig.number_sort:
                    raise SortError("bound guard must be a number-sort term")
                if g.var.sort != sig.number_sort:
                    raise SortError("bounded quantifier over a non-number sort")
                if g.bound.low not in (0, 1) or g.bound.op not in ("<=", "<"):
                    raise SortError(f"bad bound {g.bound!r}")
            env2 = dict(env)
            env2[g.var.name] = g.var.sort
            chk(g.body, env2)
            return
        raise TypeError(f"not a formula: {g!r}")

    chk(f, env)
