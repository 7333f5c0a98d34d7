"""Recursive-descent parser for the formula grammar.

Grammar sketch (see README for the full table):

    formula  := iff
    iff      := impl ('<->' impl)*
    impl     := orf ('->' impl)?
    orf      := andf ('|' andf)*
    andf     := unary ('&' unary)*
    unary    := '!' unary | quantifier | primary
    quant    := ('forall'|'exists'|'exists!') binder '(' formula ')'
    binder   := '1' '<=' NAME '<=' term
              | NAME (':' NAME)? (('<='|'<') term)?
    primary  := '(' formula ')' | 'true' | 'false' | comparison
    compare  := term (('='|'<='|'<'|'|') term)?
    term     := additive; additive := mult (('+'|'-') mult)*
    mult     := unt ('*' unt)*; unt := '-' unt | power
    power    := atom ('^' '-'? INT)?
    atom     := INT ('/' INT)? | NAME '(' args ')' | NAME (':' NAME)? | '(' term ')'

A name is resolved, in order, as: quantifier-bound variable, declared literal
atom, declared constant, free variable (sort from annotation, or the
signature's single sort). Integer and rational literals are sort-polymorphic
and resolved from context; an equation between two bare literals is rejected
as ambiguous when several sorts admit them.
"""

from __future__ import annotations

import re
from fractions import Fraction

from .ast import (
    And, App, Atom, Bound, Eq, Exists, ExistsUnique, FalseF, Forall,
    Iff, Implies, IntLit, Lit, MacroApp, Not, Or, Pow, RatLit, SortError,
    TrueF, Var,
)
from .printer import INFIX_RELS


class ParseError(Exception):
    def __init__(self, message, pos=None):
        self.pos = pos
        super().__init__(message if pos is None else f"{message} (at position {pos})")


_TOKEN_RE = re.compile(r"""
    (?P<ws>\s+)
  | (?P<existsbang>exists!)
  | (?P<name>[A-Za-z_][A-Za-z0-9_]*'*)
  | (?P<int>\d+)
  | (?P<op><->|->|<=|[()\[\],:=+\-*^/|&!<])
""", re.VERBOSE)

KEYWORDS = ("forall", "exists", "true", "false")


def tokenize(text):
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", pos)
        pos = m.end()
        if m.lastgroup == "ws":
            continue
        tokens.append((m.lastgroup, m.group(), m.start()))
    return tokens


class _UNRESOLVED:
    """Sentinel sort for not-yet-resolved polymorphic literals."""


class Parser:
    def __init__(self, text, sig, macros=None):
        self.text = text
        self.sig = sig
        self.macros = dict(macros) if macros else {}
        self.tokens = tokenize(text)
        self.pos = 0
        self.free = {}
        self.varsorts = {}
        self.callable = set(self.macros)
        for name, argsorts in sig.functions:
            if argsorts:
                self.callable.add(name)
        for name, argsorts in sig.relations:
            if argsorts:
                self.callable.add(name)

    # token helpers ---------------------------------------------------------

    def peek(self, offset=0):
        i = self.pos + offset
        return self.tokens[i] if i < len(self.tokens) else (None, None, len(self.text))

    def next(self):
        tok = self.peek()
        if tok[0] is None:
            raise ParseError("unexpected end of input", tok[2])
        self.pos += 1
        return tok

    def expect(self, value):
        kind, val, at = self.peek()
        if val != value:
            raise ParseError(f"expected {value!r}, found {val!r}", at)
        self.pos += 1

    def at(self, value):
        return self.peek()[1] == value

    # entry points ----------------------------------------------------------

    def parse_formula(self):
        f = self.iff()
        kind, val, at = self.peek()
        if kind is not None:
            raise ParseError(f"unexpected trailing token {val!r}", at)
        return self.resolve_formula(f)

    def parse_term_only(self):
        t = self.term()
        kind, val, at = self.peek()
        if kind is not None:
            raise ParseError(f"unexpected trailing token {val!r}", at)
        t, sorts = self.infer(t)
        if len(sorts) != 1:
            raise ParseError(f"cannot resolve term sort (candidates {sorted(sorts)})")
        return self.commit(t, next(iter(sorts)))

    # formula levels --------------------------------------------------------

    def iff(self):
        f = self.impl()
        while self.at("<->"):
            self.next()
            f = Iff(f, self.impl())
        return f

    def impl(self):
        f = self.orf()
        if self.at("->"):
            self.next()
            return Implies(f, self.impl())
        return f

    def orf(self):
        f = self.andf()
        while self.at("|"):
            self.next()
            f = Or(f, self.andf())
        return f

    def andf(self):
        f = self.unary()
        while self.at("&"):
            self.next()
            f = And(f, self.unary())
        return f

    def unary(self):
        kind, val, at = self.peek()
        if val == "!":
            self.next()
            return Not(self.unary())
        if val in ("forall", "exists") or kind == "existsbang":
            return self.quantifier()
        return self.primary()

    def quantifier(self):
        kind, val, at = self.next()
        cls = {"forall": Forall, "exists": Exists}.get(val, ExistsUnique)
        nsort = self.sig.number_sort
        low = 0
        if self.peek()[1] == "1" and self.peek(1)[1] == "<=":
            self.next()
            self.next()
            low = 1
        k, name, at2 = self.next()
        if k != "name" or name in KEYWORDS:
            raise ParseError(f"expected a variable name, found {name!r}", at2)
        vsort = None
        if self.at(":"):
            self.next()
            k2, sname, at3 = self.next()
            if k2 != "name":
                raise ParseError("expected a sort name", at3)
            vsort = sname
        bound = None
        nxt = self.peek()[1]
        if low == 1:
            self.expect("<=")
            nxt = "<="
            self.pos -= 1
        if nxt in ("<=", "<"):
            op = self.next()[1]
            if nsort is None:
                raise ParseError("bounded quantifier needs a number sort", at)
            if vsort is not None and vsort != nsort:
                raise ParseError("bounded quantifier variable must be number-sorted", at)
            vsort = nsort
            var = Var(name, vsort)
            outer = self.free.pop(name, None)
            bterm = self.term()
            bterm, bsorts = self.infer(bterm)
            if nsort not in bsorts:
                raise SortError("bound guard must be a number-sort term")
            bterm = self.commit(bterm, nsort)
            bound = Bound(low, op, bterm)
        else:
            if vsort is None:
                vsort = self.sig.single_sort()
                if vsort is None:
                    raise ParseError(f"variable {name} needs a sort annotation", at2)
            if vsort not in self.sig.sorts:
                raise ParseError(f"unknown sort {vsort}", at2)
            var = Var(name, vsort)
            outer = self.free.pop(name, None)
        self.expect("(")
        saved = self.free.get(name)
        self.free[name] = var.sort
        body = self.iff()
        if saved is None:
            self.free.pop(name, None)
        else:
            self.free[name] = saved
        if outer is not None:
            self.free[name] = outer
        self.expect(")")
        return cls(var, body, bound, None)

    def primary(self):
        kind, val, at = self.peek()
        if val == "true":
            self.next()
            return TrueF()
        if val == "false":
            self.next()
            return FalseF()
        if val == "(":
            save = self.pos
            savefree = dict(self.free)
            savesorts = {k: set(v) for k, v in self.varsorts.items()}
            self.next()
            try:
                f = self.iff()
                self.expect(")")
                if self.peek()[1] in ("+", "-", "*", "^", "=", "<=", "<", "/"):
                    raise ParseError("parenthesized formula followed by a term operator", at)
                return f
            except (ParseError, SortError):
                self.pos = save
                self.free = savefree
                self.varsorts = savesorts
        return self.comparison()

    def comparison(self):
        kind, val, at = self.peek()
        left = self.term()
        # a relation or macro application is already a formula, so a
        # following "|" is the Or connective, not divisibility
        if (type(left) is App
                and not self.sig.fn_overloads(left.op)
                and (self.sig.rel_overloads(left.op) or left.op in self.macros)):
            if left.op in self.macros:
                return MacroApp(left.op, left.args)
            return self.make_atom(left.op, left.args, at)
        nxt = self.peek()[1]
        if nxt in ("=", "<=", "<", "|"):
            self.next()
            right = self.term()
            if nxt == "=":
                return self.make_eq(left, right, at)
            return self.make_atom(nxt, (left, right), at)
        if type(left) is App and (self.sig.rel_overloads(left.op)
                                  or left.op in self.macros):
            if left.op in self.macros:
                return MacroApp(left.op, left.args)
            return self.make_atom(left.op, left.args, at)
        raise ParseError("expected a formula, found a bare term", at)

    # terms -----------------------------------------------------------------

    def term(self):
        t = self.mult()
        while self.peek()[1] in ("+", "-"):
            op = self.next()[1]
            t = App(op, (t, self.mult()), None)
        return t

    def mult(self):
        t = self.unary_term()
        while self.at("*"):
            self.next()
            t = App("*", (t, self.unary_term()), None)
        return t

    def unary_term(self):
        if self.at("-"):
            _, _, at = self.next()
            inner = self.unary_term()
            if type(inner) is IntLit:
                return IntLit(-inner.value, inner.sort)
            if type(inner) is RatLit:
                return RatLit(-inner.value, inner.sort)
            return App("neg", (inner,), None)
        return self.power()

    def power(self):
        t = self.atom_term()
        if self.at("^"):
            self.next()
            sign = 1
            if self.at("-"):
                self.next()
                sign = -1
            k, val, at = self.next()
            if k != "int":
                raise ParseError("exponent must be an integer literal", at)
            return Pow(t, sign * int(val), None)
        return t

    def atom_term(self):
        kind, val, at = self.next()
        if kind == "int":
            if self.at("/") and self.peek(1)[0] == "int":
                self.next()
                _, den, _ = self.next()
                return RatLit(Fraction(int(val), int(den)), None)
            return IntLit(int(val), None)
        if val == "[":
            if self.sig.tuple_literal is None:
                raise ParseError("this signature has no tuple literals", at)
            items = []
            if not self.at("]"):
                items.append(self.term())
                while self.at(","):
                    self.next()
                    items.append(self.term())
            self.expect("]")
            sort, value = self.sig.tuple_literal(tuple(items))
            return Lit(value, sort)
        if val == "(":
            t = self.term()
            self.expect(")")
            return t
        if kind == "name" and val not in KEYWORDS:
            if self.at("(") and val in self.callable:
                self.next()
                args = [self.term()]
                while self.at(","):
                    self.next()
                    args.append(self.term())
                self.expect(")")
                return App(val, tuple(args), None)
            vsort = None
            if self.at(":") and self.peek(1)[0] == "name":
                self.next()
                vsort = self.next()[1]
            return self.name_term(val, vsort, at)
        raise ParseError(f"unexpected token {val!r} in term", at)

    def name_term(self, name, annotated, at):
        known = self.free.get(name)
        if known is not None:
            if known is _UNRESOLVED:
                if annotated is not None:
                    if annotated not in self.varsorts[name]:
                        raise SortError(
                            f"variable {name} cannot have sort {annotated}")
                    self.varsorts[name] = {annotated}
                    self.free[name] = annotated
                    return Var(name, annotated)
                return Var(name, _UNRESOLVED)
            if annotated is not None and annotated != known:
                raise ParseError(f"variable {name} already has sort {known}", at)
            return Var(name, known)
        if annotated is None and name in self.sig.literals:
            sort, value = self.sig.literals[name]
            return Lit(value, sort)
        if annotated is None and (name, ()) in self.sig.functions:
            return App(name, (), self.sig.functions[(name, ())])
        vsort = annotated or self.sig.single_sort()
        if vsort is None:
            # defer: sort will be pinned down by the enclosing atom
            self.free[name] = _UNRESOLVED
            self.varsorts[name] = set(self.sig.sorts)
            return Var(name, _UNRESOLVED)
        if vsort not in self.sig.sorts:
            raise ParseError(f"unknown sort {vsort}", at)
        self.free[name] = vsort
        return Var(name, vsort)

    # sort resolution -------------------------------------------------------

    def infer(self, t):
        """Return (term, set of possible sorts)."""
        tt = type(t)
        if tt is Var:
            if t.sort is _UNRESOLVED:
                return t, set(self.varsorts[t.name])
            return t, {t.sort}
        if tt is Lit:
            return t, {t.sort}
        if tt is IntLit:
            if t.sort is not None:
                return t, {t.sort}
            return t, set(self.sig.int_sorts)
        if tt is RatLit:
            if t.sort is not None:
                return t, {t.sort}
            return t, set(self.sig.rat_sorts)
        if tt is Pow:
            base, sorts = self.infer(t.base)
            sorts = {s for s in sorts
                     if self.sig.functions.get(("*", (s, s))) == s}
            return Pow(base, t.exp, None), sorts
        if tt is App:
            infos = [self.infer(a) for a in t.args]
            results = set()
            for (name, argsorts), res in self.sig.functions.items():
                if name != t.op or len(argsorts) != len(t.args):
                    continue
                if all(argsorts[i] in infos[i][1] for i in range(len(argsorts))):
                    results.add(res)
            return App(t.op, tuple(i[0] for i in infos), None), results
        raise TypeError(f"not a term: {t!r}")

    def commit(self, t, sort):
        tt = type(t)
        if tt is Var:
            if t.sort is _UNRESOLVED:
                if sort not in self.varsorts[t.name]:
                    raise SortError(f"variable {t.name} cannot have sort {sort}")
                self.varsorts[t.name] = {sort}
                if self.free.get(t.name) is _UNRESOLVED:
                    self.free[t.name] = sort
                return Var(t.name, sort)
            if t.sort != sort:
                raise SortError(f"variable {t.name} has sort {t.sort}, needed {sort}")
            return t
        if tt is Lit:
            if t.sort != sort:
                raise SortError(f"literal has sort {t.sort}, needed {sort}")
            return t
        if tt is IntLit:
            return IntLit(t.value, sort)
        if tt is RatLit:
            return RatLit(t.value, sort)
        if tt is Pow:
            return Pow(self.commit(t.base, sort), t.exp, sort)
        if tt is App:
            matches = []
            infos = [self.infer(a) for a in t.args]
            for (name, argsorts), res in self.sig.functions.items():
                if name != t.op or res != sort or len(argsorts) != len(t.args):
                    continue
                if all(argsorts[i] in infos[i][1] for i in range(len(argsorts))):
                    matches.append(argsorts)
            if not matches:
                raise SortError(f"no overload of {t.op} produces sort {sort}")
            if len(matches) > 1:
                raise ParseError(f"ambiguous overload of {t.op}; annotate a variable")
            argsorts = matches[0]
            return App(t.op, tuple(self.commit(infos[i][0], argsorts[i])
                                   for i in range(len(argsorts))), sort)
        raise TypeError(f"not a term: {t!r}")

    def make_eq(self, left, right, at):
        left, ls = self.infer(left)
        right, rs = self.infer(right)
        common = ls & rs
        if not common:
            raise SortError(f"equality between incompatible sorts {ls} and {rs}")
        if len(common) > 1:
            raise ParseError("ambiguous equation; annotate a variable", at)
        sort = next(iter(common))
        return Eq(self.commit(left, sort), self.commit(right, sort))

    def make_atom(self, rel, args, at):
        infos = [self.infer(a) for a in args]
        matches = []
        for (name, argsorts) in self.sig.relations:
            if name != rel or len(argsorts) != len(args):
                continue
            if all(argsorts[i] in infos[i][1] for i in range(len(argsorts))):
                matches.append(argsorts)
        if not matches:
            raise SortError(f"no relation {rel} matches argument sorts")
        if len(matches) > 1:
            raise ParseError(f"ambiguous relation {rel}; annotate a variable", at)
        argsorts = matches[0]
        return Atom(rel, tuple(self.commit(infos[i][0], argsorts[i])
                               for i in range(len(argsorts))))

    # final resolution pass over a parsed formula ---------------------------

    def resolve_formula(self, f):
        ft = type(f)
        if ft in (TrueF, FalseF, Atom, Eq):
            return f
        if ft is MacroApp:
            macro = self.macros[f.name]
            if len(macro.params) != len(f.args):
                raise ParseError(f"macro {f.name} takes {len(macro.params)} arguments")
            args = []
            for p, a in zip(macro.params, f.args):
                a, sorts = self.infer(a)
                if p.sort not in sorts:
                    raise SortError(f"macro {f.name}: argument for {p.name} "
                                    f"cannot have sort {p.sort}")
                args.append(self.commit(a, p.sort))
            return MacroApp(f.name, tuple(args))
        if ft is Not:
            return Not(self.resolve_formula(f.body))
        if ft in (And, Or, Implies, Iff):
            return ft(self.resolve_formula(f.left), self.resolve_formula(f.right))
        if ft in (Forall, Exists, ExistsUnique):
            return ft(f.var, self.resolve_formula(f.body), f.bound, f.tag)
        raise TypeError(f"not a formula: {f!r}")


def parse(text, sig, macros=None):
    """Parse a formula over the signature; returns a well-sorted AST."""
    return Parser(text, sig, macros).parse_formula()


def parse_term(text, sig, macros=None):
    return Parser(text, sig, macros).parse_term_only()
