"""List superstructures: a base structure extended with finite sequences.

``make_list_structure(inner)`` takes a single-sorted structure and
returns a structure with sorts for the base elements, the finite lists
over them (carrier values: Python tuples), and the naturals. When the
base is itself the naturals the base and number sorts coincide (two
sorts); otherwise the naturals come in as a third sort. The signature
adds, on top of the base structure's own symbols:

* ``len(s)`` — the length of a list, a number,
* ``t(s, a, i)`` — list ``s`` holds entry ``a`` at position ``i``
  (positions are 1-based),
* arithmetic and comparisons on the number sort.

``max_len`` truncates the list sort to tuples of length <= max_len,
which makes it finite whenever the base is finite (so quantifiers over
lists become decidable by exhaustion).

The module also provides native list operations (concatenation,
membership, permutation tests, folds) and builders for formulas that
define each of them through ``t`` and ``len`` alone. Every existential
in the builders carries a hint tag; :func:`standard_hints` resolves the
tags (entry extraction, fold accumulators, permutation witnesses), and
the evaluator verifies every hinted candidate, so hints speed up
positive instances but can never produce a wrong verdict. Negative
instances are decided by scans, which are exhaustive exactly where the
scanned sorts are finite or bounded; quantifiers over an infinite list
sort can otherwise only time out as unknown.
"""

from __future__ import annotations

import itertools
from collections import Counter

from ..logic.ast import (
    And, App, Atom, Bound, Eq, Exists, ExistsUnique, Forall, HintTag, Iff,
    Implies, IntLit, Not, Or, Signature, Var,
)
from ..structures import orders
from ..structures.base import EvalError
from ..structures.registry import TableStructure, get_structure

LIST = "List"
NUM = "Num"


# ---------------------------------------------------------------------------
# the structure


class ListStructure(TableStructure):
    """A base structure plus its finite sequences and the naturals."""

    inner = None
    base_sort = None
    list_sort = LIST
    num_sort = NUM
    max_len = None
    codec = None

    def canonical_key(self, sort, value):
        if sort == self.list_sort:
            keys = []
            for x in value:
                k = self.inner.canonical_key(self.base_sort, x)
                if k is None:
                    return None
                keys.append(k)
            return (len(value), tuple(keys))
        if sort == self.num_sort and sort not in self.inner.sig.sorts:
            return value
        return self.inner.canonical_key(sort, value)


def _num_relations():
    rels = {
        ("<=", (NUM, NUM)): lambda a, b: a <= b,
        ("<", (NUM, NUM)): lambda a, b: a < b,
        (">=", (NUM, NUM)): lambda a, b: a >= b,
        (">", (NUM, NUM)): lambda a, b: a > b,
        ("|", (NUM, NUM)): lambda d, p: p == 0 if d == 0 else p % d == 0,
    }
    return rels


def make_list_structure(inner, max_len=None):
    """Build the list superstructure over a single-sorted base structure.

    ``inner`` may be a structure or a registry name. List elements are
    Python tuples of base elements; ``max_len`` (optional) caps their
    length, yielding a finite list sort when the base is finite.
    """
    if isinstance(inner, str):
        inner = get_structure(inner)
    if len(inner.sig.sorts) != 1:
        raise ValueError("the base of a list structure must be single-sorted")
    base = inner.sig.sorts[0]
    two_sorted = base == NUM
    if max_len is not None and (type(max_len) is not int or max_len < 0):
        raise ValueError("max_len must be a natural number")

    sorts = (base, LIST) if two_sorted else (base, LIST, NUM)

    fsig = dict(inner.sig.functions)
    fsig[("len", (LIST,))] = NUM
    rsig = {k: True for k in inner.sig.relations}
    rsig[("t", (LIST, base, NUM))] = True
    ftab = {k: inner.function(k[0], k[1]) for k in inner.sig.functions}
    rtab = {k: inner.relation(k[0], k[1]) for k in inner.sig.relations}
    ftab[("len", (LIST,))] = len

    def t_rel(s, a, i):
        return (isinstance(s, tuple) and type(i) is int
                and 1 <= i <= len(s) and inner.equal(base, s[i - 1], a))

    rtab[("t", (LIST, base, NUM))] = t_rel

    if not two_sorted:
        fsig[("+", (NUM, NUM))] = NUM
        fsig[("*", (NUM, NUM))] = NUM
        ftab[("+", (NUM, NUM))] = lambda a, b: a + b
        ftab[("*", (NUM, NUM))] = lambda a, b: a * b
        for key, fn in _num_relations().items():
            rsig[key] = True
            rtab[key] = fn

    def tuple_literal(items):
        values = []
        for term in items:
            values.append(_literal_entry(inner, base, term))
        return LIST, tuple(values)

    sig = Signature(
        sorts=sorts,
        functions=fsig,
        relations=rsig,
        constants=dict(inner.sig.constants),
        number_sort=NUM,
        literals=dict(inner.sig.literals),
        int_sorts=(inner.sig.int_sorts + ((NUM,) if not two_sorted else ())),
        rat_sorts=inner.sig.rat_sorts,
        tuple_literal=tuple_literal,
    )

    base_size = inner.sort_size(base)
    enums = {base: lambda: inner.enum_sort(base)}
    sizes = {}
    if base_size is not None:
        sizes[base] = base_size
    if not two_sorted:
        enums[NUM] = orders.naturals

    if base_size is not None and max_len is not None:
        def list_enum():
            elems = list(inner.enum_sort(base))
            for k in range(max_len + 1):
                yield from itertools.product(elems, repeat=k)

        sizes[LIST] = sum(base_size ** k for k in range(max_len + 1))
    elif max_len is not None:
        def list_enum():
            for s in orders.sequences(lambda: inner.enum_sort(base)):
                if len(s) <= max_len:
                    yield s
    else:
        def list_enum():
            return orders.sequences(lambda: inner.enum_sort(base))
    enums[LIST] = list_enum

    def is_list(v):
        return (isinstance(v, tuple)
                and (max_len is None or len(v) <= max_len)
                and all(inner.contains(base, x) for x in v))

    membership = {base: lambda v: inner.contains(base, v), LIST: is_list}
    if not two_sorted:
        membership[NUM] = lambda v: type(v) is int and v >= 0

    def int_embed(v, sort):
        if sort == LIST:
            raise EvalError("lists have no integer literals")
        if sort == NUM and not two_sorted:
            if v < 0:
                raise EvalError("the number sort has no negative elements")
            return v
        return inner.embed_int(v, sort)

    rat_embed = None
    if inner.sig.rat_sorts:
        def rat_embed(v, sort):
            return inner.embed_rat(v, sort)

    name = f"List({inner.name})"
    if max_len is not None:
        name = f"List({inner.name},{max_len})"

    st = ListStructure(
        name, sig,
        functions=ftab,
        relations=rtab,
        enums=enums,
        sizes=sizes,
        membership=membership,
        int_embed=int_embed,
        rat_embed=rat_embed,
        inverter=lambda v: inner.invert(base, v),
        ints_are_numbers=True,
    )
    st.inner = inner
    st.base_sort = base
    st.max_len = max_len
    if two_sorted:
        from .codecs import get_codec
        st.codec = get_codec("cantor")
    return st


def _literal_entry(inner, base, term):
    from ..logic.ast import IntLit as I, Lit, RatLit
    t = type(term)
    if t is I:
        return inner.embed_int(term.value, base)
    if t is RatLit:
        return inner.embed_rat(term.value, base)
    if t is Lit:
        return inner.embed_lit(term.value, term.sort or base)
    from ..evaluator import evaluate_term
    return evaluate_term(inner, term, env={})


# ---------------------------------------------------------------------------
# native list operations


def concat(s, r):
    if not (isinstance(s, tuple) and isinstance(r, tuple)):
        raise ValueError("concat takes two lists")
    return s + r


def member(a, s):
    return any(x == a for x in s)


def is_permutation(sigma, n):
    """sigma lists each of 1..n exactly once."""
    return len(sigma) == n and sorted(sigma) == list(range(1, n + 1))


def permutation_covers(sigma, n):
    """Relaxed test: length n, entries in 1..n, every value appears."""
    return (len(sigma) == n and all(type(x) is int and 1 <= x <= n
                                    for x in sigma)
            and all(k in sigma for k in range(1, n + 1)))


def permutation_distinct(sigma, n):
    """Relaxed test: length n, entries in 1..n, no repeats."""
    return (len(sigma) == n and all(type(x) is int and 1 <= x <= n
                                    for x in sigma)
            and len(set(sigma)) == n)


def apply_permutation(sigma, s):
    """Rearrange s by position map sigma: result_j = s[sigma_j]."""
    if not is_permutation(sigma, len(s)):
        raise ValueError("not a permutation of the positions of s")
    return tuple(s[i - 1] for i in sigma)


def is_permutation_of(s, r):
    """The entries of r are those of s with multiplicity."""
    return len(s) == len(r) and Counter(s) == Counter(r)


def fold_left(op, s, empty=None):
    """op(...op(op(s1, s2), s3)..., sk); `empty` is the empty-list value."""
    if not s:
        if empty is None:
            raise ValueError("fold of an empty list needs an empty value")
        return empty
    acc = s[0]
    for x in s[1:]:
        acc = op(acc, x)
    return acc


def fold_sum(s):
    return sum(s)


def fold_product(s):
    out = 1
    for x in s:
        out *= x
    return out


def count_occurrences(s, a):
    return sum(1 for x in s if x == a)


# ---------------------------------------------------------------------------
# formula builders
#
# Each builder returns a formula over the given list structure whose free
# variables are documented. Shared hint tags:
#   list.entry  roles s, i   -> the entry of s at position i
#   list.fold.{op} roles s   -> the running-accumulator list of a fold
#   list.perm   roles a, b   -> a position map carrying a onto b
#   list.indicator roles s, a -> the 0/1 indicator list of positions equal to a


def len_term(s):
    return App("len", (s,), NUM)


def t_atom(s, a, i):
    return Atom("t", (s, a, i))


def _num(k):
    return IntLit(k, NUM)


def _names(prefix):
    return (f"{prefix}{j}" for j in itertools.count(1))


def _entry_tag(s, i):
    return HintTag("list.entry", (("s", s), ("i", i)))


def _and(*formulas):
    acc = formulas[0]
    for f in formulas[1:]:
        acc = And(acc, f)
    return acc


def member_formula(st):
    """Free a (base), s (list): a occurs in s."""
    a = Var("a", st.base_sort)
    s = Var("s", LIST)
    i = Var("i", NUM)
    return Exists(i, t_atom(s, a, i), Bound(1, "<=", len_term(s)))


def concat_formula(st, entry_bound=None):
    """Free x, y, z (lists): z is x followed by y.

    Entry quantifiers are hinted, so true instances verify fast. Over an
    infinite base their refutation scans cannot exhaust; pass
    ``entry_bound`` (lists of naturals only) to bound them, which keeps
    the formula exact for lists with entries <= entry_bound and makes it
    two-sided decidable there.
    """
    x, y, z = (Var(n, LIST) for n in "xyz")
    i, j = Var("i", NUM), Var("j", NUM)
    a, b = Var("a", st.base_sort), Var("b", st.base_sort)
    ebound = None
    if entry_bound is not None:
        _require_number_entries(st, "a bounded entry quantifier")
        ebound = Bound(0, "<=", _num(entry_bound))
    lengths = Eq(len_term(z), App("+", (len_term(x), len_term(y)), NUM))
    first = Forall(i, Exists(a, And(t_atom(x, a, i), t_atom(z, a, i)),
                             ebound, _entry_tag(x, i)),
                   Bound(1, "<=", len_term(x)))
    shifted = App("+", (j, len_term(x)), NUM)
    second = Forall(j, Exists(b, And(t_atom(y, b, j), t_atom(z, b, shifted)),
                              ebound, _entry_tag(y, j)),
                    Bound(1, "<=", len_term(y)))
    return _and(lengths, first, second)


def _require_number_entries(st, what):
    if st.base_sort != NUM:
        raise ValueError(f"{what} needs lists of naturals, "
                         f"not lists over {st.inner.name}")


def _perm_matrix(s, n):
    """s lists each of 1..n exactly once (s, n are terms)."""
    k, i = Var("pk", NUM), Var("pi", NUM)
    k2, i2 = Var("pk'", NUM), Var("pi'", NUM)
    rows = Forall(k, ExistsUnique(i, t_atom(s, k, i), Bound(1, "<=", n)),
                  Bound(1, "<=", n))
    cols = Forall(i2, ExistsUnique(k2, t_atom(s, k2, i2), Bound(1, "<=", n)),
                  Bound(1, "<=", n))
    return _and(Eq(len_term(s), n), rows, cols)


def permutation_formula(st):
    """Free s (list), n (number): s lists each of 1..n exactly once."""
    _require_number_entries(st, "the permutation test")
    return _perm_matrix(Var("s", LIST), Var("n", NUM))


def permutation_covers_formula(st):
    """Free s, n: length n, entries in 1..n, every value appears.

    Equivalent to the full permutation test on genuine lists (finitely
    many positions force injectivity once every value is hit).
    """
    _require_number_entries(st, "the permutation test")
    s, n = Var("s", LIST), Var("n", NUM)
    k, i = Var("pk", NUM), Var("pi", NUM)
    a, j = Var("pa", NUM), Var("pj", NUM)
    in_range = Forall(i, Exists(a, And(t_atom(s, a, i), Atom("<=", (a, n))),
                                Bound(1, "<=", n), _entry_tag(s, i)),
                      Bound(1, "<=", n))
    covers = Forall(k, Exists(j, t_atom(s, k, j), Bound(1, "<=", n)),
                    Bound(1, "<=", n))
    return _and(Eq(len_term(s), n), in_range, covers)


def permutation_distinct_formula(st):
    """Free s, n: length n, entries in 1..n, no value repeats.

    Also equivalent to the full permutation test on genuine lists.
    """
    _require_number_entries(st, "the permutation test")
    s, n = Var("s", LIST), Var("n", NUM)
    i, j, a = Var("pi", NUM), Var("pj", NUM), Var("pa", NUM)
    in_range = Forall(i, Exists(a, And(t_atom(s, a, i), Atom("<=", (a, n))),
                                Bound(1, "<=", n), _entry_tag(s, i)),
                      Bound(1, "<=", n))
    no_repeat = Forall(a, Forall(i, Forall(j, Implies(
        And(t_atom(s, a, i), t_atom(s, a, j)), Eq(i, j)),
        Bound(1, "<=", n)), Bound(1, "<=", n)), Bound(1, "<=", n))
    return _and(Eq(len_term(s), n), in_range, no_repeat)


def _fold_body(st, op, s, y, pool):
    """r is the running-accumulator list of folding op over s, result y."""
    base = st.base_sort
    r = Var(next(pool), LIST)
    h = Var(next(pool), base)
    v, w = Var(next(pool), base), Var(next(pool), base)
    i = Var(next(pool), NUM)
    succ = App("+", (i, _num(1)), NUM)
    heads = Exists(h, And(t_atom(s, h, _num(1)), t_atom(r, h, _num(1))),
                   None, _entry_tag(s, _num(1)))
    steps = Forall(i, Exists(v, And(
        t_atom(r, v, i),
        Exists(w, And(t_atom(s, w, succ),
                      t_atom(r, App(op, (v, w), base), succ)),
               None, _entry_tag(s, succ))),
        None, _entry_tag(r, i)),
        Bound(1, "<", len_term(s)))
    body = _and(Eq(len_term(r), len_term(s)), heads, steps,
                t_atom(r, y, len_term(s)))
    return Exists(r, body, None, HintTag(f"list.fold.{op}", (("s", s),)))


def fold_formula(st, op):
    """Free s (list), y (base): folding op left-to-right over s gives y.

    Defined for nonempty s (false on the empty list). The accumulator
    list is hinted; without the hint a definite verdict needs a finite
    list sort.
    """
    base = st.base_sort
    if st.sig.fn_result(op, (base, base)) != base:
        raise ValueError(f"{op} is not a binary operation on {base}")
    pool = _names("f")
    return _fold_body(st, op, Var("s", LIST), Var("y", base), pool)


def count_formula(st):
    """Free s (list), a (number), y (number): a occurs y times in s.

    Routes through the 0/1 indicator list of s against a, then folds +
    over it; empty lists count 0 directly.
    """
    _require_number_entries(st, "counting")
    s, a, y = Var("s", LIST), Var("a", NUM), Var("y", NUM)
    pool = _names("g")
    ind = Var(next(pool), LIST)
    b = Var(next(pool), NUM)
    i = Var(next(pool), NUM)
    pointwise = Forall(i, Exists(b, _and(
        t_atom(ind, b, i),
        Or(And(Eq(b, _num(1)), t_atom(s, a, i)),
           And(Eq(b, _num(0)), Not(t_atom(s, a, i))))),
        Bound(0, "<=", _num(1))),
        Bound(1, "<=", len_term(s)))
    empty = _and(Eq(len_term(s), _num(0)), Eq(y, _num(0)))
    folded = Exists(ind, _and(
        Eq(len_term(ind), len_term(s)),
        pointwise,
        _fold_body(st, "+", ind, y, pool)),
        None, HintTag("list.indicator", (("s", s), ("a", a))))
    return Or(empty, folded)


def permutation_of_formula(st):
    """Free a, b (lists): b rearranges the entries of a.

    The rearranging position map is hinted; a definite negative needs a
    finite list sort.
    """
    _require_number_entries(st, "permutation application")
    a, b = Var("a", LIST), Var("b", LIST)
    pool = _names("h")
    sigma = Var(next(pool), LIST)
    i, j, x = Var(next(pool), NUM), Var(next(pool), NUM), Var(next(pool), NUM)
    n = len_term(a)
    moves = Forall(j, Exists(i, And(
        t_atom(sigma, i, j),
        Exists(x, And(t_atom(a, x, i), t_atom(b, x, j)),
               None, _entry_tag(b, j))),
        Bound(1, "<=", n), _entry_tag(sigma, j)),
        Bound(1, "<=", n))
    witness = Exists(sigma, And(_perm_matrix(sigma, n), moves),
                     None, HintTag("list.perm", (("a", a), ("b", b))))
    return And(Eq(len_term(a), len_term(b)), witness)


def extensionality_body(st, entry_bound=None):
    """Free a, b (lists): a = b exactly when they agree entrywise.

    The entry quantifier ranges over the whole base sort; pass
    ``entry_bound`` (lists of naturals only) to bound it when the base
    is infinite.
    """
    a, b = Var("a", LIST), Var("b", LIST)
    x = Var("x", st.base_sort)
    i = Var("i", NUM)
    xbound = None
    if entry_bound is not None:
        _require_number_entries(st, "a bounded entry quantifier")
        xbound = Bound(0, "<=", _num(entry_bound))
    within = Or(Atom("<=", (i, len_term(a))), Atom("<=", (i, len_term(b))))
    agree = Forall(x, Forall(i, Implies(
        within, Iff(t_atom(a, x, i), t_atom(b, x, i))),
        Bound(1, "<=", App("+", (len_term(a), len_term(b)), NUM))),
        xbound)
    return Iff(Eq(a, b), agree)


# ---------------------------------------------------------------------------
# hint providers


def standard_hints(st):
    """Verified candidate providers for every tag the builders emit."""
    base = st.base_sort

    def entry(structure, env, roles):
        s, i = roles.get("s"), roles.get("i")
        if isinstance(s, tuple) and type(i) is int and 1 <= i <= len(s):
            yield s[i - 1]

    def perm(structure, env, roles):
        a, b = roles.get("a"), roles.get("b")
        if (isinstance(a, tuple) and isinstance(b, tuple)
                and is_permutation_of(a, b)):
            remaining = list(range(len(a)))
            sigma = []
            for bx in b:
                for pos, ai in enumerate(remaining):
                    if a[ai] == bx:
                        sigma.append(ai + 1)
                        del remaining[pos]
                        break
            yield tuple(sigma)

    def indicator(structure, env, roles):
        s, a = roles.get("s"), roles.get("a")
        if isinstance(s, tuple):
            yield tuple(1 if x == a else 0 for x in s)

    hints = {"list.entry": entry, "list.perm": perm,
             "list.indicator": indicator}

    for (op, argsorts), result in st.sig.functions.items():
        if argsorts == (base, base) and result == base:
            hints[f"list.fold.{op}"] = _fold_provider(st, op)
    return hints


def _fold_provider(st, op):
    fn = st.function(op, (st.base_sort, st.base_sort))

    def accumulate(structure, env, roles):
        s = roles.get("s")
        if isinstance(s, tuple) and s:
            acc = s[0]
            out = [acc]
            for x in s[1:]:
                acc = fn(acc, x)
                out.append(acc)
            yield tuple(out)

    return accumulate
