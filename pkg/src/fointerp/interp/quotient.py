"""Running a code: the interpreted structure, built inside the target.

The quotient structure's elements are blocks (tuples of target elements)
satisfying the code's domain formula, taken up to the code's equivalence
formula and normalized to canonical representatives. Operations evaluate
the code's symbol formulas; all searches are bounded and witness-
accelerated, and anything undecided within budget raises rather than
guessing.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from ..evaluator import Budget, evaluate
from ..structures.base import EvalError, Structure
from .code import CodeError

__all__ = [
    "InterpretationError", "CoordinateMap", "QuotientStructure",
    "build_quotient", "block_product",
]


class InterpretationError(EvalError):
    """The code misbehaved in use: an operation had no value, a constant's
    class was empty, or a required verdict stayed undecided."""

    def __init__(self, message, witnesses=()):
        super().__init__(message)
        self.witnesses = tuple(witnesses)


@dataclass(frozen=True)
class CoordinateMap:
    """A concrete reading of carrier blocks as source elements.

    forward: block -> source element (constant on equivalence classes);
    section: source element -> a block representing it (optional);
    graph:   a DefinedFormula over block + source variable when the map
             is definable (optional).
    """

    forward: object
    section: object = None
    graph: object = None

    def __call__(self, block):
        return self.forward(block)


def block_product(structure, sorts):
    """Weight-ordered enumeration of blocks: tuples with one coordinate
    per sort, drawn from the structure's sort enumerators. Terminates
    exactly when every coordinate's carrier is finite."""
    if not sorts:
        yield ()
        return
    streams = []
    for s in sorts:
        it = structure.enum_sort(s)
        if it is None:
            return
        streams.append(it)
    cached = [[] for _ in sorts]
    done = [False] * len(sorts)

    def fetch(i, k):
        while len(cached[i]) <= k and not done[i]:
            try:
                cached[i].append(next(streams[i]))
            except StopIteration:
                done[i] = True
        return k < len(cached[i])

    width = len(sorts)
    for i in range(width):
        fetch(i, 0)
    if any(not c for c in cached):
        return  # an empty carrier admits no blocks
    for total in itertools.count(0):
        for split in _compositions(total, width):
            vals = []
            ok = True
            for i, k in enumerate(split):
                if not fetch(i, k):
                    ok = False
                    break
                vals.append(cached[i][k])
            if ok:
                yield tuple(vals)
        if all(done) and total >= sum(len(c) - 1 for c in cached):
            return


def _compositions(total, width):
    """All tuples of `width` naturals summing to `total`."""
    if width == 1:
        yield (total,)
        return
    for first in range(total + 1):
        for rest in _compositions(total - first, width - 1):
            yield (first,) + rest


class QuotientStructure(Structure):
    """The source-signature structure a code defines inside its target.

    Elements of an interpreted sort are canonical representative blocks.
    Representatives are chosen deterministically: the least block of the
    class under the target's canonical key among those found within the
    representative budget, falling back to first-found enumeration order,
    and to the queried block itself when the search finds nothing.
    """

    def __init__(self, code, base, params=(), *, budget=None,
                 rep_candidates=2000, hints=None, coordinate_maps=None,
                 paranoid=False):
        super().__init__(f"{code.name}({base.name})", code.source)
        self.code = code
        self.base = base
        self.params = tuple(params)
        self._param_env = code.param_env(self.params)
        template = budget or Budget()
        self._candidates = template.candidates
        self._nodes = template.nodes
        self._rep_candidates = rep_candidates
        self._hints = dict(hints or {})
        self._maps = dict(coordinate_maps or {})
        self.paranoid = paranoid
        self._rep_cache = {}
        self._lit_cache = {}
        self._const_cache = {}
        for key in code.constants:
            self._const_cache[key] = self._constant(key)

    # -- internal evaluation -------------------------------------------------

    def _budget(self):
        return Budget(candidates=self._candidates, nodes=self._nodes)

    def _eval(self, formula, env):
        full = dict(self._param_env)
        full.update(env)
        return evaluate(self.base, formula, env=full, budget=self._budget(),
                        hints=self._hints)

    def _env_for(self, df, blocks):
        flat = []
        for b in blocks:
            flat.extend(b)
        if len(flat) != len(df.args):
            raise InterpretationError(
                f"{self.name}: expected {len(df.args)} block entries, "
                f"got {len(flat)}")
        return dict(zip(df.arg_names, flat))

    def _spec(self, sort):
        spec = self.code.specs.get(sort)
        if spec is None:
            raise EvalError(f"{self.name} has no sort {sort}")
        return spec

    # -- the carrier ---------------------------------------------------------

    def in_domain(self, sort, block):
        spec = self._spec(sort)
        return self._eval(spec.domain.formula,
                          dict(zip(spec.domain.arg_names, block)))

    def contains(self, sort, value):
        if not isinstance(value, tuple) or \
                len(value) != self._spec(sort).width:
            return False
        return self.in_domain(sort, value).is_true

    def equal(self, sort, a, b):
        spec = self._spec(sort)
        if a == b:
            return True
        r = self._eval(spec.equiv.formula,
                       dict(zip(spec.equiv.arg_names, tuple(a) + tuple(b))))
        if r.is_unknown:
            raise InterpretationError(
                f"{self.name}: equivalence of {a!r} and {b!r} undecided "
                f"({r.reason})", witnesses=(a, b))
        return r.is_true

    def _class_key(self, sort, block):
        spec = self._spec(sort)
        keys = tuple(self.base.canonical_key(s, v)
                     for s, v in zip(spec.sorts, block))
        if any(k is None for k in keys):
            return None
        return keys

    def representative(self, sort, block):
        """The canonical block of `block`'s class."""
        key = self._class_key(sort, block)
        cached = self._rep_cache.get((sort, key)) if key is not None else None
        if cached is not None:
            return cached
        spec = self._spec(sort)
        best = block
        best_key = key
        wit = self.code.witnesses.get(("equiv", sort))
        candidates = []
        if wit is not None:
            candidates.append(iter(wit(self.base, self.params, block)))
        candidates.append(itertools.islice(
            block_product(self.base, spec.sorts), self._rep_candidates))
        seen = 0
        for cand in itertools.chain(*candidates):
            cand = tuple(cand)
            seen += 1
            if seen > self._rep_candidates * 2:
                break
            if cand == block:
                continue
            ck = self._class_key(sort, cand)
            if best_key is not None and ck is not None and ck >= best_key:
                continue
            try:
                same = self.equal(sort, cand, block)
            except InterpretationError:
                continue
            if not same:
                continue
            if not self.in_domain(sort, cand).is_true:
                continue
            if best_key is None or (ck is not None and ck < best_key):
                best = cand
                best_key = ck
                if best_key is None:
                    break  # first-found order: stop at the first hit
        if key is not None:
            self._rep_cache[(sort, key)] = best
            bk = self._class_key(sort, best)
            if bk is not None:
                self._rep_cache[(sort, bk)] = best
        return best

    def enum_sort(self, sort):
        spec = self._spec(sort)

        def gen():
            reps = []
            skipped_undecided = False
            for block in block_product(self.base, spec.sorts):
                r = self.in_domain(sort, block)
                if r.is_unknown:
                    skipped_undecided = True
                    continue
                if not r.is_true:
                    continue
                fresh = True
                for old in reps:
                    try:
                        if self.equal(sort, old, block):
                            fresh = False
                            break
                    except InterpretationError:
                        skipped_undecided = True
                        fresh = False
                        break
                if not fresh:
                    continue
                rep = self.representative(sort, block)
                reps.append(rep)
                yield rep
            if skipped_undecided:
                # a finite scan that dropped undecided blocks must not
                # pass for an exhaustive one
                raise InterpretationError(
                    f"{self.name}: enumeration of sort {sort} dropped "
                    f"undecided blocks")

        return gen()

    def sort_size(self, sort):
        return None

    # -- symbols ---------------------------------------------------------------

    def _search_value(self, df, arg_blocks, result_sort, *, want_second=None,
                      witness_key=None):
        """Find a result block making df true at arg_blocks; optionally a
        second one inequivalent to `want_second`."""
        spec = self._spec(result_sort)
        flat = []
        for b in arg_blocks:
            flat.extend(b)
        names = df.arg_names
        if len(flat) + spec.width != len(names):
            raise InterpretationError(
                f"{self.name}: formula expects {len(names)} block entries, "
                f"got {len(flat)} + {spec.width}")
        arg_env = dict(zip(names[:len(flat)], flat))
        result_names = names[len(flat):]

        def candidates():
            wit = self.code.witnesses.get(witness_key) \
                if witness_key is not None else None
            if wit is not None:
                yield from wit(self.base, self.params, *arg_blocks)
            yield from itertools.islice(
                block_product(self.base, spec.sorts), self._candidates)

        undecided = False
        for cand in candidates():
            cand = tuple(cand)
            env = dict(arg_env)
            env.update(zip(result_names, cand))
            r = self._eval(df.formula, env)
            if r.is_unknown:
                undecided = True
                continue
            if not r.is_true:
                continue
            if not self.in_domain(result_sort, cand).is_true:
                continue
            if want_second is not None:
                if self.equal(result_sort, cand, want_second):
                    continue
            return cand, undecided
        return None, undecided

    def _apply(self, key, df, result_sort, arg_blocks):
        wkey = ("fun",) + key if key else None
        value, undecided = self._search_value(
            df, list(arg_blocks), result_sort, witness_key=wkey)
        if value is None:
            raise InterpretationError(
                f"{self.name}: no value for {key[0] if key else 'constant'}"
                f" at {tuple(arg_blocks)!r} within budget"
                + (" (some candidates undecided)" if undecided else ""),
                witnesses=tuple(arg_blocks))
        if self.paranoid:
            second, _ = self._search_value(
                df, list(arg_blocks), result_sort, want_second=value,
                witness_key=wkey)
            if second is not None:
                raise InterpretationError(
                    f"{self.name}: {key[0] if key else 'constant'} is not "
                    f"functional at {tuple(arg_blocks)!r}",
                    witnesses=tuple(arg_blocks) + (value, second))
        return self.representative(result_sort, value)

    def _constant(self, key):
        name, sort = key
        df = self.code.constants[key]
        value, undecided = self._search_value(
            df, [], sort, witness_key=("const",) + key)
        if value is None:
            raise InterpretationError(
                f"{self.name}: constant {name} has an empty class"
                + (" within budget" if not undecided
                   else " (some candidates undecided)"),
                witnesses=())
        return self.representative(sort, value)

    def function(self, name, argsorts):
        argsorts = tuple(argsorts)
        if argsorts == ():
            res = self.sig.fn_result(name, ())
            value = self._const_cache.get((name, res))
            if value is not None:
                return lambda: value
            raise EvalError(f"{self.name} does not interpret constant {name}")
        key = (name, argsorts)
        df = self.code.functions.get(key)
        if df is None:
            raise EvalError(
                f"{self.name} does not interpret {name}{argsorts}")
        res = self.sig.fn_result(name, argsorts)

        def run(*args):
            return self._apply(key, df, res, args)

        return run

    def relation(self, name, argsorts):
        key = (name, tuple(argsorts))
        df = self.code.relations.get(key)
        if df is None:
            raise EvalError(
                f"{self.name} does not interpret relation {name}{argsorts}")

        def run(*args):
            blocks = []
            for a in args:
                blocks.append(tuple(a))
            r = self._eval(df.formula, self._env_for(df, blocks))
            if r.is_unknown:
                return None
            return r.is_true

        return run

    # -- literals and numbers ----------------------------------------------------

    def embed_int(self, value, sort):
        if sort is None:
            sort = self.sig.number_sort
        if sort is None or value < 0:
            raise EvalError(f"{self.name} cannot embed {value}")
        cached = self._lit_cache.get(("int", value, sort))
        if cached is not None:
            return cached
        if value in (0, 1):
            df = self.code.numerals.get(value)
            if df is None:
                raise EvalError(
                    f"code {self.code.name} does not define numeral {value}")
            block, _undecided = self._search_value(
                df, [], sort, witness_key=("numeral", value))
            if block is None:
                raise InterpretationError(
                    f"{self.name}: numeral {value} has no block within "
                    f"budget", witnesses=())
            block = self.representative(sort, block)
        else:
            one = self.embed_int(1, sort)
            add = self.function("+", (sort, sort))
            block = self.embed_int(value - 1, sort)
            block = add(block, one)
        self._lit_cache[("int", value, sort)] = block
        return block

    def embed_lit(self, value, sort):
        key = ("lit", sort, value if isinstance(value, (int, tuple, str))
               else repr(value))
        cached = self._lit_cache.get(key)
        if cached is not None:
            return cached
        name = None
        for lname, (lsort, lvalue) in (self.sig.literals or {}).items():
            if lsort == sort and lvalue == value:
                name = lname
                break
        if name is None or name not in self.code.literals:
            raise EvalError(
                f"{self.name} cannot embed literal {value!r} of sort {sort}")
        df = self.code.literals[name]
        block, _undecided = self._search_value(
            df, [], sort, witness_key=("literal", name))
        if block is None:
            raise InterpretationError(
                f"{self.name}: literal {name} has no block within budget",
                witnesses=())
        block = self.representative(sort, block)
        self._lit_cache[key] = block
        return block

    def to_int(self, value):
        ns = self.sig.number_sort
        cm = self._maps.get(ns)
        if cm is None:
            raise EvalError(
                f"{self.name} has no coordinate map for its number sort")
        n = cm(value)
        if not isinstance(n, int):
            raise EvalError(f"coordinate map gave a non-integer {n!r}")
        return n

    def coordinate_map(self, sort):
        return self._maps.get(sort)


def build_quotient(code, base, params=(), **kwargs):
    """Construct the interpreted structure of `code` over `base`.

    Raises InterpretationError during construction if a constant's class
    is empty, and during use if an operation finds no value (or, with
    paranoid=True, finds two inequivalent values) within budget.
    """
    if base.sig is not code.target and base.sig != code.target:
        raise CodeError(
            f"{code.name} targets a different signature than {base.name}")
    params = tuple(params)
    env = code.param_env(params)  # validates the count
    del env
    for v, val in zip(code.params, params):
        if not base.contains(v.sort, val):
            raise CodeError(
                f"parameter {v.name}={val!r} is not in sort {v.sort}")
    return QuotientStructure(code, base, params, **kwargs)
