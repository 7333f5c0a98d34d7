"""Structure interface the evaluator works against.

A structure binds a signature to concrete Python values: one carrier per
sort, a callable per function symbol, and a callable per relation symbol.
Relation callables may return True, False, or None; None means the
structure cannot decide the atom and the evaluator reports Unknown.

Carriers may be infinite. A structure exposes them through enumerators:
`enum_sort` returns a fresh iterator in a fixed canonical order (or None
when the sort is not enumerable). An iterator that terminates is a proof
that the whole carrier was seen; enumerators must only be finite when the
carrier is.
"""

from __future__ import annotations

from fractions import Fraction


class EvalError(Exception):
    """A term could not be evaluated in the structure."""


class Structure:
    """Base class; concrete structures override the hooks they support."""

    def __init__(self, name, sig):
        self.name = name
        self.sig = sig

    # carriers ---------------------------------------------------------------

    def enum_sort(self, sort):
        """Fresh iterator over the carrier of `sort`, or None."""
        return None

    def sort_size(self, sort):
        """Number of elements if known finite, else None."""
        return None

    def contains(self, sort, value):
        """Membership test, used to validate hint-supplied witnesses."""
        return True

    # symbols ----------------------------------------------------------------

    def function(self, name, argsorts):
        raise EvalError(f"{self.name} does not interpret function {name}{argsorts}")

    def relation(self, name, argsorts):
        raise EvalError(f"{self.name} does not interpret relation {name}{argsorts}")

    # literals and numbers -----------------------------------------------------

    def embed_int(self, value, sort):
        raise EvalError(f"{self.name} has no integer literals of sort {sort}")

    def embed_rat(self, value, sort):
        raise EvalError(f"{self.name} has no rational literals of sort {sort}")

    def embed_lit(self, value, sort):
        """Opaque parsed literals (e.g. tuple syntax) pass through."""
        return value

    def equal(self, sort, a, b):
        return a == b

    def to_int(self, value):
        """Number-sort element -> Python int, for bounded quantifiers."""
        raise EvalError(f"{self.name} has no number sort")

    def number_range(self, low, hi, strict):
        """Iterate number-sort elements from `low` up to `hi` (int)."""
        stop = hi if strict else hi + 1
        if stop <= low:
            return iter(())
        return (self.embed_int(i, self.sig.number_sort) for i in range(low, stop))

    def power(self, sort, base, exp):
        """Integer powers via the sort's multiplication."""
        if exp < 0:
            inv = self.invert(sort, base)
            return self.power(sort, inv, -exp)
        mul = self.function("*", (sort, sort))
        if exp == 0:
            return self.one(sort)
        acc = None
        sq = base
        while exp:
            if exp & 1:
                acc = sq if acc is None else mul(acc, sq)
            exp >>= 1
            if exp:
                sq = mul(sq, sq)
        return acc

    def one(self, sort):
        try:
            return self.embed_int(1, sort)
        except EvalError:
            raise EvalError(f"{self.name} has no unit of sort {sort}")

    def invert(self, sort, value):
        raise EvalError(f"{self.name} cannot invert elements of sort {sort}")

    def canonical_key(self, sort, value):
        """Comparable key for the sort's canonical element order, or None.

        When present, quotient builders pick the least key in each class;
        otherwise they fall back on first-found enumeration order.
        """
        return None


class FiniteStructure(Structure):
    """A structure with explicitly listed finite carriers.

    functions/relations are dicts keyed like the signature's, mapping to
    Python callables. Relation callables may return None for undecided.
    """

    def __init__(self, name, sig, carriers, functions, relations,
                 int_embed=None, rat_embed=None):
        super().__init__(name, sig)
        self.carriers = {s: list(vs) for s, vs in carriers.items()}
        self._functions = dict(functions)
        self._relations = dict(relations)
        self._int_embed = int_embed
        self._rat_embed = rat_embed
        self._index = {s: {v: i for i, v in enumerate(vs)}
                       for s, vs in self.carriers.items()
                       if all(isinstance(v, (int, str, tuple, frozenset, Fraction))
                              for v in vs)}

    def enum_sort(self, sort):
        if sort not in self.carriers:
            return None
        return iter(self.carriers[sort])

    def sort_size(self, sort):
        vs = self.carriers.get(sort)
        return None if vs is None else len(vs)

    def contains(self, sort, value):
        idx = self._index.get(sort)
        if idx is not None:
            return value in idx
        return value in self.carriers.get(sort, ())

    def function(self, name, argsorts):
        try:
            return self._functions[(name, tuple(argsorts))]
        except KeyError:
            raise EvalError(f"{self.name} does not interpret {name}{tuple(argsorts)}")

    def relation(self, name, argsorts):
        try:
            return self._relations[(name, tuple(argsorts))]
        except KeyError:
            raise EvalError(f"{self.name} does not interpret relation "
                            f"{name}{tuple(argsorts)}")

    def embed_int(self, value, sort):
        if self._int_embed is None:
            raise EvalError(f"{self.name} has no integer literals")
        return self._int_embed(value, sort)

    def embed_rat(self, value, sort):
        if self._rat_embed is None:
            raise EvalError(f"{self.name} has no rational literals")
        return self._rat_embed(value, sort)

    def to_int(self, value):
        if isinstance(value, int):
            return value
        raise EvalError(f"{value!r} is not a number element")
