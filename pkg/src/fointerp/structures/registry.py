"""Named structures, built on demand from a small name grammar.

Recognized names:

    N                 naturals  <Num; +, *, <=, <, |>
    Z                 integers  <Int; +, -, *, <=, <, |>
    Zdiv              integers with only  <Int; +, |>  (0 and 1 as numerals)
    Q                 rationals <Elem; +, -, *, <=, <>
    GF(p)             prime field, p prime < 2^31
    R[x]              univariate polynomials over R in {Q, Z, GF(p)}
    R[x,x^-1]         univariate Laurent polynomials
    R[x1..xk]         k-variable polynomials (literals x1 .. xk)
    R[x1..xk,inv]     k-variable Laurent polynomials
    List(S)           finite sequences over S in {Q, N, GF(p)}

Ring-like structures use the single sort "Elem" and carry the relations
"|" (exact divisibility), "Irr" (irreducibility; undecided where no
exact test exists), and "Inv" (invertibility). Element syntax for CLI
input is the ordinary term grammar: `3/2*x^2 - x + 1`, `x1^2*x2 - 4`,
`x^-3 + 2`.
"""

from __future__ import annotations

import re
from fractions import Fraction
from functools import lru_cache

from ..logic.ast import Signature
from ..logic.parser import parse_term
from . import orders
from .base import EvalError, Structure
from .laurent import Laurent, MLaurent
from .polynomials import MPoly, Poly, is_irreducible, z_is_irreducible
from .rings import QQ, ZZ, gf


class TableStructure(Structure):
    """Structure whose behavior is given by plain lookup tables."""

    def __init__(self, name, sig, functions, relations, enums=None,
                 sizes=None, membership=None, int_embed=None, rat_embed=None,
                 inverter=None, canon=None, ints_are_numbers=False):
        super().__init__(name, sig)
        self._functions = dict(functions)
        self._relations = dict(relations)
        self._enums = dict(enums or {})
        self._sizes = dict(sizes or {})
        self._membership = dict(membership or {})
        self._int_embed = int_embed
        self._rat_embed = rat_embed
        self._inverter = inverter
        self._canon = canon
        self._ints_are_numbers = ints_are_numbers

    def enum_sort(self, sort):
        factory = self._enums.get(sort)
        return factory() if factory is not None else None

    def sort_size(self, sort):
        return self._sizes.get(sort)

    def contains(self, sort, value):
        pred = self._membership.get(sort)
        return pred(value) if pred is not None else True

    def function(self, name, argsorts):
        try:
            return self._functions[(name, tuple(argsorts))]
        except KeyError:
            raise EvalError(
                f"{self.name} does not interpret {name}{tuple(argsorts)}")

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
        if self._ints_are_numbers and type(value) is int:
            return value
        raise EvalError(f"{value!r} is not a number element of {self.name}")

    def invert(self, sort, value):
        if self._inverter is None:
            raise EvalError(f"{self.name} cannot invert {value!r}")
        return self._inverter(value)

    def canonical_key(self, sort, value):
        return self._canon(value) if self._canon is not None else None


# ---------------------------------------------------------------------------
# helpers

def _is_plain_int(v):
    return type(v) is int


def _compare_relations(sort):
    rels = {}
    for op, fn in (("<=", lambda a, b: a <= b), ("<", lambda a, b: a < b),
                   (">=", lambda a, b: a >= b), (">", lambda a, b: a > b)):
        rels[(op, (sort, sort))] = fn
    return rels


def _int_divides(d, p):
    if d == 0:
        return p == 0
    return p % d == 0


def _ring_ops(ring, sort, include_sub=True):
    """Signature entries and evaluator table for +, -, *, neg over a ring."""
    fsig = {("+", (sort, sort)): sort, ("*", (sort, sort)): sort}
    ftab = {("+", (sort, sort)): lambda a, b: a + b,
            ("*", (sort, sort)): lambda a, b: a * b}
    if include_sub:
        fsig[("-", (sort, sort))] = sort
        fsig[("neg", (sort,))] = sort
        ftab[("-", (sort, sort))] = lambda a, b: a - b
        ftab[("neg", (sort,))] = lambda a: -a
    return fsig, ftab


def _poly_divides(d, p):
    if d.is_zero:
        return p.is_zero
    return d.divides(p)


def _guarded_irr(value):
    try:
        if value.ring.name == "Z":
            return z_is_irreducible(value)
        return is_irreducible(value)
    except ValueError:
        return None


def _laurent_irr(value):
    try:
        return value.is_irreducible_laurent()
    except ValueError:
        return None


def _laurent_from_pairs(ring, pairs):
    d = {e: c for e, c in pairs if not ring.is_zero(c)}
    if not d:
        return Laurent.zero(ring)
    lo, hi = min(d), max(d)
    return Laurent(ring, lo,
                   tuple(d.get(e, ring.zero) for e in range(lo, hi + 1)))


def _coeff_seqs(ring):
    """Finite coefficient sequences with nonzero last entry (or empty)."""
    for seq in orders.sequences(ring.enum):
        if seq and ring.is_zero(seq[-1]):
            continue
        yield seq


# ---------------------------------------------------------------------------
# number structures

def _nat():
    S = "Num"
    sig = Signature(
        sorts=(S,),
        functions={("+", (S, S)): S, ("*", (S, S)): S},
        relations={**{k: True for k in _compare_relations(S)},
                   ("|", (S, S)): True},
        constants={},
        number_sort=S,
    )
    rels = _compare_relations(S)
    rels[("|", (S, S))] = _int_divides

    def embed(v, sort):
        if v < 0:
            raise EvalError("naturals have no negative elements")
        return v

    return TableStructure(
        "N", sig,
        functions={("+", (S, S)): lambda a, b: a + b,
                   ("*", (S, S)): lambda a, b: a * b},
        relations=rels,
        enums={S: orders.naturals},
        membership={S: lambda v: _is_plain_int(v) and v >= 0},
        int_embed=embed,
        canon=lambda v: v,
        ints_are_numbers=True,
    )


def _int():
    S = "Int"
    fsig, ftab = _ring_ops(ZZ, S)
    sig = Signature(
        sorts=(S,),
        functions=fsig,
        relations={**{k: True for k in _compare_relations(S)},
                   ("|", (S, S)): True},
        constants={},
        number_sort=S,
    )
    rels = _compare_relations(S)
    rels[("|", (S, S))] = _int_divides
    return TableStructure(
        "Z", sig,
        functions=ftab,
        relations=rels,
        enums={S: orders.integers},
        membership={S: _is_plain_int},
        int_embed=lambda v, sort: v,
        canon=lambda v: (abs(v), 0 if v >= 0 else 1),
        ints_are_numbers=True,
    )


def _zdiv():
    S = "Int"
    sig = Signature(
        sorts=(S,),
        functions={("+", (S, S)): S},
        relations={("|", (S, S)): True},
        constants={},
        number_sort=S,
    )
    return TableStructure(
        "Zdiv", sig,
        functions={("+", (S, S)): lambda a, b: a + b},
        relations={("|", (S, S)): _int_divides},
        enums={S: orders.integers},
        membership={S: _is_plain_int},
        int_embed=lambda v, sort: v,
        canon=lambda v: (abs(v), 0 if v >= 0 else 1),
        ints_are_numbers=True,
    )


def _rat():
    S = "Elem"
    fsig, ftab = _ring_ops(QQ, S)
    sig = Signature(
        sorts=(S,),
        functions=fsig,
        relations={k: True for k in _compare_relations(S)},
        constants={},
        rat_sorts=(S,),
    )

    def inverter(v):
        if v == 0:
            raise EvalError("zero has no multiplicative inverse")
        return Fraction(1, 1) / v

    return TableStructure(
        "Q", sig,
        functions=ftab,
        relations=_compare_relations(S),
        enums={S: orders.rationals},
        membership={S: lambda v: isinstance(v, Fraction) or _is_plain_int(v)},
        int_embed=lambda v, sort: Fraction(v),
        rat_embed=lambda v, sort: Fraction(v),
        inverter=inverter,
        canon=lambda v: (max(abs(v.numerator), v.denominator),
                         v.denominator, v.numerator),
    )


def _gf_structure(p):
    ring = gf(p)
    S = "Elem"
    fsig, ftab = _ring_ops(ring, S)
    ftab = {("+", (S, S)): ring.add, ("*", (S, S)): ring.mul,
            ("-", (S, S)): ring.sub, ("neg", (S,)): ring.neg}
    sig = Signature(
        sorts=(S,),
        functions=fsig,
        relations={},
        constants={},
        rat_sorts=(S,),
    )
    return TableStructure(
        ring.name, sig,
        functions=ftab,
        relations={},
        enums={S: ring.enum},
        sizes={S: p},
        membership={S: lambda v: _is_plain_int(v) and 0 <= v < p},
        int_embed=lambda v, sort: v % p,
        rat_embed=lambda v, sort: ring.from_fraction(v),
        inverter=ring.inv,
        canon=lambda v: v,
    )


# ---------------------------------------------------------------------------
# polynomial and Laurent structures

def _poly_structure(ring):
    S = "Elem"
    fsig, ftab = _ring_ops(ring, S)
    name = f"{ring.name}[x]"
    sig = Signature(
        sorts=(S,),
        functions=fsig,
        relations={("|", (S, S)): True, ("Irr", (S,)): True,
                   ("Inv", (S,)): True},
        constants={},
        literals={"x": (S, Poly.x(ring))},
        rat_sorts=(S,) if ring.is_field else (),
    )

    def enum():
        for seq in _coeff_seqs(ring):
            yield Poly(ring, seq)

    def inverter(v):
        if not v.is_unit:
            raise EvalError(f"{v!r} is not invertible in {name}")
        return Poly.const(ring, ring.inv(v.coeffs[0]))

    rat_embed = None
    if ring.is_field:
        rat_embed = lambda v, sort: Poly.const(ring, ring.from_fraction(v))

    return TableStructure(
        name, sig,
        functions=ftab,
        relations={("|", (S, S)): _poly_divides,
                   ("Irr", (S,)): _guarded_irr,
                   ("Inv", (S,)): lambda v: v.is_unit},
        enums={S: enum},
        membership={S: lambda v: isinstance(v, Poly)
                    and v.ring.name == ring.name},
        int_embed=lambda v, sort: Poly.const(ring, ring.from_int(v)),
        rat_embed=rat_embed,
        inverter=inverter,
        canon=lambda v: (v.degree, v.coeffs),
    )


def _mpoly_structure(ring, k):
    S = "Elem"
    fsig, ftab = _ring_ops(ring, S)
    name = f"{ring.name}[x1..x{k}]"
    lits = {f"x{i + 1}": (S, MPoly.var(ring, k, i)) for i in range(k)}
    sig = Signature(
        sorts=(S,),
        functions=fsig,
        relations={("|", (S, S)): True, ("Irr", (S,)): True,
                   ("Inv", (S,)): True},
        constants={},
        literals=lits,
        rat_sorts=(S,) if ring.is_field else (),
    )

    def enum():
        for seq in _coeff_seqs(ring):
            yield MPoly(ring, k, {orders.grlex_vector(k, i): c
                                  for i, c in enumerate(seq)})

    def inverter(v):
        if not v.is_unit:
            raise EvalError(f"{v!r} is not invertible in {name}")
        return MPoly.const(ring, k, ring.inv(next(iter(v.terms.values()))))

    rat_embed = None
    if ring.is_field:
        rat_embed = lambda v, sort: MPoly.const(ring, k, ring.from_fraction(v))

    return TableStructure(
        name, sig,
        functions=ftab,
        relations={("|", (S, S)): _poly_divides,
                   ("Irr", (S,)): lambda v: None,
                   ("Inv", (S,)): lambda v: v.is_unit},
        enums={S: enum},
        membership={S: lambda v: isinstance(v, MPoly) and v.k == k
                    and v.ring.name == ring.name},
        int_embed=lambda v, sort: MPoly.const(ring, k, ring.from_int(v)),
        rat_embed=rat_embed,
        inverter=inverter,
        canon=lambda v: (v.total_degree, sorted(v.terms.items())),
    )


def _laurent_structure(ring):
    S = "Elem"
    fsig, ftab = _ring_ops(ring, S)
    name = f"{ring.name}[x,x^-1]"
    sig = Signature(
        sorts=(S,),
        functions=fsig,
        relations={("|", (S, S)): True, ("Irr", (S,)): True,
                   ("Inv", (S,)): True},
        constants={},
        literals={"x": (S, Laurent.x_pow(ring, 1))},
        rat_sorts=(S,) if ring.is_field else (),
    )

    def enum():
        for seq in _coeff_seqs(ring):
            yield _laurent_from_pairs(
                ring, ((orders.zigzag(i), c) for i, c in enumerate(seq)))

    def inverter(v):
        if not v.is_unit:
            raise EvalError(f"{v!r} is not invertible in {name}")
        return v.inverse()

    rat_embed = None
    if ring.is_field:
        rat_embed = lambda v, sort: Laurent.const(ring, ring.from_fraction(v))

    return TableStructure(
        name, sig,
        functions=ftab,
        relations={("|", (S, S)): _poly_divides,
                   ("Irr", (S,)): _laurent_irr,
                   ("Inv", (S,)): lambda v: v.is_unit},
        enums={S: enum},
        membership={S: lambda v: isinstance(v, Laurent)
                    and v.ring.name == ring.name},
        int_embed=lambda v, sort: Laurent.const(ring, ring.from_int(v)),
        rat_embed=rat_embed,
        inverter=inverter,
        canon=lambda v: (len(v.coeffs), abs(v.offset), v.offset, v.coeffs),
    )


def _mlaurent_structure(ring, k):
    S = "Elem"
    fsig, ftab = _ring_ops(ring, S)
    name = f"{ring.name}[x1..x{k},inv]"
    lits = {f"x{i + 1}": (S, MLaurent.var(ring, k, i)) for i in range(k)}
    sig = Signature(
        sorts=(S,),
        functions=fsig,
        relations={("|", (S, S)): True, ("Irr", (S,)): True,
                   ("Inv", (S,)): True},
        constants={},
        literals=lits,
        rat_sorts=(S,) if ring.is_field else (),
    )

    def enum():
        for seq in _coeff_seqs(ring):
            yield MLaurent(ring, k, {orders.signed_vector(k, i): c
                                     for i, c in enumerate(seq)})

    def inverter(v):
        if not v.is_unit:
            raise EvalError(f"{v!r} is not invertible in {name}")
        return v.inverse()

    rat_embed = None
    if ring.is_field:
        rat_embed = lambda v, sort: MLaurent.const(ring, k,
                                                   ring.from_fraction(v))

    return TableStructure(
        name, sig,
        functions=ftab,
        relations={("|", (S, S)): _poly_divides,
                   ("Irr", (S,)): lambda v: None,
                   ("Inv", (S,)): lambda v: v.is_unit},
        enums={S: enum},
        membership={S: lambda v: isinstance(v, MLaurent) and v.k == k
                    and v.ring.name == ring.name},
        int_embed=lambda v, sort: MLaurent.const(ring, k, ring.from_int(v)),
        rat_embed=rat_embed,
        inverter=inverter,
        canon=lambda v: (len(v.terms), sorted(v.terms.items())),
    )


# ---------------------------------------------------------------------------
# the registry

_BASE_RINGS = {"Q": lambda: QQ, "Z": lambda: ZZ}
_GF_RE = re.compile(r"^GF\((\d+)\)$")
_BRACKET_RE = re.compile(r"^(Q|Z|GF\(\d+\))\[(.+)\]$")
_MULTI_RE = re.compile(r"^x1\.\.x(\d+)(,inv)?$")
_LIST_RE = re.compile(r"^List\((.+)\)$")


def _base_ring(token):
    m = _GF_RE.match(token)
    if m:
        return gf(int(m.group(1)))
    if token in _BASE_RINGS:
        return _BASE_RINGS[token]()
    raise KeyError(f"unknown coefficient ring {token!r}")


@lru_cache(maxsize=None)
def get_structure(name):
    """Look up (and cache) a structure by registry name."""
    text = name.replace(" ", "")
    if text == "N":
        return _nat()
    if text == "Z":
        return _int()
    if text == "Zdiv":
        return _zdiv()
    if text == "Q":
        return _rat()
    m = _GF_RE.match(text)
    if m:
        return _gf_structure(int(m.group(1)))
    m = _LIST_RE.match(text)
    if m:
        from ..tuples.lists import make_list_structure
        return make_list_structure(m.group(1))
    m = _BRACKET_RE.match(text)
    if m:
        ring = _base_ring(m.group(1))
        inside = m.group(2)
        if inside == "x":
            return _poly_structure(ring)
        if inside in ("x,x^-1", "x,inv"):
            return _laurent_structure(ring)
        mm = _MULTI_RE.match(inside)
        if mm:
            k = int(mm.group(1))
            if k < 1:
                raise KeyError("need at least one variable")
            if mm.group(2):
                return _mlaurent_structure(ring, k)
            return _mpoly_structure(ring, k)
    raise KeyError(
        f"unknown structure {name!r}; known forms: N, Z, Zdiv, Q, GF(p), "
        f"R[x], R[x,x^-1], R[x1..xk], R[x1..xk,inv] for R in Q/Z/GF(p), "
        f"and List(S)")


def structure_names():
    """Sample of valid registry names (the grammar admits infinitely many)."""
    return ["N", "Z", "Zdiv", "Q", "GF(5)", "Q[x]", "GF(5)[x]", "Z[x]",
            "Q[x,x^-1]", "Q[x1..x2]", "Z[x1..x2]", "Q[x1..x2,inv]",
            "Z[x1..x2,inv]", "List(Q)", "List(N)"]


def parse_element(structure, text):
    """Parse CLI element syntax (e.g. `3/2*x^2 - x + 1`) into a carrier value.

    The text must be a closed term over the structure's signature; it is
    evaluated in the structure itself.
    """
    from ..evaluator import evaluate_term
    term = parse_term(text, structure.sig)
    return evaluate_term(structure, term, env={})
