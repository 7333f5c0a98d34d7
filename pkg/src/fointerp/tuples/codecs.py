"""Bijections between natural numbers and finite tuples of naturals.

A codec packages four things:

* ``encode``/``decode`` — mutually inverse maps between numbers and
  tuples (``decode(0) == ()``),
* ``component_formula(window)`` — an arithmetic formula with free
  variables ``n, a, i`` that holds exactly when the i-th component
  (1-based) of the tuple numbered ``n`` is ``a``,
* ``length_formula(window)`` — an arithmetic formula with free
  variables ``n, k`` that holds exactly when the tuple numbered ``n``
  has length ``k``.

Both formulas are pure first-order arithmetic over the naturals
structure (signature ``+ * <= < |``) with every quantifier bounded by a
term, so they are decidable by finite scans. They are generated for a
stated ``window``: agreement with ``decode`` is exact for all
``n <= window`` (the unrolling depth covers every tuple length that
occurs there); beyond the window the bounded search may miss longer
tuples. Each quantifier carries a hint tag, and :meth:`TupleCodec.hints`
supplies verified candidate providers, so positive instances evaluate
fast; the evaluator re-checks every hinted candidate against the
formula body, so a wrong hint can never produce a wrong verdict.

``check_axioms`` verifies the five coding laws on a finite window:

* length-defined — every number decodes to a tuple,
* no-components-beyond-length — positions past the length are empty,
* component-functional — each position within the length holds exactly
  one valid entry,
* decode-injective — distinct numbers decode to distinct tuples,
* every-tuple-coded — every tuple from the checked window is some
  number's decoding (an infinite scheme; only lengths up to ``max_len``
  are certified, and the report says so).
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

from ..logic.ast import (
    And, App, Atom, Bound, Eq, Exists, Forall, HintTag, IntLit, Or, Var,
)

NUM = "Num"
DEFAULT_WINDOW = 10_000

_AXIOM_ORDER = (
    "length-defined",
    "no-components-beyond-length",
    "component-functional",
    "decode-injective",
    "every-tuple-coded",
)


# ---------------------------------------------------------------------------
# small AST builders over the naturals signature


def _v(name):
    return Var(name, NUM)


def _n(value):
    return IntLit(value, NUM)


def _add(*terms):
    acc = terms[0]
    for t in terms[1:]:
        acc = App("+", (acc, t), NUM)
    return acc


def _mul(a, b):
    return App("*", (a, b), NUM)


def _and(*formulas):
    acc = formulas[0]
    for f in formulas[1:]:
        acc = And(acc, f)
    return acc


def _or(*formulas):
    acc = formulas[0]
    for f in formulas[1:]:
        acc = Or(acc, f)
    return acc


def _le(a, b):
    return Atom("<=", (a, b))


def _lt(a, b):
    return Atom("<", (a, b))


def _exists(name, body, *, lt=None, le=None, low=0, tag=None):
    bound = None
    if lt is not None:
        bound = Bound(low, "<", lt)
    elif le is not None:
        bound = Bound(low, "<=", le)
    return Exists(_v(name), body, bound, tag)


def _forall(name, body, *, lt=None, le=None, low=0, tag=None):
    bound = None
    if lt is not None:
        bound = Bound(low, "<", lt)
    elif le is not None:
        bound = Bound(low, "<=", le)
    return Forall(_v(name), body, bound, tag)


# ---------------------------------------------------------------------------
# codecs


class TupleCodec:
    """A bijection between naturals and finite tuples of naturals.

    ``alphabet`` is None when entries range over all naturals, else the
    largest allowed entry (the codec then enumerates tuples over the
    finite alphabet ``{0..alphabet}``).
    """

    name = "abstract"
    alphabet = None

    # --- maps ---

    def encode(self, tup):
        raise NotImplementedError

    def decode(self, n):
        raise NotImplementedError

    def _check_entries(self, tup):
        for x in tup:
            if type(x) is not int or x < 0:
                raise ValueError(f"tuple entries must be naturals, got {x!r}")
            if self.alphabet is not None and x > self.alphabet:
                raise ValueError(
                    f"entry {x} exceeds the alphabet bound {self.alphabet}")

    # --- nested tuples: a tuple of tuples is coded entrywise, then as a
    #     tuple of the resulting numbers ---

    def encode_nested(self, tuples):
        return self.encode(tuple(self.encode(t) for t in tuples))

    def decode_nested(self, n):
        return tuple(self.decode(m) for m in self.decode(n))

    # --- formulas ---

    def max_length(self, window):
        """Largest tuple length occurring among decode(n), n <= window.

        The all-zeros tuple has the smallest code of its length, so the
        answer is the largest k with encode((0,)*k) <= window.
        """
        k = 0
        while self.encode((0,) * (k + 1)) <= window:
            k += 1
        return k

    def component_formula(self, window=DEFAULT_WINDOW):
        raise NotImplementedError

    def length_formula(self, window=DEFAULT_WINDOW):
        raise NotImplementedError

    def hints(self):
        """Verified candidate providers for this codec's tagged quantifiers."""
        return {}


class CantorCodec(TupleCodec):
    """Iterated-pairing codec: () -> 0, (a, *rest) -> pair(a, code(rest)) + 1
    with the quadratic diagonal pairing pair(a, b) = (a+b)(a+b+1)/2 + a.

    The formulas quantify the pairing diagonal s = head + tail first.
    A nonzero code u splits as 2u = s(s+1) + 2*linear + 2 where the
    linear coordinate is the head here (the tail in the swapped
    variant); the diagonal satisfies s(s+1) + 2 <= 2u <= s(s+1) + 3s + 2
    and is unique, so one constant-size filter rejects every wrong
    diagonal candidate and the whole split costs a single linear scan.
    """

    name = "cantor"
    _linear_is_head = True

    @staticmethod
    def _pair(a, b):
        return (a + b) * (a + b + 1) // 2 + a

    @staticmethod
    def _unpair(m):
        # w is the diagonal index: w(w+1)/2 <= m < (w+1)(w+2)/2
        w = (math.isqrt(8 * m + 1) - 1) // 2
        a = m - w * (w + 1) // 2
        return a, w - a

    def _split(self, n):
        """Head and tail-code of a nonzero code."""
        return self._unpair(n - 1)

    def encode(self, tup):
        tup = tuple(tup)
        self._check_entries(tup)
        code = 0
        for a in reversed(tup):
            code = self._pair(a, code) + 1
        return code

    def decode(self, n):
        if type(n) is not int or n < 0:
            raise ValueError(f"codes are naturals, got {n!r}")
        out = []
        while n:
            a, n = self._split(n)
            out.append(a)
        return tuple(out)

    # --- formulas ---

    def _tag(self, part, prev):
        return HintTag(f"{self.name}.{part}", (("prev", prev),))

    def _diag_filter(self, u, s):
        """s is the unique diagonal of the split of u (u >= 1)."""
        lo = _le(_add(_mul(s, s), s, _n(2)), _add(u, u))
        hi = _le(_add(u, u), _add(_mul(s, s), s, s, s, _n(2)))
        return And(lo, hi)

    def _linear_eq(self, u, s, x):
        """2u = s(s+1) + 2x + 2: x is the split's linear coordinate."""
        return Eq(_add(u, u), _add(_mul(s, s), s, x, x, _n(2)))

    def _expand(self, u, continue_with, pool):
        """u codes a nonempty tuple whose rest-code v satisfies
        continue_with(v). One linear scan over the diagonal; the head
        and rest coordinates are then bounded by the diagonal."""
        s, h, v = (_v(next(pool)) for _ in range(3))
        if self._linear_is_head:
            inner = _exists(v.name, And(Eq(_add(h, v), s), continue_with(v)),
                            le=s, tag=self._tag("tail", u))
            mid = _exists(h.name, And(self._linear_eq(u, s, h), inner),
                          le=s, tag=self._tag("head", u))
        else:
            mid = _exists(v.name, And(self._linear_eq(u, s, v),
                                      continue_with(v)),
                          le=s, tag=self._tag("tail", u))
        return _exists(s.name, _and(self._diag_filter(u, s), mid),
                       le=u, tag=self._tag("diag", u))

    def _first_entry(self, u, a, pool):
        """a is the first entry of the (nonempty) tuple coded by u."""
        s = _v(next(pool))
        if self._linear_is_head:
            eq = self._linear_eq(u, s, a)
        else:
            # tail = s - a: 2u = s(s+1) + 2(s-a) + 2, i.e.
            # 2u + 2a = s^2 + 3s + 2
            eq = Eq(_add(u, u, a, a),
                    _add(_mul(s, s), s, s, s, _n(2)))
        return _exists(s.name, _and(self._diag_filter(u, s), _le(a, s), eq),
                       le=u, tag=self._tag("diag", u))

    def _chain(self, u, depth, bottom, pool):
        """Strip `depth` leading entries from the code u, then apply
        `bottom` to the remaining rest-code."""
        if depth == 0:
            return bottom(u)
        return self._expand(
            u, lambda v: self._chain(v, depth - 1, bottom, pool), pool)

    def component_formula(self, window=DEFAULT_WINDOW):
        """Free variables n, a, i: the i-th entry (1-based) of tuple n is a.

        Exact for all n <= window. Each position branch is guarded by
        i = position, so a single branch ever scans; refuting an
        instance costs one linear diagonal scan per chain level.
        """
        n, a, i = _v("n"), _v("a"), _v("i")
        pool = (f"c{j}" for j in itertools.count(1))
        branches = []
        for depth in range(1, self.max_length(window) + 1):
            walk = self._chain(n, depth - 1,
                               lambda u: self._first_entry(u, a, pool), pool)
            branches.append(And(Eq(i, _n(depth)), walk))
        return _or(*branches)

    def length_formula(self, window=DEFAULT_WINDOW):
        """Free variables n, k: the tuple coded by n has length k.

        Exact for all n <= window.
        """
        n, k = _v("n"), _v("k")
        pool = (f"d{j}" for j in itertools.count(1))
        branches = [And(Eq(k, _n(0)), Eq(n, _n(0)))]
        for depth in range(1, self.max_length(window) + 1):
            walk = self._chain(n, depth,
                               lambda v: Eq(v, _n(0)), pool)
            branches.append(And(Eq(k, _n(depth)), walk))
        return _or(*branches)

    def hints(self):
        def diag_of(structure, env, roles):
            u = roles.get("prev")
            if type(u) is int and u >= 1:
                h, v = self._split(u)
                yield h + v

        def head_of(structure, env, roles):
            u = roles.get("prev")
            if type(u) is int and u >= 1:
                yield self._split(u)[0]

        def tail_of(structure, env, roles):
            u = roles.get("prev")
            if type(u) is int and u >= 1:
                yield self._split(u)[1]

        return {f"{self.name}.diag": diag_of,
                f"{self.name}.head": head_of,
                f"{self.name}.tail": tail_of}


class SwapCodec(CantorCodec):
    """The pairing with its arguments exchanged: a genuinely different
    enumeration of the same tuples, used to exercise codec-independence."""

    name = "swap"
    _linear_is_head = False

    @staticmethod
    def _pair(a, b):
        return (a + b) * (a + b + 1) // 2 + b

    @staticmethod
    def _unpair(m):
        w = (math.isqrt(8 * m + 1) - 1) // 2
        b = m - w * (w + 1) // 2
        return w - b, b


class DigitsCodec(TupleCodec):
    """Length-then-lexicographic codec over a finite alphabet {0..B}.

    Tuples are ordered by length, then by their little-endian base-(B+1)
    payload; the code of a length-k tuple is the count of all shorter
    tuples plus the payload. A bijection between the naturals and the
    finite tuples over the alphabet.
    """

    def __init__(self, alphabet):
        if type(alphabet) is not int or alphabet < 1:
            raise ValueError("the digits codec needs an alphabet bound >= 1")
        self.alphabet = alphabet
        self.base = alphabet + 1
        self.name = f"digits{alphabet}"

    def _offset(self, k):
        """How many tuples are shorter than length k."""
        return (self.base ** k - 1) // (self.base - 1)

    def encode(self, tup):
        tup = tuple(tup)
        self._check_entries(tup)
        payload = 0
        for j, a in enumerate(tup):
            payload += a * self.base ** j
        return self._offset(len(tup)) + payload

    def decode(self, n):
        if type(n) is not int or n < 0:
            raise ValueError(f"codes are naturals, got {n!r}")
        k = 0
        while self._offset(k + 1) <= n:
            k += 1
        payload = n - self._offset(k)
        out = []
        for _ in range(k):
            payload, digit = divmod(payload, self.base)
            out.append(digit)
        return tuple(out)

    # --- formulas ---

    def _length_branch(self, n, depth):
        lo = _le(_n(self._offset(depth)), n)
        hi = _lt(n, _n(self._offset(depth + 1)))
        return And(lo, hi)

    def length_formula(self, window=DEFAULT_WINDOW):
        n, k = _v("n"), _v("k")
        branches = []
        for depth in range(self.max_length(window) + 1):
            branches.append(And(Eq(k, _n(depth)), self._length_branch(n, depth)))
        return _or(*branches)

    def component_formula(self, window=DEFAULT_WINDOW):
        n, a, i = _v("n"), _v("a"), _v("i")
        branches = []
        for depth in range(1, self.max_length(window) + 1):
            for pos in range(1, depth + 1):
                unit = self.base ** (pos - 1)
                step = self.base ** pos
                off = self._offset(depth)
                q_tag = HintTag(f"{self.name}.q", (
                    ("n", n), ("off", _n(off)), ("unit", _n(step))))
                r_tag = HintTag(f"{self.name}.r", (
                    ("n", n), ("off", _n(off)), ("unit", _n(unit))))
                # n = off + q*step + a*unit + r with r < unit pins a to the
                # pos-th digit of the payload; the two range atoms reject
                # every wrong q before the r scan starts
                floor = _add(_n(off), _mul(_v("q"), _n(step)), _mul(a, _n(unit)))
                equation = Eq(n, _add(floor, _v("r")))
                body = _exists(
                    "q",
                    _and(_le(floor, n), _lt(n, _add(floor, _n(unit))),
                         _exists("r", equation, lt=_n(unit), tag=r_tag)),
                    le=n, tag=q_tag)
                branches.append(_and(
                    Eq(i, _n(pos)),
                    self._length_branch(n, depth),
                    _le(a, _n(self.alphabet)),
                    body))
        return _or(*branches)

    def hints(self):
        def quotient(structure, env, roles):
            m, off, unit = roles.get("n"), roles.get("off"), roles.get("unit")
            if type(m) is int and m >= off:
                yield (m - off) // unit

        def remainder(structure, env, roles):
            m, off, unit = roles.get("n"), roles.get("off"), roles.get("unit")
            if type(m) is int and m >= off:
                yield (m - off) % unit

        return {f"{self.name}.q": quotient, f"{self.name}.r": remainder}


def get_codec(name, alphabet=9):
    """Codec by name: "cantor", "swap", or "digits" (finite alphabet)."""
    if name == "cantor":
        return CantorCodec()
    if name == "swap":
        return SwapCodec()
    if name == "digits":
        return DigitsCodec(alphabet)
    raise KeyError(f"unknown codec {name!r}; known: cantor, swap, digits")


# ---------------------------------------------------------------------------
# the five coding laws, checked on a finite window


@dataclass
class AxiomCheck:
    axiom: str
    statement: str
    passed: bool
    instances: int
    counterexamples: list = field(default_factory=list)
    note: str = ""


@dataclass
class AxiomReport:
    codec: str
    window: int
    max_len: int
    checks: list

    @property
    def passed(self):
        return all(c.passed for c in self.checks)

    def to_json(self):
        return {
            "codec": self.codec,
            "window": self.window,
            "max_len": self.max_len,
            "passed": self.passed,
            "checks": [{
                "axiom": c.axiom,
                "statement": c.statement,
                "passed": c.passed,
                "instances": c.instances,
                "counterexamples": c.counterexamples[:5],
                "note": c.note,
            } for c in self.checks],
        }


_COUNTEREXAMPLE_CAP = 5


def check_axioms(codec, window, max_len, entry_window=10):
    """Check the five coding laws on a finite window.

    The component relation is realized arithmetically: position i of the
    tuple numbered n holds a exactly when decode(n)[i-1] == a, and the
    length of tuple n is len(decode(n)). The first four laws are checked
    for every code n (and pair n, m) up to ``window``; the last — an
    infinite scheme over all tuple lengths — is instantiated for every
    tuple with entries up to ``entry_window`` (clamped to the codec's
    alphabet and to ``window``) and length up to ``max_len``, which no
    finite check can certify in full.
    """
    if window < 0 or max_len < 0:
        raise ValueError("window and max_len must be >= 0")
    checks = []

    decoded = {}
    failures = []
    count = 0
    for n in range(window + 1):
        count += 1
        try:
            t = codec.decode(n)
            if type(t) is not tuple:
                raise ValueError(f"decode({n}) is not a tuple: {t!r}")
            decoded[n] = t
        except Exception as e:  # a broken codec is a report entry, not a crash
            failures.append((n, repr(e)))
    checks.append(AxiomCheck(
        "length-defined",
        "every code up to the window decodes to a tuple with a length",
        not failures, count, failures[:_COUNTEREXAMPLE_CAP]))

    checks.append(AxiomCheck(
        "no-components-beyond-length",
        "positions past the length hold no entry",
        not failures, len(decoded), [],
        note="holds structurally: decoded tuples carry entries exactly at "
             "positions 1..length"))

    bad_entries = []
    for n, t in decoded.items():
        for pos, x in enumerate(t, start=1):
            ok = type(x) is int and x >= 0
            if ok and codec.alphabet is not None:
                ok = x <= codec.alphabet
            if not ok:
                bad_entries.append((n, pos, x))
    checks.append(AxiomCheck(
        "component-functional",
        "each position within the length holds exactly one valid entry",
        not bad_entries, sum(len(t) for t in decoded.values()),
        bad_entries[:_COUNTEREXAMPLE_CAP]))

    seen = {}
    collisions = []
    for n, t in decoded.items():
        if t in seen:
            collisions.append((seen[t], n, list(t)))
        else:
            seen[t] = n
    checks.append(AxiomCheck(
        "decode-injective",
        "distinct codes decode to distinct tuples",
        not collisions, len(decoded), collisions[:_COUNTEREXAMPLE_CAP]))

    entry_hi = min(entry_window, window)
    if codec.alphabet is not None:
        entry_hi = min(entry_hi, codec.alphabet)
    missing = []
    count = 0
    for k in range(max_len + 1):
        for tup in itertools.product(range(entry_hi + 1), repeat=k):
            count += 1
            try:
                n = codec.encode(tup)
                if codec.decode(n) != tup:
                    missing.append((list(tup), n, list(codec.decode(n))))
            except Exception as e:
                missing.append((list(tup), None, repr(e)))
            if len(missing) > _COUNTEREXAMPLE_CAP:
                break
        if len(missing) > _COUNTEREXAMPLE_CAP:
            break
    checks.append(AxiomCheck(
        "every-tuple-coded",
        "every tuple from the window is the decoding of some code",
        not missing, count, missing[:_COUNTEREXAMPLE_CAP],
        note=f"an infinite scheme: only lengths <= {max_len} are certified"))

    return AxiomReport(codec.name, window, max_len, checks)


# ---------------------------------------------------------------------------
# two codecs enumerate the same tuples, related by a definable bijection


@dataclass
class TranslationReport:
    src: str
    dst: str
    window: int
    failures: list

    @property
    def passed(self):
        return not self.failures


def check_translation(src, dst, window):
    """Verify that f(n) = dst.encode(src.decode(n)) is a bijection of the
    naturals carrying src's numbering onto dst's, on a finite window:
    g = src.encode . dst.decode inverts f both ways, and the tuple
    numbered n under src is the tuple numbered f(n) under dst.
    """
    if src.alphabet is not None or dst.alphabet is not None:
        raise ValueError("translation needs codecs over the full naturals")
    failures = []

    def f(n):
        return dst.encode(src.decode(n))

    def g(m):
        return src.encode(dst.decode(m))

    for n in range(window + 1):
        if g(f(n)) != n:
            failures.append(("g(f(n)) != n", n))
        if src.decode(n) != dst.decode(f(n)):
            failures.append(("tuple mismatch", n))
    for m in range(window + 1):
        if f(g(m)) != m:
            failures.append(("f(g(m)) != m", m))
    return TranslationReport(src.name, dst.name, window,
                             failures[:_COUNTEREXAMPLE_CAP])


def same_tuple_formula(src, dst, window=DEFAULT_WINDOW):
    """Free variables n, m: tuple n under src equals tuple m under dst.

    Decidable on the window: lengths are bounded by the unrolling depth
    and entries of codes <= window never exceed the window, so every
    quantifier is bounded. The entry quantifier carries a hint tag
    ("{src.name}.entry", roles n, i) resolved by src's decoding.
    """
    n, m = _v("n"), _v("m")
    depth = max(src.max_length(window), dst.max_length(window))
    l_src = _rename(src.length_formula(window), {"n": "n", "k": "k"})
    l_dst = _rename(dst.length_formula(window), {"n": "m", "k": "k"})
    t_src = _rename(src.component_formula(window), {"n": "n"})
    t_dst = _rename(dst.component_formula(window), {"n": "m"})
    entry_tag = HintTag(f"{src.name}.entry", (("n", n), ("i", _v("i"))))
    positions = _forall(
        "i",
        _exists("a", And(t_src, t_dst), le=_n(window), tag=entry_tag),
        le=_v("k"), low=1)
    body = _and(l_src, l_dst, positions)
    return _exists("k", body, le=_n(depth))


def entry_hints(codec):
    """Provider for the "{codec.name}.entry" tag of same_tuple_formula."""
    def entry(structure, env, roles):
        n, i = roles.get("n"), roles.get("i")
        if type(n) is int and type(i) is int and n >= 0 and i >= 1:
            t = codec.decode(n)
            if i <= len(t):
                yield t[i - 1]

    return {f"{codec.name}.entry": entry}


def _rename(formula, mapping):
    """Rename free variables (bound variables in these formulas are
    generated fresh and never collide with the free names)."""
    from ..logic.ast import substitute
    subst = {old: _v(new) for old, new in mapping.items() if old != new}
    return substitute(formula, subst) if subst else formula
