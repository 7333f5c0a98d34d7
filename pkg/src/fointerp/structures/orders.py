"""Canonical enumeration orders and index bijections.

Everything downstream (quantifier scans, quotient representatives,
monomial codings) depends on these orders being fixed, injective, and
total, so they are deliberately simple and heavily tested:

* zigzag: the bijection 0,1,-1,2,-2,... between naturals and integers
* grlex: the bijection between naturals and exponent vectors in N^k,
  graded by total degree with lexicographic order inside a grade
* signed grlex: grlex pulled back through a per-coordinate zigzag,
  a bijection between naturals and vectors in Z^k
* height-ordered rationals
* finite-support coefficient sequences over any enumerated carrier
"""

from __future__ import annotations

import itertools
from fractions import Fraction
from math import comb, gcd


def zigzag(n):
    """n-th integer in the order 0, 1, -1, 2, -2, ..."""
    if n < 0:
        raise ValueError("index must be a natural number")
    half, odd = divmod(n, 2)
    return half + 1 if odd else -half if half else 0


def zigzag_index(z):
    """Position of the integer z in the zigzag order."""
    return 2 * z - 1 if z > 0 else -2 * z


def integers():
    """0, 1, -1, 2, -2, ..."""
    return (zigzag(n) for n in itertools.count(0))


def _grade_size(total, k):
    """Number of exponent vectors in N^k with the given total degree."""
    return comb(total + k - 1, k - 1)


def grlex_vector(k, n):
    """n-th exponent vector in N^k: by total degree, then lex descending
    in the first coordinate (so x1^d comes first within its grade)."""
    if k < 1:
        raise ValueError("need at least one variable")
    total = 0
    while True:
        size = _grade_size(total, k)
        if n < size:
            break
        n -= size
        total += 1
    # n-th vector of this grade, ordering by first coordinate descending
    vec = []
    rest = total
    for i in range(k - 1):
        for first in range(rest, -1, -1):
            block = _grade_size(rest - first, k - i - 1)
            if n < block:
                vec.append(first)
                rest -= first
                break
            n -= block
    vec.append(rest)
    return tuple(vec)


def grlex_index(vec):
    """Inverse of grlex_vector."""
    k = len(vec)
    if k < 1:
        raise ValueError("need at least one variable")
    total = sum(vec)
    n = sum(_grade_size(t, k) for t in range(total))
    rest = total
    for i in range(k - 1):
        first = vec[i]
        for higher in range(rest, first, -1):
            n += _grade_size(rest - higher, k - i - 1)
        rest -= first
    return n


def signed_vector(k, n):
    """n-th vector in Z^k: grlex on the zigzag magnitudes."""
    return tuple(zigzag(e) for e in grlex_vector(k, n))


def signed_index(vec):
    return grlex_index(tuple(zigzag_index(z) for z in vec))


def rationals():
    """All rationals ordered by height max(|num|, den), then den, then num.

    Height 1 yields -1, 0, 1; each later height h adds the reduced
    fractions with max(|num|, den) = h.
    """
    for h in itertools.count(1):
        batch = []
        for den in range(1, h + 1):
            for num in range(-h, h + 1):
                if max(abs(num), den) != h:
                    continue
                if gcd(abs(num), den) != 1:
                    continue
                batch.append(Fraction(num, den))
        batch.sort(key=lambda q: (q.denominator, q.numerator))
        yield from batch


def naturals():
    return itertools.count(0)


def _compositions(total, parts, cap=None):
    """Tuples of `parts` naturals summing to `total`, each < cap, lex order."""
    if parts == 0:
        if total == 0:
            yield ()
        return
    if parts == 1:
        if cap is None or total < cap:
            yield (total,)
        return
    top = total if cap is None else min(total, cap - 1)
    for first in range(top + 1):
        for rest in _compositions(total - first, parts - 1, cap):
            yield (first,) + rest


def sequences(carrier_factory, include_empty=True):
    """All finite sequences over an enumerated carrier, each exactly once.

    A sequence picking carrier indices (i_0, ..., i_{L-1}) appears at
    weight w = L + sum(i_j); inside one weight, order is by length then
    lexicographic index tuple. The empty sequence comes first. Only the
    first w carrier elements are materialized at weight w, so infinite
    carriers are fine.
    """
    if include_empty:
        yield ()
    cache = []
    source = carrier_factory()
    exhausted = False
    for w in itertools.count(1):
        while not exhausted and len(cache) < w:
            try:
                cache.append(next(source))
            except StopIteration:
                exhausted = True
        reach = len(cache)
        if reach == 0:
            return
        for length in range(1, w + 1):
            for idx in _compositions(w - length, length, reach):
                yield tuple(cache[i] for i in idx)
