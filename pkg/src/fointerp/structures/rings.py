"""Exact coefficient rings: the rationals, the integers, prime fields.

Ring objects bundle arithmetic on plain Python values (Fraction for the
rationals, int for the integers and for GF(p) residues 0..p-1) together
with a canonical carrier enumeration. All arithmetic is exact.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd

from . import orders


class RationalField:
    name = "Q"
    is_field = True
    char = 0
    zero = Fraction(0)
    one = Fraction(1)

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def mul(self, a, b):
        return a * b

    def neg(self, a):
        return -a

    def is_zero(self, a):
        return a == 0

    def is_unit(self, a):
        return a != 0

    def inv(self, a):
        if a == 0:
            raise ZeroDivisionError("inverse of zero")
        return 1 / Fraction(a)

    def exact_div(self, a, b):
        if b == 0:
            return None
        return Fraction(a) / b

    def from_int(self, n):
        return Fraction(n)

    def from_fraction(self, q):
        return Fraction(q)

    def enum(self):
        return orders.rationals()


class IntegerRing:
    name = "Z"
    is_field = False
    char = 0
    zero = 0
    one = 1

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def mul(self, a, b):
        return a * b

    def neg(self, a):
        return -a

    def is_zero(self, a):
        return a == 0

    def is_unit(self, a):
        return a in (1, -1)

    def inv(self, a):
        if a == 1 or a == -1:
            return a
        raise ZeroDivisionError(f"{a} is not invertible in Z")

    def exact_div(self, a, b):
        if b == 0:
            return None
        q, r = divmod(a, b)
        return q if r == 0 else None

    def gcd(self, a, b):
        return gcd(a, b)

    def from_int(self, n):
        return int(n)

    def from_fraction(self, q):
        if q.denominator != 1:
            raise ValueError(f"{q} is not an integer")
        return q.numerator

    def enum(self):
        return orders.integers()


class PrimeField:
    is_field = True

    def __init__(self, p):
        if p < 2 or any(p % d == 0 for d in range(2, int(p ** 0.5) + 1)):
            raise ValueError(f"{p} is not prime")
        if p >= 2 ** 31:
            raise ValueError("prime too large")
        self.p = p
        self.char = p
        self.name = f"GF({p})"
        self.zero = 0
        self.one = 1 % p

    def add(self, a, b):
        return (a + b) % self.p

    def sub(self, a, b):
        return (a - b) % self.p

    def mul(self, a, b):
        return (a * b) % self.p

    def neg(self, a):
        return (-a) % self.p

    def is_zero(self, a):
        return a % self.p == 0

    def is_unit(self, a):
        return a % self.p != 0

    def inv(self, a):
        if a % self.p == 0:
            raise ZeroDivisionError("inverse of zero")
        return pow(a, -1, self.p)

    def exact_div(self, a, b):
        if b % self.p == 0:
            return None
        return (a * self.inv(b)) % self.p

    def from_int(self, n):
        return n % self.p

    def from_fraction(self, q):
        if q.denominator % self.p == 0:
            raise ValueError(f"{q} has no image in GF({self.p})")
        return (q.numerator * self.inv(q.denominator % self.p)) % self.p

    def enum(self):
        return iter(range(self.p))


QQ = RationalField()
ZZ = IntegerRing()

_prime_fields = {}


def gf(p):
    """The prime field with p elements (cached)."""
    if p not in _prime_fields:
        _prime_fields[p] = PrimeField(p)
    return _prime_fields[p]
