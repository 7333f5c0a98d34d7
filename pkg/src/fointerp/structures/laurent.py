"""Laurent polynomials: finitely many terms with integer exponents.

Univariate values store (offset, dense coefficients); multivariate
values map integer exponent vectors to nonzero coefficients. Every
nonzero Laurent polynomial splits as unit * core where the unit is a
single term (invertible) and the core is an ordinary polynomial with
nonzero constant term (multivariate: no variable divides it).
Divisibility and irreducibility delegate to cores.
"""

from __future__ import annotations

from .polynomials import (MINUS_INF, MPoly, Poly, is_irreducible,
                          z_is_irreducible)


class Laurent:
    """Univariate Laurent polynomial over a ring."""

    __slots__ = ("ring", "offset", "coeffs")

    def __init__(self, ring, offset, coeffs):
        cs = list(coeffs)
        while cs and ring.is_zero(cs[-1]):
            cs.pop()
        drop = 0
        while drop < len(cs) and ring.is_zero(cs[drop]):
            drop += 1
        cs = cs[drop:]
        self.ring = ring
        self.offset = offset + drop if cs else 0
        self.coeffs = tuple(cs)

    @classmethod
    def from_poly(cls, p, shift=0):
        return cls(p.ring, shift, p.coeffs)

    @classmethod
    def const(cls, ring, c):
        return cls(ring, 0, (c,))

    @classmethod
    def zero(cls, ring):
        return cls(ring, 0, ())

    @classmethod
    def one(cls, ring):
        return cls(ring, 0, (ring.one,))

    @classmethod
    def x_pow(cls, ring, n, coeff=None):
        return cls(ring, n, (coeff if coeff is not None else ring.one,))

    # queries ------------------------------------------------------------------

    @property
    def is_zero(self):
        return not self.coeffs

    @property
    def low(self):
        """Lowest exponent (offset); minus infinity for zero."""
        return self.offset if self.coeffs else MINUS_INF

    @property
    def high(self):
        """Highest exponent; minus infinity for zero."""
        return self.offset + len(self.coeffs) - 1 if self.coeffs else MINUS_INF

    @property
    def is_unit(self):
        return len(self.coeffs) == 1 and self.ring.is_unit(self.coeffs[0])

    def coeff(self, e):
        i = e - self.offset
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else self.ring.zero

    def __eq__(self, other):
        if isinstance(other, Laurent):
            return (self.ring.name == other.ring.name
                    and self.offset == other.offset
                    and self.coeffs == other.coeffs)
        return NotImplemented

    def __hash__(self):
        return hash((self.ring.name, self.offset, self.coeffs))

    def __repr__(self):
        return f"Laurent[{self.ring.name}](off={self.offset}, {self.coeffs})"

    # arithmetic ---------------------------------------------------------------

    def __add__(self, other):
        r = self.ring
        if self.is_zero:
            return other
        if other.is_zero:
            return self
        off = min(self.offset, other.offset)
        hi = max(self.offset + len(self.coeffs),
                 other.offset + len(other.coeffs))
        out = [r.zero] * (hi - off)
        for i, c in enumerate(self.coeffs):
            out[self.offset - off + i] = c
        for i, c in enumerate(other.coeffs):
            j = other.offset - off + i
            out[j] = r.add(out[j], c)
        return Laurent(r, off, out)

    def __neg__(self):
        return Laurent(self.ring, self.offset,
                       tuple(self.ring.neg(c) for c in self.coeffs))

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        prod = Poly(self.ring, self.coeffs) * Poly(self.ring, other.coeffs)
        return Laurent(self.ring, self.offset + other.offset, prod.coeffs)

    def __pow__(self, n):
        if n >= 0:
            out = Laurent.one(self.ring)
            sq = self
            while n:
                if n & 1:
                    out = out * sq
                n >>= 1
                if n:
                    sq = sq * sq
            return out
        inv = self.inverse()
        return inv ** (-n)

    def inverse(self):
        if not self.is_unit:
            raise ZeroDivisionError("only single-term Laurent polynomials "
                                    "with unit coefficient are invertible")
        return Laurent(self.ring, -self.offset,
                       (self.ring.inv(self.coeffs[0]),))

    def evaluate(self, a):
        r = self.ring
        if self.is_zero:
            return r.zero
        acc = Poly(r, self.coeffs).evaluate(a)
        if self.offset >= 0:
            for _ in range(self.offset):
                acc = r.mul(acc, a)
            return acc
        ainv = r.inv(a)
        for _ in range(-self.offset):
            acc = r.mul(acc, ainv)
        return acc

    # structure ----------------------------------------------------------------

    def normalize(self):
        """(unit, core): self = unit * core, unit a single invertible
        term, core a polynomial with nonzero constant term."""
        if self.is_zero:
            raise ValueError("cannot normalize the zero Laurent polynomial")
        r = self.ring
        c0 = self.coeffs[0]
        if r.is_field:
            alpha = c0
        elif r.is_unit(c0):
            alpha = c0
        elif r.name == "Z":
            alpha = r.one if c0 > 0 else r.neg(r.one)
        else:
            alpha = r.one
        unit = Laurent(r, self.offset, (alpha,))
        ainv = r.inv(alpha)
        core = Poly(r, tuple(r.mul(ainv, c) for c in self.coeffs))
        return unit, core

    def divides(self, other):
        """Exact divisibility in the Laurent ring."""
        if self.is_zero:
            return other.is_zero
        if other.is_zero:
            return True
        _, dcore = self.normalize()
        _, pcore = other.normalize()
        return pcore.exact_div(dcore) is not None

    def exact_div(self, d):
        if d.is_zero:
            return None
        if self.is_zero:
            return self
        dunit, dcore = d.normalize()
        punit, pcore = self.normalize()
        q = pcore.exact_div(dcore)
        if q is None:
            return None
        quo_unit = punit * dunit.inverse()
        return quo_unit * Laurent.from_poly(q)

    def is_irreducible_laurent(self):
        """Irreducible modulo units: the core is an irreducible polynomial."""
        if self.is_zero:
            return False
        _, core = self.normalize()
        if self.ring.name == "Z":
            return z_is_irreducible(core)
        if core.degree == MINUS_INF or core.degree < 1:
            return False
        return is_irreducible(core)


class MLaurent:
    """Multivariate Laurent polynomial: integer exponent vectors."""

    __slots__ = ("ring", "k", "terms")

    def __init__(self, ring, k, terms):
        clean = {}
        for vec, c in terms.items():
            if len(vec) != k:
                raise ValueError(f"exponent vector {vec} has wrong length")
            if not ring.is_zero(c):
                clean[tuple(vec)] = c
        self.ring = ring
        self.k = k
        self.terms = clean

    @classmethod
    def from_mpoly(cls, p):
        return cls(p.ring, p.k, dict(p.terms))

    @classmethod
    def const(cls, ring, k, c):
        return cls(ring, k, {(0,) * k: c})

    @classmethod
    def zero(cls, ring, k):
        return cls(ring, k, {})

    @classmethod
    def one(cls, ring, k):
        return cls(ring, k, {(0,) * k: ring.one})

    @classmethod
    def var(cls, ring, k, i, power=1):
        vec = [0] * k
        vec[i] = power
        return cls(ring, k, {tuple(vec): ring.one})

    @property
    def is_zero(self):
        return not self.terms

    @property
    def is_unit(self):
        return len(self.terms) == 1 and self.ring.is_unit(
            next(iter(self.terms.values())))

    def coeff(self, vec):
        return self.terms.get(tuple(vec), self.ring.zero)

    def __eq__(self, other):
        if isinstance(other, MLaurent):
            return (self.ring.name == other.ring.name and self.k == other.k
                    and self.terms == other.terms)
        return NotImplemented

    def __hash__(self):
        return hash((self.ring.name, self.k,
                     tuple(sorted(self.terms.items()))))

    def __repr__(self):
        return f"MLaurent[{self.ring.name},k={self.k}]({self.terms})"

    def __add__(self, other):
        r = self.ring
        out = dict(self.terms)
        for vec, c in other.terms.items():
            out[vec] = r.add(out.get(vec, r.zero), c)
        return MLaurent(r, self.k, out)

    def __neg__(self):
        r = self.ring
        return MLaurent(r, self.k, {v: r.neg(c) for v, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        r = self.ring
        out = {}
        for v1, c1 in self.terms.items():
            for v2, c2 in other.terms.items():
                v = tuple(a + b for a, b in zip(v1, v2))
                prod = r.mul(c1, c2)
                if v in out:
                    out[v] = r.add(out[v], prod)
                else:
                    out[v] = prod
        return MLaurent(r, self.k, out)

    def __pow__(self, n):
        if n < 0:
            inv = self.inverse()
            return inv ** (-n)
        out = MLaurent.one(self.ring, self.k)
        sq = self
        while n:
            if n & 1:
                out = out * sq
            n >>= 1
            if n:
                sq = sq * sq
        return out

    def inverse(self):
        if not self.is_unit:
            raise ZeroDivisionError("only single-term Laurent polynomials "
                                    "with unit coefficient are invertible")
        vec, c = next(iter(self.terms.items()))
        return MLaurent(self.ring, self.k,
                        {tuple(-e for e in vec): self.ring.inv(c)})

    def evaluate(self, point):
        r = self.ring
        acc = r.zero
        for vec, c in self.terms.items():
            term = c
            for e, a in zip(vec, point):
                if e >= 0:
                    for _ in range(e):
                        term = r.mul(term, a)
                else:
                    ai = r.inv(a)
                    for _ in range(-e):
                        term = r.mul(term, ai)
            acc = r.add(acc, term)
        return acc

    def normalize(self):
        """(unit, core): core is an MPoly not divisible by any variable."""
        if self.is_zero:
            raise ValueError("cannot normalize the zero Laurent polynomial")
        r = self.ring
        vmin = tuple(min(v[i] for v in self.terms) for i in range(self.k))
        shifted = {tuple(e - m for e, m in zip(v, vmin)): c
                   for v, c in self.terms.items()}
        anchor = min(shifted)
        c0 = shifted[anchor]
        if r.is_field or r.is_unit(c0):
            alpha = c0
        elif r.name == "Z":
            alpha = r.one if c0 > 0 else r.neg(r.one)
        else:
            alpha = r.one
        ainv = r.inv(alpha)
        core = MPoly(r, self.k, {v: r.mul(ainv, c) for v, c in shifted.items()})
        unit = MLaurent(r, self.k, {vmin: alpha})
        return unit, core

    def divides(self, other):
        if self.is_zero:
            return other.is_zero
        if other.is_zero:
            return True
        _, dcore = self.normalize()
        _, pcore = other.normalize()
        return pcore.exact_div(dcore) is not None

    def exact_div(self, d):
        if d.is_zero:
            return None
        if self.is_zero:
            return self
        dunit, dcore = d.normalize()
        punit, pcore = self.normalize()
        q = pcore.exact_div(dcore)
        if q is None:
            return None
        return punit * dunit.inverse() * MLaurent.from_mpoly(q)
