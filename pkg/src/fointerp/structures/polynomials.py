"""Exact polynomial arithmetic over the coefficient rings.

Univariate polynomials are dense coefficient tuples (index i holds the
coefficient of x^i, trailing zeros stripped); multivariate polynomials
map exponent vectors to nonzero coefficients. The degree of the zero
polynomial is a distinguished minus-infinity value that compares below
every integer.

Irreducibility and factorization are exact and dependency-free:
Kronecker's interpolation method over the rationals (degree capped),
trial division over prime fields, and an Eisenstein certificate.
"""

from __future__ import annotations

import itertools
from fractions import Fraction
from functools import lru_cache
from math import gcd, lcm

from .rings import QQ, ZZ


class _MinusInfinity:
    """Degree of the zero polynomial; below every integer."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __lt__(self, other):
        return not isinstance(other, _MinusInfinity)

    def __le__(self, other):
        return True

    def __gt__(self, other):
        return False

    def __ge__(self, other):
        return isinstance(other, _MinusInfinity)

    def __eq__(self, other):
        return isinstance(other, _MinusInfinity)

    def __hash__(self):
        return hash("-inf-degree")

    def __add__(self, other):
        return self

    __radd__ = __add__

    def __repr__(self):
        return "-inf"


MINUS_INF = _MinusInfinity()


class Poly:
    """Univariate polynomial over a ring, dense representation."""

    __slots__ = ("ring", "coeffs")

    def __init__(self, ring, coeffs):
        cs = list(coeffs)
        while cs and ring.is_zero(cs[-1]):
            cs.pop()
        self.ring = ring
        self.coeffs = tuple(cs)

    @classmethod
    def const(cls, ring, c):
        return cls(ring, (c,))

    @classmethod
    def zero(cls, ring):
        return cls(ring, ())

    @classmethod
    def one(cls, ring):
        return cls(ring, (ring.one,))

    @classmethod
    def x(cls, ring):
        return cls(ring, (ring.zero, ring.one))

    @classmethod
    def from_ints(cls, ring, ints):
        return cls(ring, tuple(ring.from_int(n) for n in ints))

    # basic queries -----------------------------------------------------------

    @property
    def degree(self):
        return len(self.coeffs) - 1 if self.coeffs else MINUS_INF

    @property
    def lc(self):
        if not self.coeffs:
            raise ValueError("zero polynomial has no leading coefficient")
        return self.coeffs[-1]

    def coeff(self, i):
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else self.ring.zero

    @property
    def is_zero(self):
        return not self.coeffs

    @property
    def is_const(self):
        return len(self.coeffs) <= 1

    @property
    def is_unit(self):
        return len(self.coeffs) == 1 and self.ring.is_unit(self.coeffs[0])

    def __eq__(self, other):
        if isinstance(other, Poly):
            return self.ring.name == other.ring.name and self.coeffs == other.coeffs
        return NotImplemented

    def __hash__(self):
        return hash((self.ring.name, self.coeffs))

    def __repr__(self):
        return f"Poly[{self.ring.name}]({format_poly(self)})"

    # arithmetic ---------------------------------------------------------------

    def __add__(self, other):
        r = self.ring
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] = r.add(out[i], c)
        return Poly(r, out)

    def __neg__(self):
        r = self.ring
        return Poly(r, tuple(r.neg(c) for c in self.coeffs))

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        r = self.ring
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return Poly(r, ())
        out = [r.zero] * (len(a) + len(b) - 1)
        for i, ai in enumerate(a):
            if r.is_zero(ai):
                continue
            for j, bj in enumerate(b):
                out[i + j] = r.add(out[i + j], r.mul(ai, bj))
        return Poly(r, out)

    def __pow__(self, k):
        if k < 0:
            raise ValueError("negative power of a polynomial")
        out = Poly.one(self.ring)
        sq = self
        while k:
            if k & 1:
                out = out * sq
            k >>= 1
            if k:
                sq = sq * sq
        return out

    def scale(self, c):
        r = self.ring
        return Poly(r, tuple(r.mul(c, a) for a in self.coeffs))

    def shift(self, k):
        """Multiply by x^k (k >= 0)."""
        if self.is_zero:
            return self
        return Poly(self.ring, (self.ring.zero,) * k + self.coeffs)

    def monic(self):
        if self.is_zero:
            return self
        r = self.ring
        return self.scale(r.inv(self.lc))

    def evaluate(self, a):
        r = self.ring
        acc = r.zero
        for c in reversed(self.coeffs):
            acc = r.add(r.mul(acc, a), c)
        return acc

    def divmod_(self, d):
        """Euclidean division; coefficient ring must be a field."""
        r = self.ring
        if d.is_zero:
            raise ZeroDivisionError("division by the zero polynomial")
        if not r.is_field:
            raise ValueError("euclidean division needs field coefficients")
        rem = list(self.coeffs)
        dd = len(d.coeffs) - 1
        dlc_inv = r.inv(d.lc)
        q = [r.zero] * max(0, len(rem) - dd)
        for i in range(len(rem) - 1, dd - 1, -1):
            c = rem[i]
            if r.is_zero(c):
                continue
            f = r.mul(c, dlc_inv)
            q[i - dd] = f
            for j, dc in enumerate(d.coeffs):
                rem[i - dd + j] = r.sub(rem[i - dd + j], r.mul(f, dc))
        return Poly(r, q), Poly(r, rem)

    def exact_div(self, d):
        """self / d if d divides exactly, else None. Works over Z too."""
        r = self.ring
        if d.is_zero:
            return None
        if self.is_zero:
            return self
        if self.degree < d.degree:
            return None
        rem = list(self.coeffs)
        dd = len(d.coeffs) - 1
        q = [r.zero] * (len(rem) - dd)
        for i in range(len(rem) - 1, dd - 1, -1):
            c = rem[i]
            if r.is_zero(c):
                continue
            f = r.exact_div(c, d.lc)
            if f is None:
                return None
            q[i - dd] = f
            for j, dc in enumerate(d.coeffs):
                rem[i - dd + j] = r.sub(rem[i - dd + j], r.mul(f, dc))
        if any(not r.is_zero(c) for c in rem):
            return None
        return Poly(r, q)

    def divides(self, other):
        return other.exact_div(self) is not None


def poly_gcd_bezout(p, q):
    """Extended Euclid on field polynomials: (g, a, b) with ap + bq = g monic."""
    r = p.ring
    if p.is_zero and q.is_zero:
        raise ValueError("gcd of two zero polynomials")
    r0, r1 = p, q
    s0, s1 = Poly.one(r), Poly.zero(r)
    t0, t1 = Poly.zero(r), Poly.one(r)
    while not r1.is_zero:
        quo, rem = r0.divmod_(r1)
        r0, r1 = r1, rem
        s0, s1 = s1, s0 - quo * s1
        t0, t1 = t1, t0 - quo * t1
    c = r.inv(r0.lc)
    return r0.scale(c), s0.scale(c), t0.scale(c)


def poly_gcd(p, q):
    if p.is_zero and q.is_zero:
        return p
    if p.is_zero:
        return q.monic()
    if q.is_zero:
        return p.monic()
    return poly_gcd_bezout(p, q)[0]


def format_poly(p, var="x"):
    """Human-readable rendering, matching the CLI literal syntax."""
    if p.is_zero:
        return "0"
    parts = []
    for i in range(len(p.coeffs) - 1, -1, -1):
        c = p.coeffs[i]
        if p.ring.is_zero(c):
            continue
        if i == 0:
            mono = ""
        elif i == 1:
            mono = var
        else:
            mono = f"{var}^{i}"
        neg = False
        s = str(c)
        if s.startswith("-"):
            neg = True
            s = s[1:]
        if mono and s == "1":
            s = ""
        body = f"{s}*{mono}" if (s and mono) else (s or mono)
        if not parts:
            parts.append(("-" if neg else "") + body)
        else:
            parts.append(("- " if neg else "+ ") + body)
    return " ".join(parts)


# ---------------------------------------------------------------------------
# Irreducibility and factorization

KRONECKER_DEGREE_CAP = 12


def _q_to_z_primitive(p):
    """Write p in Q[x] as c * P with c in Q and P primitive in Z[x], lc > 0."""
    mult = lcm(*(c.denominator for c in p.coeffs)) if p.coeffs else 1
    ints = [int(c * mult) for c in p.coeffs]
    g = 0
    for v in ints:
        g = gcd(g, v)
    if g == 0:
        return Fraction(0), Poly.zero(ZZ)
    if ints[-1] < 0:
        g = -g
    return Fraction(g, mult), Poly(ZZ, tuple(v // g for v in ints))


def _integer_divisors(n):
    """All divisors of n (positive and negative), by absolute value."""
    n = abs(n)
    small, large = [], []
    d = 1
    while d * d <= n:
        if n % d == 0:
            small.append(d)
            if d != n // d:
                large.append(n // d)
        d += 1
    out = []
    for v in small + large[::-1]:
        out.append(v)
        out.append(-v)
    return out


def _interp_points():
    yield 0
    for i in itertools.count(1):
        yield i
        yield -i


def _lagrange(points, values):
    """Interpolating polynomial over Q through (points[i], values[i])."""
    out = Poly.zero(QQ)
    for i, (xi, yi) in enumerate(zip(points, values)):
        if yi == 0:
            continue
        term = Poly.const(QQ, Fraction(yi))
        for j, xj in enumerate(points):
            if j == i:
                continue
            term = term * Poly(QQ, (Fraction(-xj, 1), Fraction(1)))
            term = term.scale(Fraction(1, xi - xj))
        out = out + term
    return out


def _z_poly_from_q(p):
    """Q[x] poly with integer coefficients -> Z[x] poly, else None."""
    ints = []
    for c in p.coeffs:
        if c.denominator != 1:
            return None
        ints.append(c.numerator)
    return Poly(ZZ, tuple(ints))


def _linear_factors_z(P):
    """Strip rational-root linear factors from a primitive Z-polynomial."""
    factors = []
    while P.degree >= 1:
        a0 = P.coeffs[0]
        if a0 == 0:
            factors.append(Poly(ZZ, (0, 1)))
            P = P.exact_div(Poly(ZZ, (0, 1)))
            continue
        found = False
        for num in _integer_divisors(a0):
            for den in _integer_divisors(P.lc):
                if den <= 0 or gcd(abs(num), den) != 1:
                    continue
                cand = Poly(ZZ, (-num, den))
                quo = P.exact_div(cand)
                if quo is not None:
                    factors.append(cand)
                    P = quo
                    found = True
                    break
            if found:
                break
        if not found:
            break
    return factors, P


def _kronecker_factor(P, degrees=None):
    """A nonunit proper divisor of a primitive Z-poly with no rational
    roots and P(0) != 0, or None if irreducible. Degree must be >= 2.

    `degrees` optionally restricts which factor degrees are searched;
    the caller must supply a set that provably contains the degree of
    some factor whenever one exists (see _allowed_factor_degrees).

    A degree-d factor takes, at each integer point, a value dividing
    P's value there, so interpolating through every divisor combination
    at d+1 points is exhaustive. Points with the fewest divisors are
    chosen for interpolation, combinations are grown one point at a
    time under the integer-polynomial congruence g(a) = g(b) mod (a-b),
    and the remaining points serve as cheap divisibility checks before
    the exact trial division.
    """
    n = P.degree
    half = n // 2
    degrees = sorted(set(range(2, half + 1)) if degrees is None else degrees)
    if not degrees:
        return None
    window = list(itertools.islice(_interp_points(), degrees[-1] + 5))
    # no integer roots remain, so all values are nonzero
    info = []
    for t in window:
        v = P.evaluate(t)
        divs = _integer_divisors(v)
        info.append((len(divs), t, v, divs))
    info.sort(key=lambda r: r[0])
    for d in degrees:
        chosen = info[:d + 1]
        checks = info[d + 1:]
        pts = [t for _, t, _, _ in chosen]
        divisor_lists = [divs for _, _, _, divs in chosen]
        divisor_lists[0] = [w for w in divisor_lists[0] if w > 0]

        found = _kronecker_dfs(P, d, pts, divisor_lists, checks, 0, [])
        if found is not None:
            return found
    return None


def _kronecker_dfs(P, d, pts, divisor_lists, checks, idx, acc):
    if idx == d + 1:
        g = _lagrange(pts, acc)
        if g.degree != d:
            return None
        gz = _z_poly_from_q(g)
        if gz is None:
            return None
        for _, t, pv, _ in checks:
            gv = gz.evaluate(t)
            if gv == 0 or pv % gv != 0:
                return None
        if P.exact_div(gz) is not None:
            return gz
        return None
    t_i = pts[idx]
    for y in divisor_lists[idx]:
        if all((y - y_prev) % (t_i - t_prev) == 0
               for t_prev, y_prev in zip(pts, acc)):
            acc.append(y)
            found = _kronecker_dfs(P, d, pts, divisor_lists, checks,
                                   idx + 1, acc)
            acc.pop()
            if found is not None:
                return found
    return None


def _allowed_factor_degrees(P):
    """Degrees that a proper irreducible Z-factor of the primitive
    polynomial P could have.

    For a prime q not dividing lc(P), reduction mod q preserves degrees
    multiplicatively, so any Z-factor's degree is a subset sum of the
    degree multiset of P's factorization over GF(q). Intersecting over a
    few primes prunes the interpolation search; an empty result proves
    irreducibility outright. The prime set shrinks as the degree grows
    to keep the trial-division factoring mod q cheap.
    """
    from .rings import gf
    n = P.degree
    half = n // 2
    allowed = set(range(2, half + 1))
    primes = tuple(q for q in (3, 5, 7, 11, 13) if q ** half <= 60_000) or (3,)
    for q in primes:
        if not allowed:
            break
        if P.lc % q == 0:
            continue
        pbar = Poly(gf(q), tuple(c % q for c in P.coeffs))
        _, fs = _factor_gf(pbar)
        bits = 1
        for f in fs:
            bits |= bits << f.degree
        allowed = {d for d in allowed if (bits >> d) & 1}
    return allowed


def _factor_z_primitive(P):
    """Irreducible primitive factors (with multiplicity) of a primitive
    Z-polynomial of degree >= 1."""
    factors, P = _linear_factors_z(P)
    while P.degree >= 2:
        g = _kronecker_factor(P, _allowed_factor_degrees(P))
        if g is None:
            factors.append(P)
            break
        _, g = _q_to_z_primitive(Poly(QQ, tuple(Fraction(c) for c in g.coeffs)))
        factors.append(g)
        P = P.exact_div(g)
    if P.degree == 1:
        factors.append(P)
    return factors


def _factor_gf(p):
    """Factor a GF(q)[x] polynomial by monic trial division."""
    ring = p.ring
    q = ring.p
    unit = p.lc
    rest = p.monic()
    factors = []
    d = 1
    while rest.degree >= 1 and d <= rest.degree // 2:
        found = False
        for tail in itertools.product(range(q), repeat=d):
            cand = Poly(ring, tail + (1,))
            quo = rest.exact_div(cand)
            if quo is not None:
                factors.append(cand)
                rest = quo
                found = True
                break
        if not found:
            d += 1
    if rest.degree >= 1:
        factors.append(rest)
    return unit, factors


def factor(p):
    """Factor over Q or GF(q): returns (unit, [(monic-or-primitive
    irreducible factor, multiplicity)]); unit * product == p.

    Over Q the factors are monic; over GF(q) monic; degree over Q is
    capped (Kronecker search).
    """
    unit, pairs = _factor_cached(p)
    return unit, list(pairs)


@lru_cache(maxsize=4096)
def _factor_cached(p):
    if p.is_zero:
        raise ValueError("cannot factor the zero polynomial")
    ring = p.ring
    if ring.name == "Q":
        if p.degree != MINUS_INF and p.degree > KRONECKER_DEGREE_CAP:
            raise ValueError(f"degree {p.degree} beyond factoring cap "
                             f"{KRONECKER_DEGREE_CAP}")
        if p.is_const:
            return p.coeffs[0], ()
        c, P = _q_to_z_primitive(p)
        raw = _factor_z_primitive(P)
        unit = c
        counted = {}
        for f in raw:
            qf = Poly(QQ, tuple(Fraction(v) for v in f.coeffs))
            unit = unit * qf.lc
            mf = qf.monic()
            counted[mf] = counted.get(mf, 0) + 1
        return unit, tuple(sorted(counted.items(),
                                  key=lambda kv: (kv[0].degree, kv[0].coeffs)))
    if getattr(ring, "p", None) is not None:
        if p.is_const:
            return p.coeffs[0], ()
        unit, raw = _factor_gf(p)
        counted = {}
        for f in raw:
            counted[f] = counted.get(f, 0) + 1
        return unit, tuple(sorted(counted.items(),
                                  key=lambda kv: (kv[0].degree, kv[0].coeffs)))
    raise ValueError(f"factoring not supported over {ring.name}")


@lru_cache(maxsize=8192)
def is_irreducible(p):
    """Irreducibility over Q or GF(q) (nonconstant, no proper factors)."""
    if p.is_zero or p.is_const:
        return False
    if p.degree == 1:
        return True
    ring = p.ring
    if ring.name == "Q":
        if p.degree > KRONECKER_DEGREE_CAP:
            raise ValueError(f"degree {p.degree} beyond factoring cap "
                             f"{KRONECKER_DEGREE_CAP}")
        _, P = _q_to_z_primitive(p)
        if P.coeffs[0] == 0:
            return False
        lin, rest = _linear_factors_z(P)
        if lin:
            return False
        return _kronecker_factor(rest, _allowed_factor_degrees(rest)) is None
    if getattr(ring, "p", None) is not None:
        rest = p.monic()
        for d in range(1, p.degree // 2 + 1):
            for tail in itertools.product(range(ring.p), repeat=d):
                cand = Poly(ring, tail + (1,))
                if rest.exact_div(cand) is not None:
                    return False
        return True
    raise ValueError(f"irreducibility not supported over {ring.name}")


def _is_prime_int(n):
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


def z_is_irreducible(p):
    """Irreducibility in Z[x]: a prime constant (up to sign), or a
    primitive polynomial irreducible over Q."""
    if p.is_zero:
        return False
    if p.is_const:
        return _is_prime_int(abs(p.coeffs[0]))
    content = 0
    for c in p.coeffs:
        content = gcd(content, c)
    if content != 1:
        return False
    return is_irreducible(Poly(QQ, tuple(Fraction(c) for c in p.coeffs)))


def eisenstein_irreducible(p, q):
    """Eisenstein certificate at the prime q for a Q-polynomial: applies
    to the primitive integer form; True means irreducible over Q."""
    _, P = _q_to_z_primitive(p)
    if P.degree == MINUS_INF or P.degree < 1:
        return False
    if P.lc % q == 0:
        return False
    if any(c % q != 0 for c in P.coeffs[:-1]):
        return False
    return P.coeffs[0] % (q * q) != 0


# ---------------------------------------------------------------------------
# Multivariate polynomials


def _grlex_key(vec):
    return (sum(vec), vec)


class MPoly:
    """Multivariate polynomial: exponent vector -> nonzero coefficient."""

    __slots__ = ("ring", "k", "terms")

    def __init__(self, ring, k, terms):
        self.ring = ring
        self.k = k
        clean = {}
        for vec, c in terms.items():
            if len(vec) != k:
                raise ValueError(f"exponent vector {vec} has wrong length")
            if not ring.is_zero(c):
                clean[tuple(vec)] = c
        self.terms = clean

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
    def var(cls, ring, k, i):
        vec = [0] * k
        vec[i] = 1
        return cls(ring, k, {tuple(vec): ring.one})

    @property
    def is_zero(self):
        return not self.terms

    @property
    def is_const(self):
        return not self.terms or set(self.terms) == {(0,) * self.k}

    @property
    def is_unit(self):
        return (set(self.terms) == {(0,) * self.k}
                and self.ring.is_unit(self.terms[(0,) * self.k]))

    @property
    def total_degree(self):
        if not self.terms:
            return MINUS_INF
        return max(sum(v) for v in self.terms)

    def coeff(self, vec):
        return self.terms.get(tuple(vec), self.ring.zero)

    def leading(self):
        """(exponent vector, coefficient) maximal in graded lex order."""
        if not self.terms:
            raise ValueError("zero polynomial has no leading term")
        vec = max(self.terms, key=_grlex_key)
        return vec, self.terms[vec]

    def __eq__(self, other):
        if isinstance(other, MPoly):
            return (self.ring.name == other.ring.name and self.k == other.k
                    and self.terms == other.terms)
        return NotImplemented

    def __hash__(self):
        return hash((self.ring.name, self.k,
                     tuple(sorted(self.terms.items()))))

    def __repr__(self):
        return f"MPoly[{self.ring.name},k={self.k}]({self.terms})"

    def __add__(self, other):
        r = self.ring
        out = dict(self.terms)
        for vec, c in other.terms.items():
            out[vec] = r.add(out.get(vec, r.zero), c)
        return MPoly(r, self.k, out)

    def __neg__(self):
        r = self.ring
        return MPoly(r, self.k, {v: r.neg(c) for v, c in self.terms.items()})

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
        return MPoly(r, self.k, out)

    def __pow__(self, n):
        if n < 0:
            raise ValueError("negative power of a polynomial")
        out = MPoly.one(self.ring, self.k)
        sq = self
        while n:
            if n & 1:
                out = out * sq
            n >>= 1
            if n:
                sq = sq * sq
        return out

    def scale(self, c):
        r = self.ring
        return MPoly(r, self.k, {v: r.mul(c, a) for v, a in self.terms.items()})

    def evaluate(self, point):
        if len(point) != self.k:
            raise ValueError("wrong number of coordinates")
        r = self.ring
        acc = r.zero
        for vec, c in self.terms.items():
            term = c
            for e, a in zip(vec, point):
                for _ in range(e):
                    term = r.mul(term, a)
            acc = r.add(acc, term)
        return acc

    def exact_div(self, d):
        """self / d by leading-term cancellation (graded lex); None if
        d does not divide self. Exact over any integral domain whose
        ring supports exact_div."""
        r = self.ring
        if d.is_zero:
            return None
        rem = dict(self.terms)
        out = {}
        dvec, dc = d.leading()
        while rem:
            vec = max(rem, key=_grlex_key)
            c = rem[vec]
            qvec = tuple(a - b for a, b in zip(vec, dvec))
            if any(e < 0 for e in qvec):
                return None
            qc = r.exact_div(c, dc)
            if qc is None:
                return None
            out[qvec] = qc
            for v2, c2 in d.terms.items():
                v = tuple(a + b for a, b in zip(qvec, v2))
                nc = r.sub(rem.get(v, r.zero), r.mul(qc, c2))
                if r.is_zero(nc):
                    rem.pop(v, None)
                else:
                    rem[v] = nc
        return MPoly(r, self.k, out)

    def divides(self, other):
        return other.exact_div(self) is not None
