"""Univariate polynomials over a finite field, with exact factorization.

Coefficients are stored little-endian as integer codes of the owning field.
Factorization is squarefree decomposition + distinct-degree splitting +
equal-degree splitting; the equal-degree stage consumes a deterministic seeded
RNG so repeated runs agree bit for bit.
"""

from __future__ import annotations

import random

from ..errors import InputError
from .field import FieldElement


class UniPoly:
    __slots__ = ("field", "coeffs")

    def __init__(self, field, coeffs):
        """coeffs: iterable of FieldElement or codes, little-endian."""
        self.field = field
        raw = [c.code if isinstance(c, FieldElement) else c for c in coeffs]
        while raw and raw[-1] == 0:
            raw.pop()
        self.coeffs = tuple(raw)

    @classmethod
    def from_codes(cls, field, codes):
        obj = cls.__new__(cls)
        obj.field = field
        raw = list(codes)
        while raw and raw[-1] == 0:
            raw.pop()
        obj.coeffs = tuple(raw)
        return obj

    @classmethod
    def x(cls, field):
        return cls.from_codes(field, (0, 1))

    @classmethod
    def constant(cls, field, code):
        return cls.from_codes(field, (code,))

    @property
    def degree(self):
        return len(self.coeffs) - 1

    def is_zero(self):
        return not self.coeffs

    def lc(self):
        return self.coeffs[-1] if self.coeffs else 0

    def __eq__(self, other):
        return (
            isinstance(other, UniPoly)
            and self.field is other.field
            and self.coeffs == other.coeffs
        )

    def __hash__(self):
        return hash((id(self.field), self.coeffs))

    def __add__(self, other):
        K = self.field
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] = K.add(out[i], c)
        return UniPoly.from_codes(K, out)

    def __sub__(self, other):
        K = self.field
        n = max(len(self.coeffs), len(other.coeffs))
        out = []
        for i in range(n):
            x = self.coeffs[i] if i < len(self.coeffs) else 0
            y = other.coeffs[i] if i < len(other.coeffs) else 0
            out.append(K.sub(x, y))
        return UniPoly.from_codes(K, out)

    def __neg__(self):
        K = self.field
        return UniPoly.from_codes(K, [K.neg(c) for c in self.coeffs])

    def __mul__(self, other):
        K = self.field
        if isinstance(other, int):
            other = UniPoly.constant(K, K.from_int(other))
        elif isinstance(other, FieldElement):
            other = UniPoly.constant(K, other.code)
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return UniPoly.from_codes(K, ())
        out = [0] * (len(a) + len(b) - 1)
        for i, ai in enumerate(a):
            if ai:
                for j, bj in enumerate(b):
                    if bj:
                        out[i + j] = K.add(out[i + j], K.mul(ai, bj))
        return UniPoly.from_codes(K, out)

    __rmul__ = __mul__

    def scale(self, code):
        K = self.field
        return UniPoly.from_codes(K, [K.mul(c, code) for c in self.coeffs])

    def monic(self):
        if self.is_zero() or self.lc() == 1:
            return self
        return self.scale(self.field.inv(self.lc()))

    def __divmod__(self, other):
        K = self.field
        if other.is_zero():
            raise ZeroDivisionError("division by the zero polynomial")
        rem = list(self.coeffs)
        dq = len(rem) - len(other.coeffs)
        if dq < 0:
            return UniPoly.from_codes(K, ()), self
        quo = [0] * (dq + 1)
        inv_lc = K.inv(other.lc())
        for k in range(dq, -1, -1):
            top = rem[k + other.degree]
            if top:
                c = K.mul(top, inv_lc)
                quo[k] = c
                for j, oc in enumerate(other.coeffs):
                    rem[k + j] = K.sub(rem[k + j], K.mul(c, oc))
        return UniPoly.from_codes(K, quo), UniPoly.from_codes(K, rem)

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def mulmod(self, other, mod):
        return (self * other) % mod

    def powmod(self, n, mod):
        K = self.field
        result = UniPoly.from_codes(K, (1,)) % mod
        base = self % mod
        while n:
            if n & 1:
                result = result.mulmod(base, mod)
            base = base.mulmod(base, mod)
            n >>= 1
        return result

    def gcd(self, other):
        a, b = self, other
        while not b.is_zero():
            a, b = b, a % b
        return a.monic() if not a.is_zero() else a

    def derivative(self):
        K = self.field
        out = []
        for i in range(1, len(self.coeffs)):
            out.append(K.mul(self.coeffs[i], i % K.p))
        return UniPoly.from_codes(K, out)

    def eval(self, code):
        K = self.field
        acc = 0
        for c in reversed(self.coeffs):
            acc = K.add(K.mul(acc, code), c)
        return acc

    def __call__(self, el):
        if isinstance(el, FieldElement):
            return FieldElement(self.field, self.eval(el.code))
        return FieldElement(self.field, self.eval(el))

    def map_field(self, embedding):
        """Push coefficients through a field embedding."""
        return UniPoly.from_codes(
            embedding.target, [embedding(c) for c in self.coeffs]
        )

    def __repr__(self):
        if self.is_zero():
            return "UniPoly(0)"
        parts = [
            f"{list(self.field.decode(c))}*x^{i}"
            for i, c in enumerate(self.coeffs)
            if c
        ]
        return "UniPoly(" + " + ".join(parts) + ")"


def _frobenius_root_poly(f):
    """For f with f' = 0 write f(x) = g(x^p) and return the p-th root of g's
    coefficients composed back, i.e. h with h^p = f (f monic)."""
    K = f.field
    p = K.p
    out = []
    for i in range(0, len(f.coeffs), p):
        c = f.coeffs[i]
        out.append(K.pow(c, K.q // p))
    return UniPoly.from_codes(K, out)


def squarefree_decomposition(f):
    """Return list of (squarefree monic factor, multiplicity); f monic."""
    K = f.field
    out = []

    def rec(g, mult):
        if g.degree < 1:
            return
        d = g.derivative()
        if d.is_zero():
            rec(_frobenius_root_poly(g), mult * K.p)
            return
        w = g.gcd(d)
        s = g // w
        # s = product of squarefree part's factors at multiplicity coprime run
        k = 1
        while s.degree > 0:
            y = s.gcd(w)
            factor = s // y
            if factor.degree > 0:
                out.append((factor.monic(), mult * k))
            s = y
            w = w // y
            k += 1
        if w.degree > 0:
            rec(w, mult)

    rec(f.monic(), 1)
    return out


def _distinct_degree(f):
    """f monic squarefree; yield (product of irreducibles of degree k, k)."""
    K = f.field
    out = []
    x = UniPoly.x(K)
    h = x % f
    k = 0
    rest = f
    while rest.degree > 0:
        k += 1
        if 2 * k > rest.degree:
            out.append((rest, rest.degree))
            break
        h = h.powmod(K.q, rest)
        g = rest.gcd(h - x)
        if g.degree > 0:
            out.append((g, k))
            rest = rest // g
            h = h % rest
    return out


def _equal_degree_split(f, k, rng):
    """Cantor-Zassenhaus split of monic squarefree f = product of degree-k
    irreducibles; returns list of irreducible factors."""
    K = f.field
    if f.degree == k:
        return [f]
    n = f.degree
    while True:
        r = UniPoly.from_codes(K, [rng.randrange(K.q) for _ in range(n)])
        if r.degree < 1:
            continue
        g = f.gcd(r)
        if 0 < g.degree < n:
            pieces = g, f // g
            break
        if K.p == 2:
            # trace map sum r^(2^i) over the degree-k subfield tower
            t = r % f
            acc = t
            m = K.degree * k
            for _ in range(m - 1):
                t = t.mulmod(t, f)
                acc = (acc + t) % f
            g = f.gcd(acc)
        else:
            e = (K.q**k - 1) // 2
            s = r.powmod(e, f)
            g = f.gcd(s - UniPoly.from_codes(K, (1,)))
        if 0 < g.degree < n:
            pieces = g, f // g
            break
    out = []
    for piece in pieces:
        out.extend(_equal_degree_split(piece.monic(), k, rng))
    return out


def factor_univariate(f, seed=0):
    """Full factorization: returns (unit code, list of (monic factor, mult)),
    factors sorted by (degree, coefficient tuple) for determinism."""
    if f.is_zero():
        raise InputError("ZERO_DIVISOR", "cannot factor the zero polynomial")
    K = f.field
    unit = f.lc()
    rng = random.Random(f"{seed}/factor/{f.coeffs}")
    result = []
    for sqf, mult in squarefree_decomposition(f.monic()):
        for prod, k in _distinct_degree(sqf):
            for irr in _equal_degree_split(prod.monic(), k, rng):
                result.append((irr, mult))
    result.sort(key=lambda fm: (fm[0].degree, fm[0].coeffs, fm[1]))
    check = UniPoly.from_codes(K, (unit,))
    for irr, mult in result:
        for _ in range(mult):
            check = check * irr
    assert check == f, "factorization postcheck failed"
    return unit, result


def is_irreducible(f):
    """Rabin's test: x^(q^d) = x mod f and gcd checks at maximal subfields."""
    from .field import _factor_int

    K = f.field
    d = f.degree
    if d < 1:
        return False
    if d == 1:
        return True
    x = UniPoly.x(K)
    for ell in _factor_int(d):
        h = x.powmod(K.q ** (d // ell), f)
        if (h - x).gcd(f).degree != 0:
            return False
    h = x.powmod(K.q**d, f)
    return (h - x).is_zero() or ((h - x) % f).is_zero()


def roots_in_field(f, K, seed=0):
    """Multiset of roots of f lying in K, as a sorted list of FieldElements
    (repeated per multiplicity).  f may live over a subfield of K."""
    if f.is_zero():
        raise InputError("ZERO_DIVISOR", "every element is a root of 0")
    if f.field is not K:
        f = f.map_field(f.field.embed_into(K))
    if f.degree == 0:
        return []
    x = UniPoly.x(K)
    xq = x.powmod(K.q, f)
    linear_part = f.gcd(xq - x)
    rng = random.Random(f"{seed}/roots/{f.coeffs}")
    roots = []
    if linear_part.degree > 0:
        for irr in _equal_degree_split(linear_part.monic(), 1, rng):
            roots.append(K.neg(irr.coeffs[0]))
    out = []
    for r in sorted(roots):
        assert f.eval(r) == 0, "root postcheck failed"
        g = UniPoly.from_codes(K, (K.neg(r), 1))
        rest = f
        while True:
            quo, rem = divmod(rest, g)
            if not rem.is_zero():
                break
            out.append(FieldElement(K, r))
            rest = quo
    out.sort(key=lambda e: e.code)
    return out
