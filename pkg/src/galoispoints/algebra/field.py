"""Exact arithmetic in finite fields F_p[t]/(m(t)).

Elements are stored as integer codes 0 <= a < p^d whose base-p digits are the
little-endian coefficients of the residue polynomial: code(sum c_i t^i) =
sum c_i p^i.  The public wrapper is :class:`FieldElement`; descriptors expose
code-level operations for hot loops.

Three descriptor kinds share one interface:

* prime fields use direct modular arithmetic on codes;
* extensions with p^d <= TABLE_LIMIT are backed by discrete-log tables
  (multiplication) and digit-split tables (addition), all O(1) per op;
* larger extensions fall back to on-demand polynomial arithmetic.
"""

from __future__ import annotations

import functools

from ..errors import InputError

TABLE_LIMIT = 1 << 20


def _is_probable_prime(n):
    if n < 2:
        return False
    for q in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % q == 0:
            return n == q
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _factor_int(n):
    """Prime factorization by trial division; n stays desk scale."""
    out = {}
    d = 2
    while d * d <= n:
        while n % d == 0:
            out[d] = out.get(d, 0) + 1
            n //= d
        d += 1
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


class FieldElement:
    """Immutable element of a :class:`FieldDescriptor`."""

    __slots__ = ("field", "code")

    def __init__(self, field, code):
        self.field = field
        self.code = code

    def _other(self, x):
        if isinstance(x, FieldElement):
            if x.field is not self.field:
                raise InputError(
                    "FIELD_MISMATCH",
                    f"elements of {self.field} and {x.field} cannot be combined",
                )
            return x.code
        if isinstance(x, int):
            return self.field.from_int(x)
        return NotImplemented

    def __add__(self, x):
        c = self._other(x)
        if c is NotImplemented:
            return NotImplemented
        return FieldElement(self.field, self.field.add(self.code, c))

    __radd__ = __add__

    def __sub__(self, x):
        c = self._other(x)
        if c is NotImplemented:
            return NotImplemented
        return FieldElement(self.field, self.field.sub(self.code, c))

    def __rsub__(self, x):
        c = self._other(x)
        if c is NotImplemented:
            return NotImplemented
        return FieldElement(self.field, self.field.sub(c, self.code))

    def __mul__(self, x):
        c = self._other(x)
        if c is NotImplemented:
            return NotImplemented
        return FieldElement(self.field, self.field.mul(self.code, c))

    __rmul__ = __mul__

    def __truediv__(self, x):
        c = self._other(x)
        if c is NotImplemented:
            return NotImplemented
        return FieldElement(self.field, self.field.div(self.code, c))

    def __rtruediv__(self, x):
        c = self._other(x)
        if c is NotImplemented:
            return NotImplemented
        return FieldElement(self.field, self.field.div(c, self.code))

    def __neg__(self):
        return FieldElement(self.field, self.field.neg(self.code))

    def __pow__(self, n):
        return FieldElement(self.field, self.field.pow(self.code, n))

    def __eq__(self, x):
        if isinstance(x, FieldElement):
            return self.field is x.field and self.code == x.code
        if isinstance(x, int):
            return self.code == self.field.from_int(x)
        return NotImplemented

    def __hash__(self):
        return hash((id(self.field), self.code))

    def __bool__(self):
        return self.code != 0

    def inverse(self):
        return FieldElement(self.field, self.field.inv(self.code))

    @property
    def coords(self):
        """Little-endian coefficient vector over F_p."""
        return self.field.decode(self.code)

    def __repr__(self):
        return f"F{self.field.q}{list(self.coords)}"


class FieldDescriptor:
    """A concrete finite field; construct via :func:`build_field`."""

    def __init__(self, p, modulus):
        self.p = p
        self.modulus = tuple(modulus)
        self.degree = len(modulus) - 1
        self.q = p**self.degree
        self._embeddings = {}
        if self.degree == 1:
            self.kind = "prime"
        elif self.q <= TABLE_LIMIT:
            self.kind = "tabled"
            self._build_tables()
        else:
            self.kind = "generic"
            self._inv_cache = {}
        self._kernel_tables = None

    # -- encoding ---------------------------------------------------------

    def encode(self, coords):
        code = 0
        for c in reversed(coords):
            code = code * self.p + c % self.p
        return code

    def decode(self, code):
        p, out = self.p, []
        for _ in range(self.degree):
            code, r = divmod(code, p)
            out.append(r)
        return tuple(out)

    def from_int(self, n):
        """Image of the rational integer n (repeated 1-addition structure)."""
        return n % self.p

    def element(self, spec):
        """Coerce ints (rational integers) or coefficient vectors."""
        if isinstance(spec, FieldElement):
            if spec.field is not self:
                raise InputError("FIELD_MISMATCH", "element of a different field")
            return spec
        if isinstance(spec, int):
            return FieldElement(self, self.from_int(spec))
        coords = list(spec)
        if len(coords) > self.degree:
            raise InputError(
                "PARSE_ERROR",
                f"coefficient vector of length {len(coords)} in degree-{self.degree} field",
            )
        return FieldElement(self, self.encode(coords))

    @property
    def zero(self):
        return FieldElement(self, 0)

    @property
    def one(self):
        return FieldElement(self, 1)

    @property
    def gen(self):
        """Residue class of t (equals 1 in a prime field)."""
        return FieldElement(self, self.p % self.q if self.degree > 1 else 1)

    def elements(self):
        return (FieldElement(self, c) for c in range(self.q))

    # -- raw polynomial arithmetic on coordinate tuples -------------------

    def _poly_mulmod(self, a, b):
        p, d, m = self.p, self.degree, self.modulus
        prod = [0] * (2 * d - 1)
        for i, ai in enumerate(a):
            if ai:
                for j, bj in enumerate(b):
                    prod[i + j] = (prod[i + j] + ai * bj) % p
        for k in range(2 * d - 2, d - 1, -1):
            ck = prod[k]
            if ck:
                prod[k] = 0
                for j in range(d):
                    prod[k - d + j] = (prod[k - d + j] - ck * m[j]) % p
        return tuple(prod[:d])

    def _mul_generic(self, a, b):
        return self.encode(self._poly_mulmod(self.decode(a), self.decode(b)))

    def _add_generic(self, a, b):
        p = self.p
        ca, cb = self.decode(a), self.decode(b)
        return self.encode(tuple((x + y) % p for x, y in zip(ca, cb)))

    # -- table construction ----------------------------------------------

    def _build_tables(self):
        p, d, q = self.p, self.degree, self.q
        d2 = d // 2
        self._split = p**d2
        s1, s2 = p ** (d - d2), p**d2
        base = self._split

        def digit_add(a, b, n):
            out, mul = 0, 1
            for _ in range(n):
                out += ((a % p + b % p) % p) * mul
                a //= p
                b //= p
                mul *= p
            return out

        self._add_hi = [digit_add(a, b, d - d2) for a in range(s1) for b in range(s1)]
        self._add_lo = [digit_add(a, b, d2) for a in range(s2) for b in range(s2)]
        self._neg_table = [
            self.encode(tuple((-c) % p for c in self.decode(a))) for a in range(q)
        ]
        g = self._find_generator()
        exp = [1] * (2 * q - 2)
        for k in range(1, q - 1):
            exp[k] = self._mul_generic(exp[k - 1], g)
        for k in range(q - 1, 2 * q - 2):
            exp[k] = exp[k - (q - 1)]
        log = [0] * q
        for k in range(q - 1):
            log[exp[k]] = k
        self._exp, self._log = exp, log
        self._hi_size = s1
        self._base = base

    def _find_generator(self):
        q = self.q
        fac = _factor_int(q - 1)
        cofs = [(q - 1) // ell for ell in fac]
        for g in range(2, q):
            if all(self._pow_generic(g, c) != 1 for c in cofs):
                return g
        raise AssertionError("no multiplicative generator found")

    def _pow_generic(self, a, n):
        r = 1
        while n:
            if n & 1:
                r = self._mul_generic(r, a)
            a = self._mul_generic(a, a)
            n >>= 1
        return r

    # -- code-level field operations --------------------------------------

    def add(self, a, b):
        if self.kind == "prime":
            return (a + b) % self.p
        if self.kind == "tabled":
            s = self._base
            return (
                self._add_hi[(a // s) * self._hi_size + b // s] * s
                + self._add_lo[(a % s) * s + b % s]
            )
        return self._add_generic(a, b)

    def neg(self, a):
        if self.kind == "prime":
            return (-a) % self.p
        if self.kind == "tabled":
            return self._neg_table[a]
        p = self.p
        return self.encode(tuple((-c) % p for c in self.decode(a)))

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def mul(self, a, b):
        if self.kind == "prime":
            return a * b % self.p
        if self.kind == "tabled":
            if a == 0 or b == 0:
                return 0
            return self._exp[self._log[a] + self._log[b]]
        return self._mul_generic(a, b)

    def inv(self, a):
        if a == 0:
            raise ZeroDivisionError("inverse of zero")
        if self.kind == "prime":
            return pow(a, self.p - 2, self.p)
        if self.kind == "tabled":
            return self._exp[self.q - 1 - self._log[a]]
        hit = self._inv_cache.get(a)
        if hit is None:
            hit = self._pow_generic(a, self.q - 2)
            self._inv_cache[a] = hit
        return hit

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def pow(self, a, n):
        if n < 0:
            a, n = self.inv(a), -n
        if a == 0:
            return 0 if n else 1
        if self.kind == "tabled":
            return self._exp[self._log[a] * n % (self.q - 1)]
        if self.kind == "prime":
            return pow(a, n, self.p)
        return self._pow_generic(a, n)

    # -- embeddings -------------------------------------------------------

    def embed_into(self, target):
        """Compatible embedding self -> target, cached; deterministic root."""
        if target is self:
            return _IdentityEmbedding(self)
        hit = self._embeddings.get(id(target))
        if hit is None:
            hit = Embedding(self, target)
            self._embeddings[id(target)] = hit
        return hit

    # -- misc -------------------------------------------------------------

    def kernel_tables(self):
        """Flat table bundle shared by both backends' hot loops."""
        if self._kernel_tables is None:
            from .._backend import tables_for_field

            self._kernel_tables = tables_for_field(self)
        return self._kernel_tables

    def __repr__(self):
        return f"GF({self.p}^{self.degree})" if self.degree > 1 else f"GF({self.p})"


class _IdentityEmbedding:
    def __init__(self, field):
        self.source = field
        self.target = field

    def __call__(self, code):
        return code


class Embedding:
    """F_{p^a} -> F_{p^ab} determined by the smallest root of the source
    modulus in the target (roots exist iff a | b)."""

    def __init__(self, source, target):
        if source.p != target.p or target.degree % source.degree:
            raise InputError(
                "FIELD_MISMATCH",
                f"no embedding {source} -> {target}",
            )
        self.source = source
        self.target = target
        from .unipoly import UniPoly, roots_in_field

        m = UniPoly(target, [target.from_int(c) for c in source.modulus])
        roots = roots_in_field(m, target)
        root = min(r.code for r in roots)
        powers = [1]
        for _ in range(source.degree - 1):
            powers.append(target.mul(powers[-1], root))
        self._powers = powers

    def __call__(self, code):
        tgt = self.target
        out = 0
        for c, pw in zip(self.source.decode(code), self._powers):
            if c:
                out = tgt.add(out, tgt.mul(c, pw))
        return out

    def map_element(self, el):
        return FieldElement(self.target, self(el.code))


@functools.lru_cache(maxsize=None)
def _cached_field(p, modulus):
    return FieldDescriptor(p, modulus)


def build_field(p, modulus):
    """Validated field constructor.

    ``modulus`` is the monic little-endian coefficient vector of m(t) over
    F_p (length d+1).  Errors: NOT_PRIME, REDUCIBLE_MODULUS, PARSE_ERROR.
    """
    if not isinstance(p, int) or not _is_probable_prime(p):
        raise InputError("NOT_PRIME", f"characteristic {p!r} is not prime")
    coeffs = [c % p for c in modulus]
    if len(coeffs) < 2 or coeffs[-1] != 1:
        raise InputError(
            "PARSE_ERROR", "modulus must be monic of degree >= 1 (little-endian)"
        )
    if len(coeffs) > 2:
        # Validate before the descriptor (and its tables) are built and cached.
        from .unipoly import UniPoly, is_irreducible

        base = _cached_field(p, (0, 1))
        m = UniPoly(base, [base.element(c) for c in coeffs])
        if not is_irreducible(m):
            raise InputError(
                "REDUCIBLE_MODULUS", f"modulus {coeffs} is reducible over GF({p})"
            )
    return _cached_field(p, tuple(coeffs))


def prime_field(p):
    return build_field(p, [0, 1])


def find_irreducible(p, degree):
    """Deterministically smallest monic irreducible of given degree over F_p."""
    base = prime_field(p)
    from .unipoly import UniPoly, is_irreducible

    if degree == 1:
        return (0, 1)
    for n in range(p**degree):
        coeffs, m = [], n
        for _ in range(degree):
            m, r = divmod(m, p)
            coeffs.append(r)
        coeffs.append(1)
        f = UniPoly(base, [base.element(c) for c in coeffs])
        if is_irreducible(f):
            return tuple(coeffs)
    raise AssertionError("unreachable: irreducibles exist in every degree")


def extension_field(base_field, ext_degree):
    """Working extension of total degree base.degree * ext_degree over F_p,
    together with the embedding of ``base_field`` into it."""
    if ext_degree == 1:
        return base_field, _IdentityEmbedding(base_field)
    total = base_field.degree * ext_degree
    modulus = find_irreducible(base_field.p, total)
    target = build_field(base_field.p, modulus)
    return target, base_field.embed_into(target)
