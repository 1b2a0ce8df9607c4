"""Private sparse multivariate polynomial engine.

Backs the elimination machinery (Sylvester resultants with polynomial entries
via fraction-free Bareiss) in any number of variables.  Public contracts live
in :mod:`tripoly`; nothing here is exported by the package.
"""

from __future__ import annotations


class MPoly:
    __slots__ = ("field", "nvars", "terms")

    def __init__(self, field, nvars, terms=None):
        self.field = field
        self.nvars = nvars
        self.terms = {}
        if terms:
            for e, c in terms.items():
                if c:
                    self.terms[tuple(e)] = c

    @classmethod
    def zero(cls, field, nvars):
        return cls(field, nvars)

    @classmethod
    def const(cls, field, nvars, code):
        out = cls(field, nvars)
        if code:
            out.terms[(0,) * nvars] = code
        return out

    @classmethod
    def variable(cls, field, nvars, v):
        out = cls(field, nvars)
        e = [0] * nvars
        e[v] = 1
        out.terms[tuple(e)] = 1
        return out

    def is_zero(self):
        return not self.terms

    def is_constant(self):
        return all(sum(e) == 0 for e in self.terms)

    def total_degree(self):
        return max((sum(e) for e in self.terms), default=-1)

    def deg_in(self, v):
        return max((e[v] for e in self.terms), default=-1)

    def __add__(self, other):
        K = self.field
        out = dict(self.terms)
        for e, c in other.terms.items():
            s = K.add(out.get(e, 0), c)
            if s:
                out[e] = s
            else:
                out.pop(e, None)
        r = MPoly(K, self.nvars)
        r.terms = out
        return r

    def __neg__(self):
        K = self.field
        r = MPoly(K, self.nvars)
        r.terms = {e: K.neg(c) for e, c in self.terms.items()}
        return r

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        K = self.field
        out = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                s = K.add(out.get(e, 0), K.mul(c1, c2))
                if s:
                    out[e] = s
                else:
                    out.pop(e, None)
        r = MPoly(K, self.nvars)
        r.terms = out
        return r

    def scale(self, code):
        K = self.field
        r = MPoly(K, self.nvars)
        if code:
            r.terms = {e: K.mul(c, code) for e, c in self.terms.items()}
        return r

    def pow(self, n):
        r = MPoly.const(self.field, self.nvars, 1)
        b = self
        while n:
            if n & 1:
                r = r * b
            b = b * b
            n >>= 1
        return r

    def coeffs_in(self, v):
        """dict degree -> MPoly with the v-exponent zeroed out."""
        out = {}
        for e, c in self.terms.items():
            k = e[v]
            e0 = e[:v] + (0,) + e[v + 1 :]
            bucket = out.setdefault(k, MPoly(self.field, self.nvars))
            bucket.terms[e0] = c
        return out

    def shift_var(self, v, k):
        """Multiply by var_v^k."""
        r = MPoly(self.field, self.nvars)
        for e, c in self.terms.items():
            r.terms[e[:v] + (e[v] + k,) + e[v + 1 :]] = c
        return r

    def __repr__(self):
        return f"MPoly({len(self.terms)} terms, nvars={self.nvars})"


def _grlex_max(terms):
    return max(terms, key=lambda e: (sum(e), e))


def exact_div(A, B):
    """Quotient of an exact multiple; raises ArithmeticError otherwise."""
    K = A.field
    if B.is_zero():
        raise ZeroDivisionError("division by zero polynomial")
    if A.is_zero():
        return MPoly.zero(K, A.nvars)
    ltB = _grlex_max(B.terms)
    inv_lcB = K.inv(B.terms[ltB])
    rem = dict(A.terms)
    quo = {}
    while rem:
        ltR = _grlex_max(rem)
        diff = tuple(a - b for a, b in zip(ltR, ltB))
        if any(d < 0 for d in diff):
            raise ArithmeticError("division is not exact")
        c = K.mul(rem[ltR], inv_lcB)
        quo[diff] = K.add(quo.get(diff, 0), c)
        nc = K.neg(c)
        for e, bc in B.terms.items():
            t = tuple(a + b for a, b in zip(diff, e))
            s = K.add(rem.get(t, 0), K.mul(nc, bc))
            if s:
                rem[t] = s
            else:
                rem.pop(t, None)
    out = MPoly(K, A.nvars)
    out.terms = quo
    return out


def det_bareiss(M):
    """Fraction-free determinant of a square MPoly matrix (entries consumed)."""
    n = len(M)
    if n == 0:
        raise ValueError("empty matrix")
    K = M[0][0].field
    nv = M[0][0].nvars
    M = [row[:] for row in M]
    sign = 1
    prev = MPoly.const(K, nv, 1)
    for k in range(n - 1):
        if M[k][k].is_zero():
            for i in range(k + 1, n):
                if not M[i][k].is_zero():
                    M[k], M[i] = M[i], M[k]
                    sign = -sign
                    break
            else:
                return MPoly.zero(K, nv)
        piv = M[k][k]
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                num = M[i][j] * piv - M[i][k] * M[k][j]
                M[i][j] = exact_div(num, prev)
            M[i][k] = MPoly.zero(K, nv)
        prev = piv
    out = M[n - 1][n - 1]
    return out if sign == 1 else -out


def resultant(A, B, v):
    """Resultant of A, B with respect to variable index v.

    Convention for degree-zero inputs: Res(A, B) = B^deg_v(A) when
    deg_v(B) = 0 (and symmetrically); both degree zero yields 1.
    """
    K = A.field
    nv = A.nvars
    da, db = A.deg_in(v), B.deg_in(v)
    if da < 0 or db < 0:
        return MPoly.zero(K, nv)
    if da == 0 and db == 0:
        return MPoly.const(K, nv, 1)
    if db == 0:
        return B.pow(da)
    if da == 0:
        return A.pow(db)
    ca, cb = A.coeffs_in(v), B.coeffs_in(v)
    zero = MPoly.zero(K, nv)
    n = da + db
    rows = []
    for i in range(db):
        row = [zero] * n
        for k, c in ca.items():
            row[i + (da - k)] = c
        rows.append(row)
    for i in range(da):
        row = [zero] * n
        for k, c in cb.items():
            row[i + (db - k)] = c
        rows.append(row)
    return det_bareiss(rows)
