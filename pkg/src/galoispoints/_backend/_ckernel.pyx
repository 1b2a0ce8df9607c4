# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled point-scan kernels.

Mirrors the scan routines of the pure backend for prime and table-backed
fields; the dispatcher never routes other field kinds here.
"""

from cpython cimport array
import array


cdef inline long _mul(int kind, long p, long qm1, long[:] exp, long[:] log,
                      long a, long b) nogil:
    if kind == 0:
        return (a * b) % p
    if a == 0 or b == 0:
        return 0
    return exp[log[a] + log[b]]


cdef inline long _add(int kind, long p, long split, long hi_size,
                      long[:] add_hi, long[:] add_lo, long a, long b) nogil:
    if kind == 0:
        return (a + b) % p
    return (add_hi[(a // split) * hi_size + b // split] * split
            + add_lo[(a % split) * split + b % split])


cdef inline long _powc(int kind, long p, long qm1, long[:] exp, long[:] log,
                       long a, long e) nogil:
    cdef long r, base, k
    if e == 0:
        return 1
    if a == 0:
        return 0
    if kind == 0:
        r = 1
        base = a
        k = e
        while k:
            if k & 1:
                r = (r * base) % p
            base = (base * base) % p
            k >>= 1
        return r
    return exp[(log[a] * e) % qm1]


cdef class _Ctx:
    cdef int kind
    cdef long p, q, qm1, split, hi_size
    cdef long[:] exp
    cdef long[:] log
    cdef long[:] add_hi
    cdef long[:] add_lo

    def __init__(self, tables):
        self.kind = tables.kind_id
        self.p = tables.p
        self.q = tables.q
        self.qm1 = tables.q - 1
        empty = array.array("l", [0])
        if self.kind == 1:
            self.split = tables.split
            self.hi_size = tables.hi_size
            self.exp = tables.exp
            self.log = tables.log
            self.add_hi = tables.add_hi
            self.add_lo = tables.add_lo
        else:
            self.split = 1
            self.hi_size = 1
            self.exp = empty
            self.log = empty
            self.add_hi = empty
            self.add_lo = empty


def count_projective_zeros(tables, terms):
    cdef _Ctx c = _Ctx(tables)
    cdef long n = len(terms)
    cdef array.array cs_a = array.array("l", [u[0] for u in terms])
    cdef array.array e1_a = array.array("l", [u[2] for u in terms])
    cdef array.array e2_a = array.array("l", [u[3] for u in terms])
    cdef array.array ax0_a = array.array("l", [1 if u[1] == 0 else 0 for u in terms])
    cdef array.array ay0_a = array.array("l", [1 if u[2] == 0 else 0 for u in terms])
    cdef long[:] cs = cs_a
    cdef long[:] e1 = e1_a
    cdef long[:] e2 = e2_a
    cdef long[:] x0 = ax0_a
    cdef long[:] y0 = ay0_a
    cdef array.array pre_a = array.array("l", [0] * max(n, 1))
    cdef long[:] pre = pre_a
    cdef long q = c.q
    cdef long count = 0
    cdef long y, z, t, acc, v
    with nogil:
        for y in range(q):
            for t in range(n):
                pre[t] = _mul(c.kind, c.p, c.qm1, c.exp, c.log, cs[t],
                              _powc(c.kind, c.p, c.qm1, c.exp, c.log, y, e1[t]))
            for z in range(q):
                acc = 0
                for t in range(n):
                    if pre[t]:
                        v = _mul(c.kind, c.p, c.qm1, c.exp, c.log, pre[t],
                                 _powc(c.kind, c.p, c.qm1, c.exp, c.log, z, e2[t]))
                        acc = _add(c.kind, c.p, c.split, c.hi_size,
                                   c.add_hi, c.add_lo, acc, v)
                if acc == 0:
                    count += 1
        for z in range(q):
            acc = 0
            for t in range(n):
                if x0[t]:
                    v = _mul(c.kind, c.p, c.qm1, c.exp, c.log, cs[t],
                             _powc(c.kind, c.p, c.qm1, c.exp, c.log, z, e2[t]))
                    acc = _add(c.kind, c.p, c.split, c.hi_size,
                               c.add_hi, c.add_lo, acc, v)
            if acc == 0:
                count += 1
        acc = 0
        for t in range(n):
            if x0[t] and y0[t]:
                acc = _add(c.kind, c.p, c.split, c.hi_size,
                           c.add_hi, c.add_lo, acc, cs[t])
        if acc == 0:
            count += 1
    return count


def find_projective_zeros(tables, terms, limit=None):
    cdef _Ctx c = _Ctx(tables)
    cdef long n = len(terms)
    cdef array.array cs_a = array.array("l", [u[0] for u in terms])
    cdef array.array e1_a = array.array("l", [u[2] for u in terms])
    cdef array.array e2_a = array.array("l", [u[3] for u in terms])
    cdef array.array ax0_a = array.array("l", [1 if u[1] == 0 else 0 for u in terms])
    cdef array.array ay0_a = array.array("l", [1 if u[2] == 0 else 0 for u in terms])
    cdef long[:] cs = cs_a
    cdef long[:] e1 = e1_a
    cdef long[:] e2 = e2_a
    cdef long[:] x0 = ax0_a
    cdef long[:] y0 = ay0_a
    cdef array.array pre_a = array.array("l", [0] * max(n, 1))
    cdef long[:] pre = pre_a
    cdef long q = c.q
    cdef long y, z, t, acc, v
    cdef long cap = -1 if limit is None else limit
    out = []
    for y in range(q):
        for t in range(n):
            pre[t] = _mul(c.kind, c.p, c.qm1, c.exp, c.log, cs[t],
                          _powc(c.kind, c.p, c.qm1, c.exp, c.log, y, e1[t]))
        for z in range(q):
            acc = 0
            for t in range(n):
                if pre[t]:
                    v = _mul(c.kind, c.p, c.qm1, c.exp, c.log, pre[t],
                             _powc(c.kind, c.p, c.qm1, c.exp, c.log, z, e2[t]))
                    acc = _add(c.kind, c.p, c.split, c.hi_size,
                               c.add_hi, c.add_lo, acc, v)
            if acc == 0:
                out.append((1, y, z))
                if cap >= 0 and len(out) >= cap:
                    return out
    for z in range(q):
        acc = 0
        for t in range(n):
            if x0[t]:
                v = _mul(c.kind, c.p, c.qm1, c.exp, c.log, cs[t],
                         _powc(c.kind, c.p, c.qm1, c.exp, c.log, z, e2[t]))
                acc = _add(c.kind, c.p, c.split, c.hi_size,
                           c.add_hi, c.add_lo, acc, v)
        if acc == 0:
            out.append((0, 1, z))
            if cap >= 0 and len(out) >= cap:
                return out
    acc = 0
    for t in range(n):
        if x0[t] and y0[t]:
            acc = _add(c.kind, c.p, c.split, c.hi_size,
                       c.add_hi, c.add_lo, acc, cs[t])
    if acc == 0:
        out.append((0, 0, 1))
    return out
