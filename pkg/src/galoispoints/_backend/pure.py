"""Pure-Python fallback kernels.

These are the reference implementations of the point-scan and matrix-closure
loops; the compiled kernel mirrors the scan routines exactly and is selected
at import time when present.
"""

from __future__ import annotations

from ..errors import ToolLimitError


def _pow_tables(K, terms, slot):
    """code -> code**e tables for every distinct exponent used in ``slot``."""
    out = {}
    for t in terms:
        e = t[slot]
        if e not in out:
            out[e] = [K.pow(c, e) for c in range(K.q)]
    return out


def count_projective_zeros(K, terms):
    """Number of projective zeros of the term list over K.

    terms: iterable of (coefficient code, e0, e1, e2)."""
    q = K.q
    add = K.add
    mul = K.mul
    terms = list(terms)
    count = 0
    py = _pow_tables(K, terms, 2)
    pz = _pow_tables(K, terms, 3)
    for y in range(q):
        pre = [(mul(c, py[e1][y]), e2) for (c, _, e1, e2) in terms]
        pre = [(c, e2) for c, e2 in pre if c]
        for z in range(q):
            acc = 0
            for c, e2 in pre:
                acc = add(acc, mul(c, pz[e2][z]))
            if acc == 0:
                count += 1
    for z in range(q):
        acc = 0
        for c, e0, e1, e2 in terms:
            if e0 == 0:
                acc = add(acc, mul(c, pz[e2][z]))
        if acc == 0:
            count += 1
    acc = 0
    for c, e0, e1, e2 in terms:
        if e0 == 0 and e1 == 0:
            acc = add(acc, c)
    if acc == 0:
        count += 1
    return count


def find_projective_zeros(K, terms, limit=None):
    """Projective zeros as canonical triples (leading nonzero coordinate 1),
    in a fixed deterministic order."""
    q = K.q
    add = K.add
    mul = K.mul
    terms = list(terms)
    out = []
    py = _pow_tables(K, terms, 2)
    pz = _pow_tables(K, terms, 3)
    for y in range(q):
        pre = [(mul(c, py[e1][y]), e2) for (c, _, e1, e2) in terms]
        pre = [(c, e2) for c, e2 in pre if c]
        for z in range(q):
            acc = 0
            for c, e2 in pre:
                acc = add(acc, mul(c, pz[e2][z]))
            if acc == 0:
                out.append((1, y, z))
                if limit is not None and len(out) >= limit:
                    return out
    for z in range(q):
        acc = 0
        for c, e0, e1, e2 in terms:
            if e0 == 0:
                acc = add(acc, mul(c, pz[e2][z]))
        if acc == 0:
            out.append((0, 1, z))
            if limit is not None and len(out) >= limit:
                return out
    acc = 0
    for c, e0, e1, e2 in terms:
        if e0 == 0 and e1 == 0:
            acc = add(acc, c)
    if acc == 0:
        out.append((0, 0, 1))
    return out


def mat_mul3(K, A, B):
    mul = K.mul
    add = K.add
    out = []
    for i in range(3):
        for j in range(3):
            s = 0
            for k in range(3):
                s = add(s, mul(A[3 * i + k], B[3 * k + j]))
            out.append(s)
    return tuple(out)


def mat_canon(K, A):
    """Scale so the first nonzero entry is 1 (projective representative)."""
    for x in A:
        if x:
            if x == 1:
                return tuple(A)
            inv = K.inv(x)
            return tuple(K.mul(inv, y) for y in A)
    raise ValueError("zero matrix has no projective representative")


def mat_apply(K, A, pt):
    mul = K.mul
    add = K.add
    out = []
    for i in range(3):
        s = 0
        for k in range(3):
            s = add(s, mul(A[3 * i + k], pt[k]))
        out.append(s)
    return tuple(out)


def _det3(K, A):
    mul = K.mul
    sub = K.sub

    def m2(a, b, c, d):
        return sub(mul(a, d), mul(b, c))

    t0 = mul(A[0], m2(A[4], A[5], A[7], A[8]))
    t1 = mul(A[1], m2(A[3], A[5], A[6], A[8]))
    t2 = mul(A[2], m2(A[3], A[4], A[6], A[7]))
    return K.add(sub(t0, t1), t2)


def closure_set(K, gens, cap):
    """Closure of the generator set under products, as canonical projective
    matrices; raises when the closure exceeds cap."""
    gens = [mat_canon(K, g) for g in gens]
    ident = (1, 0, 0, 0, 1, 0, 0, 0, 1)
    seen = {ident}
    frontier = [ident]
    for g in gens:
        if g not in seen:
            seen.add(g)
            frontier.append(g)
    while frontier:
        nxt = []
        for a in frontier:
            for g in gens:
                m = mat_canon(K, mat_mul3(K, a, g))
                if m not in seen:
                    seen.add(m)
                    if len(seen) > cap:
                        raise ToolLimitError(
                            "CAP_EXCEEDED",
                            f"group closure exceeded the cap {cap}",
                            cap=cap,
                        )
                    nxt.append(m)
        frontier = nxt
    return sorted(seen)


def pgl_scan(K, terms, points, cap):
    """All canonical invertible matrices mapping every listed point into the
    zero set of the term list.  A necessary-condition prefilter: callers must
    certify survivors symbolically."""
    q = K.q
    total = sum(q**k for k in range(9))
    if total > cap:
        raise ToolLimitError(
            "SCAN_TOO_LARGE",
            f"projective matrix scan of size {total} exceeds the cap {cap}",
            size=total,
            cap=cap,
        )
    terms = list(terms)
    zero_set = set(find_projective_zeros(K, terms))
    mul = K.mul
    add = K.add

    def value(pt):
        x, y, z = pt
        acc = 0
        for c, e0, e1, e2 in terms:
            acc = add(acc, mul(mul(mul(c, K.pow(x, e0)), K.pow(y, e1)), K.pow(z, e2)))
        return acc

    out = []
    for lead in range(9):
        base = [0] * lead + [1]
        rest = 8 - lead
        idx = [0] * rest
        while True:
            A = tuple(base + idx)
            if _det3(K, A):
                ok = True
                for pt in points:
                    img = mat_apply(K, A, pt)
                    if value(img):
                        ok = False
                        break
                if ok:
                    out.append(A)
            k = rest - 1
            while k >= 0:
                idx[k] += 1
                if idx[k] < q:
                    break
                idx[k] = 0
                k -= 1
            if k < 0:
                break
    return out
