"""Exact dense linear algebra over a finite field.

Matrices are lists of rows of coefficient codes; all routines take the field
descriptor explicitly and never leave the exact setting.
"""

from __future__ import annotations

from ..errors import InputError


def mat_mul(K, A, B):
    n, m = len(A), len(B[0])
    inner = len(B)
    out = []
    for i in range(n):
        row = []
        Ai = A[i]
        for j in range(m):
            s = 0
            for k in range(inner):
                s = K.add(s, K.mul(Ai[k], B[k][j]))
            row.append(s)
        out.append(row)
    return out


def mat_vec(K, A, v):
    out = []
    for row in A:
        s = 0
        for a, x in zip(row, v):
            s = K.add(s, K.mul(a, x))
        out.append(s)
    return out


def rref(K, A):
    """Reduced row echelon form; returns (rows, pivot column list)."""
    M = [list(row) for row in A]
    rows = len(M)
    cols = len(M[0]) if rows else 0
    pivots = []
    r = 0
    for c in range(cols):
        pivot = None
        for i in range(r, rows):
            if M[i][c]:
                pivot = i
                break
        if pivot is None:
            continue
        M[r], M[pivot] = M[pivot], M[r]
        inv = K.inv(M[r][c])
        M[r] = [K.mul(inv, x) for x in M[r]]
        for i in range(rows):
            if i != r and M[i][c]:
                f = M[i][c]
                M[i] = [K.sub(x, K.mul(f, y)) for x, y in zip(M[i], M[r])]
        pivots.append(c)
        r += 1
        if r == rows:
            break
    return M, pivots


def rank(K, A):
    return len(rref(K, A)[1])


def nullspace(K, A):
    """Basis of the right kernel, one vector per free column.

    Each basis vector has a 1 in its free column, making the basis canonical
    for a fixed matrix."""
    if not A:
        return []
    M, pivots = rref(K, A)
    cols = len(A[0])
    free = [c for c in range(cols) if c not in pivots]
    basis = []
    for fc in free:
        v = [0] * cols
        v[fc] = 1
        for r, pc in enumerate(pivots):
            v[pc] = K.neg(M[r][fc])
        basis.append(v)
    return basis


def solve(K, A, b):
    """One solution of A x = b, or None when inconsistent."""
    if not A:
        return None
    cols = len(A[0])
    aug = [list(row) + [bv] for row, bv in zip(A, b)]
    M, pivots = rref(K, aug)
    for r in range(len(M)):
        if all(x == 0 for x in M[r][:cols]) and M[r][cols]:
            return None
    x = [0] * cols
    for r, pc in enumerate(pivots):
        if pc == cols:
            return None
        x[pc] = M[r][cols]
    return x


def mat_inv(K, A):
    n = len(A)
    aug = [list(row) + [1 if i == j else 0 for j in range(n)] for i, row in enumerate(A)]
    M, pivots = rref(K, aug)
    if pivots[:n] != list(range(n)):
        raise InputError("SINGULAR_MATRIX", "matrix is not invertible")
    return [row[n:] for row in M[:n]]


def det3(K, A):
    (a, b, c), (d, e, f), (g, h, i) = A
    t1 = K.mul(a, K.sub(K.mul(e, i), K.mul(f, h)))
    t2 = K.mul(b, K.sub(K.mul(d, i), K.mul(f, g)))
    t3 = K.mul(c, K.sub(K.mul(d, h), K.mul(e, g)))
    return K.add(K.sub(t1, t2), t3)
