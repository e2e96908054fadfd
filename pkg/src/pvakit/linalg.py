"""Dense linear algebra over a CoeffField (Gaussian elimination, exact)."""

from __future__ import annotations


class SingularMatrix(ValueError):
    pass


def identity(field, n):
    return [[field.one if i == j else field.zero for j in range(n)] for i in range(n)]


def matmul(A, B, field):
    p = len(B[0]) if B else 0
    out = []
    for row in A:
        new = []
        for j in range(p):
            acc = field.zero
            for a, Brow in zip(row, B):
                if a and Brow[j]:
                    acc = acc + a * Brow[j]
            new.append(acc)
        out.append(new)
    return out


def rref(M, field):
    """Reduced row echelon form; returns (R, pivot columns)."""
    R = [list(r) for r in M]
    rows = len(R)
    cols = len(R[0]) if R else 0
    pivots = []
    r = 0
    for c in range(cols):
        p = next((k for k in range(r, rows) if R[k][c]), None)
        if p is None:
            continue
        R[r], R[p] = R[p], R[r]
        inv = field.one / R[r][c]
        R[r] = [x * inv for x in R[r]]
        for k in range(rows):
            if k != r and R[k][c]:
                f = R[k][c]
                R[k] = [a - f * b for a, b in zip(R[k], R[r])]
        pivots.append(c)
        r += 1
        if r == rows:
            break
    return R, pivots


def invert(M, field):
    n = len(M)
    aug = [list(M[i]) + identity(field, n)[i] for i in range(n)]
    R, piv = rref(aug, field)
    if piv[:n] != list(range(n)):
        raise SingularMatrix("matrix is singular")
    return [row[n:] for row in R]


def solve(M, b, field):
    """Solve M x = b for one solution (free variables zero), or raise."""
    n = len(M[0])
    aug = [list(M[i]) + [b[i]] for i in range(len(M))]
    R, piv = rref(aug, field)
    if n in piv:
        raise SingularMatrix("system is inconsistent")
    x = [field.zero] * n
    for r, c in enumerate(piv):
        x[c] = R[r][n]
    return x


def nullspace(M, field, ncols=None):
    if not M:
        n = ncols or 0
        return [[field.one if i == j else field.zero for i in range(n)] for j in range(n)]
    n = len(M[0])
    R, piv = rref(M, field)
    free = [c for c in range(n) if c not in piv]
    basis = []
    for f in free:
        v = [field.zero] * n
        v[f] = field.one
        for r, c in enumerate(piv):
            v[c] = -R[r][f]
        basis.append(v)
    return basis


def column_space(M, field):
    """A basis of the span of the columns of M."""
    if not M:
        return []
    T = [list(col) for col in zip(*M)]
    R, piv = rref(T, field)
    return [R[k] for k in range(len(piv))]


def rank(M, field):
    if not M:
        return 0
    return len(rref(M, field)[1])
