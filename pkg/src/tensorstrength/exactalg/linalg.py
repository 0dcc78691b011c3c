"""Exact dense linear algebra over a ``Field`` (Gaussian elimination)."""

from __future__ import annotations

from typing import Sequence

from .fields import Field
from .polynomial import DimensionMismatchError


def _copy(field: Field, A) -> list:
    return [[field.normalize(x) for x in row] for row in A]


def rref(field: Field, A: Sequence[Sequence]):
    """Reduced row echelon form; returns (rows, pivot columns)."""
    M = _copy(field, A)
    rows = len(M)
    cols = len(M[0]) if rows else 0
    pivots = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        pivot = next((i for i in range(r, rows) if not field.is_zero(M[i][c])), None)
        if pivot is None:
            continue
        M[r], M[pivot] = M[pivot], M[r]
        inv = field.inv(M[r][c])
        M[r] = [field.mul(x, inv) for x in M[r]]
        for i in range(rows):
            if i != r and not field.is_zero(M[i][c]):
                f = M[i][c]
                M[i] = [field.sub(a, field.mul(f, b)) for a, b in zip(M[i], M[r])]
        pivots.append(c)
        r += 1
    return M, pivots


def rank(field: Field, A) -> int:
    if not A:
        return 0
    return len(rref(field, A)[1])


def solve(field: Field, A: Sequence[Sequence], b: Sequence):
    """One solution x of A x = b, or ``None`` if the system is inconsistent."""
    if len(A) != len(b):
        raise DimensionMismatchError("right-hand side has wrong length")
    ncols = len(A[0]) if A else 0
    aug = [list(row) + [bi] for row, bi in zip(A, b)]
    if not aug:
        return []
    M, pivots = rref(field, aug)
    if ncols in pivots:
        return None
    x = [field.zero] * ncols
    for r, c in enumerate(pivots):
        x[c] = M[r][ncols]
    return x


def nullspace(field: Field, A: Sequence[Sequence], ncols: int | None = None) -> list:
    """Basis of {x : A x = 0}."""
    if ncols is None:
        ncols = len(A[0]) if A else 0
    if not A:
        return [[field.one if i == j else field.zero for i in range(ncols)] for j in range(ncols)]
    M, pivots = rref(field, A)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        v = [field.zero] * ncols
        v[f] = field.one
        for r, c in enumerate(pivots):
            v[c] = field.neg(M[r][f])
        basis.append(v)
    return basis


def det(field: Field, A: Sequence[Sequence]):
    n = len(A)
    if any(len(row) != n for row in A):
        raise DimensionMismatchError("determinant of a non-square matrix")
    M = _copy(field, A)
    result = field.one
    for c in range(n):
        pivot = next((i for i in range(c, n) if not field.is_zero(M[i][c])), None)
        if pivot is None:
            return field.zero
        if pivot != c:
            M[c], M[pivot] = M[pivot], M[c]
            result = field.neg(result)
        result = field.mul(result, M[c][c])
        inv = field.inv(M[c][c])
        for i in range(c + 1, n):
            if not field.is_zero(M[i][c]):
                f = field.mul(M[i][c], inv)
                M[i] = [field.sub(a, field.mul(f, b)) for a, b in zip(M[i], M[c])]
    return result


def inverse(field: Field, A: Sequence[Sequence]):
    n = len(A)
    aug = [list(row) + [field.one if i == j else field.zero for j in range(n)] for i, row in enumerate(A)]
    M, pivots = rref(field, aug)
    if pivots[:n] != list(range(n)):
        raise ZeroDivisionError("matrix is singular")
    return [row[n:] for row in M]


def matmul(field: Field, A, B):
    if A and len(A[0]) != len(B):
        raise DimensionMismatchError("inner dimensions differ")
    ncols = len(B[0]) if B else 0
    out = []
    for row in A:
        new = []
        for j in range(ncols):
            s = field.zero
            for k, a in enumerate(row):
                if not field.is_zero(a):
                    s = field.add(s, field.mul(a, B[k][j]))
            new.append(s)
        out.append(new)
    return out


def transpose(A):
    return [list(col) for col in zip(*A)] if A else []


def identity(field: Field, n: int):
    return [[field.one if i == j else field.zero for j in range(n)] for i in range(n)]


def symbolic_det(M):
    """Laplace expansion for small matrices with ring entries (e.g. polynomials)."""
    n = len(M)
    if n == 1:
        return M[0][0]
    if n == 2:
        return M[0][0] * M[1][1] - M[0][1] * M[1][0]
    total = None
    for j in range(n):
        if not M[0][j]:
            continue
        minor = [row[:j] + row[j + 1:] for row in M[1:]]
        term = M[0][j] * symbolic_det(minor)
        if j % 2:
            term = -term
        total = term if total is None else total + term
    if total is None:
        return M[0][0] - M[0][0]
    return total
