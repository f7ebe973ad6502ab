"""Row reduction over the oracle fields.

Prime fields use numpy int64 arrays (entries stay below p < 2^31, so single
products fit); other fields fall back to Python lists with the field's own
operations.
"""
from __future__ import annotations

import numpy as np

from .scalars import PrimeField


def matrix(F, rows: int, cols: int):
    if isinstance(F, PrimeField):
        return np.zeros((rows, cols), dtype=np.int64)
    return [[F.zero] * cols for _ in range(rows)]


def _rref_prime(M: np.ndarray, p: int) -> tuple[np.ndarray, list[int]]:
    M = M.copy() % p
    rows, cols = M.shape
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.nonzero(M[r:, c])[0]
        if nz.size == 0:
            continue
        k = r + int(nz[0])
        if k != r:
            M[[r, k]] = M[[k, r]]
        M[r] = M[r] * pow(int(M[r, c]), p - 2, p) % p
        col = M[:, c].copy()
        col[r] = 0
        nzr = np.nonzero(col)[0]
        if nzr.size:
            M[nzr] = (M[nzr] - np.outer(col[nzr], M[r])) % p
        pivots.append(c)
        r += 1
    return M, pivots


def _rref_generic(F, M) -> tuple[list, list[int]]:
    M = [list(row) for row in M]
    rows = len(M)
    cols = len(M[0]) if rows else 0
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        k = next((i for i in range(r, rows) if not F.is_zero(M[i][c])), None)
        if k is None:
            continue
        M[r], M[k] = M[k], M[r]
        inv = F.inv(M[r][c])
        M[r] = [F.mul(x, inv) for x in M[r]]
        for i in range(rows):
            if i != r and not F.is_zero(M[i][c]):
                f = M[i][c]
                M[i] = [F.sub(x, F.mul(f, y)) for x, y in zip(M[i], M[r])]
        pivots.append(c)
        r += 1
    return M, pivots


def rref(F, M):
    if isinstance(F, PrimeField):
        return _rref_prime(np.asarray(M, dtype=np.int64), F.p)
    return _rref_generic(F, M)


def shape(M) -> tuple[int, int]:
    if isinstance(M, np.ndarray):
        return M.shape
    return len(M), (len(M[0]) if M else 0)


def rank(F, M) -> int:
    r, c = shape(M)
    if r == 0 or c == 0:
        return 0
    return len(rref(F, M)[1])


def nullspace(F, M, cols: int | None = None) -> list:
    """Basis of ``{x : M x = 0}`` as a list of vectors."""
    r, c = shape(M)
    if cols is not None:
        c = cols
    if r == 0:
        basis = []
        for k in range(c):
            v = [F.zero] * c
            v[k] = F.one
            basis.append(np.array(v, dtype=np.int64) if isinstance(F, PrimeField) else v)
        return basis
    R, piv = rref(F, M)
    free = [k for k in range(c) if k not in set(piv)]
    basis = []
    for f in free:
        v = [F.zero] * c
        v[f] = F.one
        for row, pc in enumerate(piv):
            v[pc] = F.neg(R[row][f] if not isinstance(R, np.ndarray) else int(R[row, f]))
        basis.append(np.array(v, dtype=np.int64) if isinstance(F, PrimeField) else v)
    return basis


def solve(F, M, b):
    """Some ``x`` with ``M x = b``, or ``None``."""
    r, c = shape(M)
    if r == 0:
        return [F.zero] * c
    if isinstance(F, PrimeField):
        aug = np.concatenate([np.asarray(M, dtype=np.int64), np.asarray(b, dtype=np.int64).reshape(-1, 1)], axis=1)
    else:
        aug = [list(row) + [x] for row, x in zip(M, b)]
    R, piv = rref(F, aug)
    if c in piv:
        return None
    x = [F.zero] * c
    for row, pc in enumerate(piv):
        x[pc] = int(R[row, c]) if isinstance(R, np.ndarray) else R[row][c]
    return x


def is_invertible(F, M) -> bool:
    r, c = shape(M)
    return r == c and rank(F, M) == r
