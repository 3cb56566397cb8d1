"""Batched matrix arithmetic over GF(p) on numpy int64 stacks.

Used by the brute-force enumerations, where thousands of small matrices are
processed at once. Shapes follow numpy's batched ``matmul`` convention:
``(..., rows, cols)``.
"""

from __future__ import annotations

import numpy as np

from .errors import BudgetExceeded, InputError


def check_prime_size(p: int) -> None:
    if p >= 2**31:
        raise InputError("batched enumeration supports p < 2**31 only")


def matmul(A: np.ndarray, B: np.ndarray, p: int) -> np.ndarray:
    return np.matmul(A, B) % p


def all_vectors(q: int, length: int, budget: int) -> np.ndarray:
    """Every vector in GF(q)^length, in lexicographic order, as an (N, length) array."""
    total = q**length
    if total > budget:
        raise BudgetExceeded(f"scan of GF({q})^{length}", total, budget)
    if length == 0:
        return np.zeros((1, 0), dtype=np.int64)
    grid = np.indices((q,) * length, dtype=np.int64)
    return grid.reshape(length, -1).T.copy()


def gauss_jordan(M: np.ndarray, p: int):
    """Batched Gauss-Jordan on square matrices.

    Returns ``(invertible_mask, inverses)``; inverse rows for singular inputs
    are garbage and must be masked out by the caller.
    """
    M = np.asarray(M, dtype=np.int64) % p
    if M.ndim != 3 or M.shape[1] != M.shape[2]:
        raise InputError("gauss_jordan expects a stack of square matrices")
    N, n, _ = M.shape
    aug = np.concatenate([M, np.broadcast_to(np.eye(n, dtype=np.int64), (N, n, n))], axis=2).copy()
    ok = np.ones(N, dtype=bool)
    idx = np.arange(N)
    inv_table = np.zeros(p, dtype=np.int64)
    for a in range(1, p if p < 1 << 20 else 1):
        inv_table[a] = pow(a, -1, p)
    for c in range(n):
        cand = aug[:, c:, c] != 0
        has = cand.any(axis=1)
        ok &= has
        piv = c + np.argmax(cand, axis=1)
        rows_c = aug[idx, c].copy()
        aug[idx, c] = aug[idx, piv]
        aug[idx, piv] = rows_c
        pv = aug[:, c, c]
        if p < 1 << 20:
            scale = inv_table[pv]
        else:
            scale = np.array([pow(int(x), -1, p) if x else 0 for x in pv], dtype=np.int64)
        aug[:, c] = (aug[:, c] * scale[:, None]) % p
        factors = aug[:, :, c].copy()
        factors[:, c] = 0
        aug = (aug - factors[:, :, None] * aug[:, c][:, None, :]) % p
    return ok, aug[:, :, n:]


def general_linear_group(n: int, q: int, budget: int = 10**6) -> tuple[np.ndarray, np.ndarray]:
    """All of GL_n(F_q) by exhaustive scan with an invertibility filter.

    Returns ``(elements, inverses)`` as (|G|, n, n) arrays in lexicographic
    order of the flattened entries.
    """
    check_prime_size(q)
    if n == 0:
        e = np.zeros((1, 0, 0), dtype=np.int64)
        return e, e.copy()
    cand = all_vectors(q, n * n, budget).reshape(-1, n, n)
    ok, inv = gauss_jordan(cand, q)
    return cand[ok], inv[ok]


def gl_order(n: int, q: int) -> int:
    out = 1
    for i in range(n):
        out *= q**n - q**i
    return out
