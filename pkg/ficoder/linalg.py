"""
Dense linear algebra over F_q on numpy integer arrays.
"""

from __future__ import annotations

from typing import List, Tuple

import numpy as np

from .field import all_words


def as_matrix(matrix, q: int) -> np.ndarray:
    m = np.array(matrix, dtype=np.int64)
    if m.ndim == 1:
        m = m.reshape(1, -1)
    return m % q


def row_reduce(matrix, q: int) -> Tuple[np.ndarray, List[int]]:
    """
    Reduced row echelon form mod q.

    Returns:
        Tuple of (reduced matrix, pivot column indices)
    """
    m = as_matrix(matrix, q)
    rows, cols = m.shape
    pivots: List[int] = []
    r = 0
    for c in range(cols):
        if r >= rows:
            break
        nonzero = np.flatnonzero(m[r:, c])
        if nonzero.size == 0:
            continue
        p = r + int(nonzero[0])
        if p != r:
            m[[r, p]] = m[[p, r]]
        m[r] = (m[r] * pow(int(m[r, c]), q - 2, q)) % q
        for i in range(rows):
            if i != r and m[i, c]:
                m[i] = (m[i] - m[i, c] * m[r]) % q
        pivots.append(c)
        r += 1
    return m, pivots


def matrix_rank(matrix, q: int) -> int:
    return len(row_reduce(matrix, q)[1])


def null_space(matrix, q: int) -> np.ndarray:
    """
    Basis (as rows) of {v : matrix @ v = 0} over F_q.

    A matrix with zero rows has the whole space as null space.
    """
    m = np.array(matrix, dtype=np.int64)
    if m.ndim == 1:
        m = m.reshape(1, -1)
    cols = m.shape[1]
    if m.shape[0] == 0:
        return np.eye(cols, dtype=np.int64)
    reduced, pivots = row_reduce(m, q)
    free = [c for c in range(cols) if c not in pivots]
    basis = np.zeros((len(free), cols), dtype=np.int64)
    for k, f in enumerate(free):
        basis[k, f] = 1
        for i, p in enumerate(pivots):
            basis[k, p] = (-reduced[i, f]) % q
    return basis


def span(basis, q: int, length: int) -> np.ndarray:
    """Every vector of the row span, one per row (q^dim rows)."""
    b = np.array(basis, dtype=np.int64).reshape(-1, length)
    if b.shape[0] == 0:
        return np.zeros((1, length), dtype=np.int64)
    coefficients = np.asarray(all_words(q, b.shape[0]), dtype=np.int64)
    return (coefficients @ b) % q


def matmul(a, b, q: int) -> np.ndarray:
    return (np.asarray(a, dtype=np.int64) @ np.asarray(b, dtype=np.int64)) % q
