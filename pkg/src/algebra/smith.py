"""
Smith normal form over the integers.

Entries are Python ints held in object-dtype numpy arrays, so intermediate
values never overflow. Pivots are chosen by minimal absolute value.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class SmithForm:
    """U @ M @ V == D with U, V unimodular and D diagonal, d_1 | d_2 | ..."""

    D: np.ndarray
    U: np.ndarray | None
    V: np.ndarray | None

    @property
    def invariant_factors(self) -> list[int]:
        """Nonzero diagonal entries, in divisibility order."""
        n = min(self.D.shape)
        return [int(self.D[i, i]) for i in range(n) if self.D[i, i] != 0]

    @property
    def rank(self) -> int:
        return len(self.invariant_factors)

    @property
    def torsion(self) -> list[int]:
        """Invariant factors >= 2."""
        return [d for d in self.invariant_factors if d > 1]


def as_integer_array(M: object) -> np.ndarray:
    """Copy any integer matrix-like into a 2-D object array of Python ints."""
    arr = np.array(M, dtype=object)
    if arr.size == 0 and arr.ndim != 2:
        arr = arr.reshape((0, 0))
    if arr.ndim != 2:
        raise ValueError(f"expected a 2-D matrix, got shape {arr.shape}")
    out = np.empty(arr.shape, dtype=object)
    for idx, value in np.ndenumerate(arr):
        out[idx] = int(value)
    return out


def _identity(n: int) -> np.ndarray:
    eye = np.zeros((n, n), dtype=object)
    for i in range(n):
        eye[i, i] = 1
    return eye


def _swap_rows(A: np.ndarray, i: int, j: int) -> None:
    if i != j:
        A[[i, j], :] = A[[j, i], :]


def _swap_cols(A: np.ndarray, i: int, j: int) -> None:
    if i != j:
        A[:, [i, j]] = A[:, [j, i]]


def _min_abs_position(A: np.ndarray, t: int) -> tuple[int, int] | None:
    """Position of a nonzero entry of least absolute value in A[t:, t:]."""
    best: tuple[int, int] | None = None
    best_value = 0
    rows, cols = A.shape
    for i in range(t, rows):
        for j in range(t, cols):
            v = abs(A[i, j])
            if v and (best is None or v < best_value):
                best, best_value = (i, j), v
                if v == 1:
                    return best
    return best


def smith_normal_form(M: object, with_transforms: bool = True) -> SmithForm:
    """
    Smith normal form of an integer matrix.

    Args:
        M: Integer matrix (anything numpy can turn into a 2-D array)
        with_transforms: Also accumulate U and V

    Returns:
        SmithForm with U @ M @ V == D; U and V are None when not requested
    """
    A = as_integer_array(M)
    rows, cols = A.shape
    U = _identity(rows) if with_transforms else None
    V = _identity(cols) if with_transforms else None

    t = 0
    while t < min(rows, cols):
        pos = _min_abs_position(A, t)
        if pos is None:
            break
        _swap_rows(A, t, pos[0])
        _swap_cols(A, t, pos[1])
        if U is not None:
            _swap_rows(U, t, pos[0])
            _swap_cols(V, t, pos[1])

        while True:
            pivot = A[t, t]
            clean = True
            for i in range(t + 1, rows):
                q = A[i, t] // pivot
                if q:
                    A[i, :] -= q * A[t, :]
                    if U is not None:
                        U[i, :] -= q * U[t, :]
                clean = clean and A[i, t] == 0
            for j in range(t + 1, cols):
                q = A[t, j] // pivot
                if q:
                    A[:, j] -= q * A[:, t]
                    if V is not None:
                        V[:, j] -= q * V[:, t]
                clean = clean and A[t, j] == 0

            if not clean:
                # bring the smallest remainder of row/column t into the pivot
                best_i = min(
                    (i for i in range(t + 1, rows) if A[i, t]),
                    key=lambda i: abs(A[i, t]),
                    default=None,
                )
                best_j = min(
                    (j for j in range(t + 1, cols) if A[t, j]),
                    key=lambda j: abs(A[t, j]),
                    default=None,
                )
                use_row = best_i is not None and (
                    best_j is None or abs(A[best_i, t]) <= abs(A[t, best_j])
                )
                if use_row:
                    _swap_rows(A, t, best_i)
                    if U is not None:
                        _swap_rows(U, t, best_i)
                else:
                    _swap_cols(A, t, best_j)
                    if V is not None:
                        _swap_cols(V, t, best_j)
                continue

            # divisibility: fold an offending row into row t and repeat
            offender = next(
                (
                    i
                    for i in range(t + 1, rows)
                    for j in range(t + 1, cols)
                    if A[i, j] % pivot
                ),
                None,
            )
            if offender is None:
                break
            A[t, :] += A[offender, :]
            if U is not None:
                U[t, :] += U[offender, :]

        if A[t, t] < 0:
            A[t, :] = -A[t, :]
            if U is not None:
                U[t, :] = -U[t, :]
        t += 1

    logger.debug("smith normal form %dx%d: rank %d", rows, cols, t)
    return SmithForm(A, U, V)
