"""Partial inversion of real matrices and partial closure of binary ones.

Both operators act on one index at a time and extend to index sets by
applying the single-index form in sequence.  Index arguments are 1-based
row/column numbers of the matrix they act on.
"""

from __future__ import annotations

from typing import Iterable

import numpy as np

from .binary import BinaryMatrix

__all__ = [
    "PIVOT_TOL",
    "SingularPivotError",
    "inv_k",
    "inv_set",
    "zer_k",
    "zer_set",
    "transitive_closure",
    "format_real",
]

PIVOT_TOL = 1e-12


class SingularPivotError(ZeroDivisionError):
    """A pivot met during partial inversion is numerically zero."""

    def __init__(self, k: int, value: float):
        self.k = k
        self.value = value
        super().__init__(f"pivot at index {k} is {value!r} (|pivot| < {PIVOT_TOL})")


def _as_real(M) -> np.ndarray:
    M = np.asarray(M, dtype=float)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {M.shape}")
    if not np.all(np.isfinite(M)):
        raise ValueError("matrix has non-finite entries")
    return M


def _check_index(k: int, n: int) -> int:
    if not 1 <= k <= n:
        raise IndexError(f"index {k} outside 1..{n}")
    return k - 1


def _pivot(M: np.ndarray, k: int) -> np.ndarray:
    # k is 0-based here; M is not modified
    p = M[k, k]
    if not abs(p) >= PIVOT_TOL:
        raise SingularPivotError(k + 1, float(p))
    col = M[:, k].copy()
    row = M[k, :].copy()
    N = M - np.outer(col, row) / p
    N[:, k] = col / p
    N[k, :] = -row / p
    N[k, k] = 1.0 / p
    if not np.all(np.isfinite(N)):
        raise ValueError("partial inversion produced non-finite entries")
    return N


def inv_k(M, k: int) -> np.ndarray:
    """Partially invert ``M`` on the single index ``k`` (1-based).

    Raises
    ------
    SingularPivotError
        If ``|M[k, k]| < PIVOT_TOL``.
    """
    M = _as_real(M)
    return _pivot(M, _check_index(k, M.shape[0]))


def inv_set(M, a: Iterable[int]) -> np.ndarray:
    """Partially invert ``M`` on every index of ``a``.

    Indices are processed in ascending order.  The operator is commutative,
    so any order gives the same matrix up to rounding; fixing the order keeps
    results reproducible bit for bit.  ``inv_set(M, range(1, n + 1))`` is the
    ordinary inverse.
    """
    M = _as_real(M)
    n = M.shape[0]
    for k in sorted(set(a)):
        M = _pivot(M, _check_index(k, n))
    return M


def _close(rows: list[int], k: int) -> None:
    # in place on a row list; k is 0-based
    rk = rows[k] | (1 << k)
    bit = 1 << k
    for i, r in enumerate(rows):
        if i != k and r & bit:
            rows[i] = r | rk
    rows[k] = rk


def zer_k(Mb: BinaryMatrix, k: int) -> BinaryMatrix:
    """Partially close ``Mb`` on the single index ``k`` (1-based).

    Entry ``(i, j)`` becomes 1 when ``Mb[i, k]`` and ``Mb[k, j]`` are both 1,
    i.e. every path ``i <- k <- j`` gets an edge ``i <- j``.
    """
    n = Mb.n
    rows = list(Mb.rows)
    _close(rows, _check_index(k, n))
    return BinaryMatrix(rows, n)


def zer_set(Mb: BinaryMatrix, a: Iterable[int]) -> BinaryMatrix:
    """Partially close ``Mb`` on every index of ``a`` (closes all a-line paths)."""
    n = Mb.n
    rows = list(Mb.rows)
    for k in sorted(set(a)):
        _close(rows, _check_index(k, n))
    return BinaryMatrix(rows, n)


def transitive_closure(Ab: BinaryMatrix) -> BinaryMatrix:
    """Edge matrix of the transitive closure: partial closure over all indices."""
    return zer_set(Ab, range(1, Ab.n + 1))


def format_real(M, decimals: int = 6) -> str:
    """Fixed-width text rendering of a real matrix."""
    M = np.asarray(M, dtype=float)
    if M.size == 0:
        return ""
    cells = [[f"{round(float(x), decimals) + 0.0:.{decimals}f}" for x in row] for row in M]
    width = max(len(c) for row in cells for c in row)
    return "\n".join(" ".join(c.rjust(width) for c in row) for row in cells)
