"""Binary matrices stored as rows of bit vectors.

Entry ``(i, j)`` of a :class:`BinaryMatrix` is bit ``j`` of ``rows[i]``.
Positions are 0-based, as for numpy arrays; node labels (1-based) are
handled one level up, by :class:`LabeledBinary` and the graph code.
"""

from __future__ import annotations

from typing import Iterable, Sequence

import numpy as np

__all__ = ["BinaryMatrix", "LabeledBinary", "bits", "mask"]


def bits(word: int) -> Iterable[int]:
    """Yield the positions of the set bits of ``word`` in ascending order."""
    while word:
        low = word & -word
        yield low.bit_length() - 1
        word ^= low


def mask(positions: Iterable[int]) -> int:
    out = 0
    for p in positions:
        out |= 1 << p
    return out


class BinaryMatrix:
    """Immutable matrix over {0, 1} with boolean (or, and) arithmetic."""

    __slots__ = ("rows", "shape")

    def __init__(self, rows: Iterable[int], ncols: int):
        rows = tuple(int(r) for r in rows)
        limit = 1 << ncols
        for r in rows:
            if r < 0 or r >= limit:
                raise ValueError(f"row bits exceed {ncols} columns")
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "shape", (len(rows), ncols))

    def __setattr__(self, name, value):
        raise AttributeError("BinaryMatrix is immutable")

    # construction -----------------------------------------------------

    @classmethod
    def identity(cls, n: int) -> "BinaryMatrix":
        return cls((1 << i for i in range(n)), n)

    @classmethod
    def zeros(cls, m: int, n: int) -> "BinaryMatrix":
        return cls((0,) * m, n)

    @classmethod
    def bmat(cls, blocks: Sequence[Sequence["BinaryMatrix"]]) -> "BinaryMatrix":
        """Assemble a matrix from a 2-d grid of blocks, like ``numpy.block``."""
        rows: list[int] = []
        ncols = None
        for brow in blocks:
            height = brow[0].shape[0]
            acc = [0] * height
            shift = 0
            for blk in brow:
                if blk.shape[0] != height:
                    raise ValueError("blocks in one row must have equal heights")
                for i, r in enumerate(blk.rows):
                    acc[i] |= r << shift
                shift += blk.shape[1]
            if ncols is not None and shift != ncols:
                raise ValueError("block rows must have equal total widths")
            ncols = shift
            rows.extend(acc)
        return cls(rows, ncols or 0)

    @classmethod
    def from_array(cls, arr) -> "BinaryMatrix":
        """Build from a 2-d array; nonzero entries become 1 (the ``In[.]`` map)."""
        arr = np.asarray(arr)
        if arr.ndim != 2:
            raise ValueError("expected a 2-d array")
        nz = arr != 0
        return cls((mask(np.flatnonzero(row)) for row in nz), arr.shape[1])

    def to_array(self, dtype=np.int8) -> np.ndarray:
        m, n = self.shape
        out = np.zeros((m, n), dtype=dtype)
        for i, r in enumerate(self.rows):
            for j in bits(r):
                out[i, j] = 1
        return out

    # element access ---------------------------------------------------

    def __getitem__(self, ij: tuple[int, int]) -> int:
        i, j = ij
        return (self.rows[i] >> j) & 1

    @property
    def n(self) -> int:
        m, n = self.shape
        if m != n:
            raise ValueError(f"matrix is not square: {self.shape}")
        return n

    def row_positions(self, i: int) -> list[int]:
        return list(bits(self.rows[i]))

    def nonzero(self) -> list[tuple[int, int]]:
        return [(i, j) for i, r in enumerate(self.rows) for j in bits(r)]

    def nnz(self) -> int:
        return sum(bin(r).count("1") for r in self.rows)

    def is_zero(self) -> bool:
        return not any(self.rows)

    # algebra ----------------------------------------------------------

    @property
    def T(self) -> "BinaryMatrix":
        m, n = self.shape
        cols = [0] * n
        for i, r in enumerate(self.rows):
            bit = 1 << i
            for j in bits(r):
                cols[j] |= bit
        return BinaryMatrix(cols, m)

    def __matmul__(self, other: "BinaryMatrix") -> "BinaryMatrix":
        if self.shape[1] != other.shape[0]:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        orows = other.rows
        out = []
        for r in self.rows:
            acc = 0
            for k in bits(r):
                acc |= orows[k]
            out.append(acc)
        return BinaryMatrix(out, other.shape[1])

    def __or__(self, other: "BinaryMatrix") -> "BinaryMatrix":
        if self.shape != other.shape:
            raise ValueError(f"shape mismatch {self.shape} | {other.shape}")
        return BinaryMatrix((x | y for x, y in zip(self.rows, other.rows)), self.shape[1])

    def __and__(self, other: "BinaryMatrix") -> "BinaryMatrix":
        if self.shape != other.shape:
            raise ValueError(f"shape mismatch {self.shape} & {other.shape}")
        return BinaryMatrix((x & y for x, y in zip(self.rows, other.rows)), self.shape[1])

    def __le__(self, other: "BinaryMatrix") -> bool:
        """Entrywise ``<=``."""
        if self.shape != other.shape:
            raise ValueError(f"shape mismatch {self.shape} <= {other.shape}")
        return all(x & ~y == 0 for x, y in zip(self.rows, other.rows))

    def __ge__(self, other: "BinaryMatrix") -> bool:
        return other <= self

    def __eq__(self, other) -> bool:
        if not isinstance(other, BinaryMatrix):
            return NotImplemented
        return self.shape == other.shape and self.rows == other.rows

    def __hash__(self) -> int:
        return hash((self.shape, self.rows))

    def is_symmetric(self) -> bool:
        return self.shape[0] == self.shape[1] and self == self.T

    def take(self, rows: Sequence[int], cols: Sequence[int]) -> "BinaryMatrix":
        """Submatrix with the given row and column positions, in that order."""
        src = self.rows
        out = []
        for i in rows:
            r = src[i]
            acc = 0
            for new, j in enumerate(cols):
                if (r >> j) & 1:
                    acc |= 1 << new
            out.append(acc)
        return BinaryMatrix(out, len(cols))

    def permute(self, order: Sequence[int]) -> "BinaryMatrix":
        """Symmetric permutation: row and column ``k`` of the result is ``order[k]``."""
        return self.take(order, order)

    def with_unit_diagonal(self) -> "BinaryMatrix":
        return BinaryMatrix((r | (1 << i) for i, r in enumerate(self.rows)), self.shape[1])

    # display ----------------------------------------------------------

    def __str__(self) -> str:
        n = self.shape[1]
        return "\n".join(
            " ".join("1" if (r >> j) & 1 else "0" for j in range(n)) for r in self.rows
        )

    def __repr__(self) -> str:
        return f"BinaryMatrix(shape={self.shape}, rows={list(self.rows)})"


class LabeledBinary:
    """A binary matrix whose rows and columns are addressed by node labels."""

    __slots__ = ("matrix", "row_labels", "col_labels", "_rpos", "_cpos")

    def __init__(self, matrix: BinaryMatrix, row_labels: Sequence[int], col_labels: Sequence[int]):
        if matrix.shape != (len(row_labels), len(col_labels)):
            raise ValueError("label counts do not match matrix shape")
        self.matrix = matrix
        self.row_labels = tuple(row_labels)
        self.col_labels = tuple(col_labels)
        self._rpos = {v: k for k, v in enumerate(self.row_labels)}
        self._cpos = {v: k for k, v in enumerate(self.col_labels)}

    def __getitem__(self, ij: tuple[int, int]) -> int:
        i, j = ij
        return self.matrix[self._rpos[i], self._cpos[j]]

    def block(self, rows: Iterable[int], cols: Iterable[int]) -> "LabeledBinary":
        rows, cols = sorted(rows), sorted(cols)
        sub = self.matrix.take([self._rpos[i] for i in rows], [self._cpos[j] for j in cols])
        return LabeledBinary(sub, rows, cols)

    def is_zero(self) -> bool:
        return self.matrix.is_zero()

    def edges(self) -> list[tuple[int, int]]:
        """Off-diagonal ones as ``(row_label, col_label)`` pairs."""
        return [
            (self.row_labels[i], self.col_labels[j])
            for i, j in self.matrix.nonzero()
            if self.row_labels[i] != self.col_labels[j]
        ]

    def __eq__(self, other) -> bool:
        if not isinstance(other, LabeledBinary):
            return NotImplemented
        return (
            self.matrix == other.matrix
            and self.row_labels == other.row_labels
            and self.col_labels == other.col_labels
        )

    def __hash__(self) -> int:
        return hash((self.matrix, self.row_labels, self.col_labels))

    def to_text(self) -> str:
        width = max(len(str(v)) for v in self.col_labels + self.row_labels) if self.col_labels else 1
        head = " " * width + " | " + " ".join(str(c).rjust(width) for c in self.col_labels)
        lines = [head, "-" * len(head)]
        for i, lab in enumerate(self.row_labels):
            cells = " ".join(str(self.matrix[i, j]).rjust(width) for j in range(len(self.col_labels)))
            lines.append(str(lab).rjust(width) + " | " + cells)
        return "\n".join(lines)

    def __repr__(self) -> str:
        return f"LabeledBinary(rows={self.row_labels}, cols={self.col_labels})"
