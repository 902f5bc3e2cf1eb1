"""Dense linear algebra over GF(2) with rows packed into Python ints.

Bit ``j`` of a packed row is column ``j``. Pivots are always taken from the
lowest eligible row index so reduced forms are reproducible.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .exceptions import SingularMatrixError


@dataclass(frozen=True)
class Gf2Matrix:
    rows: tuple[int, ...]
    n_cols: int

    def __post_init__(self):
        if self.n_cols < 1 or not self.rows:
            raise ValueError("GF(2) matrix needs at least one row and one column")
        limit = 1 << self.n_cols
        if any(r < 0 or r >= limit for r in self.rows):
            raise ValueError(f"row bits exceed {self.n_cols} columns")

    @classmethod
    def from_array(cls, a) -> "Gf2Matrix":
        arr = np.asarray(a)
        if arr.ndim != 2:
            raise ValueError("expected a 2-D array")
        if not np.isin(arr, (0, 1)).all():
            raise ValueError("entries must be 0 or 1")
        rows = tuple(sum(1 << j for j, v in enumerate(row) if v) for row in arr.tolist())
        return cls(rows, arr.shape[1])

    @classmethod
    def identity(cls, n: int) -> "Gf2Matrix":
        return cls(tuple(1 << i for i in range(n)), n)

    @property
    def n_rows(self) -> int:
        return len(self.rows)

    @property
    def shape(self) -> tuple[int, int]:
        return self.n_rows, self.n_cols

    def to_array(self) -> np.ndarray:
        return np.array(
            [[(r >> j) & 1 for j in range(self.n_cols)] for r in self.rows], dtype=np.uint8
        )

    def columns(self, cols: Sequence[int]) -> "Gf2Matrix":
        """Submatrix made of the listed columns, in that order."""
        rows = tuple(
            sum(((r >> c) & 1) << new for new, c in enumerate(cols)) for r in self.rows
        )
        return Gf2Matrix(rows, len(cols))

    def matvec(self, x: Sequence[int]) -> tuple[int, ...]:
        if len(x) != self.n_cols:
            raise ValueError(f"vector length {len(x)} != {self.n_cols} columns")
        xm = _pack(x)
        return tuple((r & xm).bit_count() & 1 for r in self.rows)


def _pack(bits: Sequence[int]) -> int:
    word = 0
    for j, b in enumerate(bits):
        if b not in (0, 1):
            raise ValueError("vector entries must be 0 or 1")
        if b:
            word |= 1 << j
    return word


def rank(a: Gf2Matrix) -> int:
    work = list(a.rows)
    r = 0
    for col in range(a.n_cols):
        bit = 1 << col
        pivot = next((i for i in range(r, len(work)) if work[i] & bit), None)
        if pivot is None:
            continue
        work[r], work[pivot] = work[pivot], work[r]
        for i in range(len(work)):
            if i != r and work[i] & bit:
                work[i] ^= work[r]
        r += 1
        if r == len(work):
            break
    return r


def solve(a: Gf2Matrix, b: Sequence[int]) -> tuple[int, ...]:
    """The unique ``x`` with ``a x = b``; ``a`` must be square and invertible."""
    n = a.n_rows
    if a.n_cols != n:
        raise ValueError(f"solve needs a square matrix, got {a.n_rows}x{a.n_cols}")
    if len(b) != n:
        raise ValueError(f"right-hand side has length {len(b)}, expected {n}")
    # augmented column lives at bit n
    work = [row | (bv << n) for row, bv in zip(a.rows, _bits(b))]
    for col in range(n):
        bit = 1 << col
        pivot = next((i for i in range(col, n) if work[i] & bit), None)
        if pivot is None:
            raise SingularMatrixError("matrix is singular over GF(2)")
        work[col], work[pivot] = work[pivot], work[col]
        for i in range(n):
            if i != col and work[i] & bit:
                work[i] ^= work[col]
    return tuple((row >> n) & 1 for row in work)


def inverse(a: Gf2Matrix) -> Gf2Matrix:
    n = a.n_rows
    if a.n_cols != n:
        raise ValueError("only square matrices have inverses")
    cols = [solve(a, tuple(int(i == j) for i in range(n))) for j in range(n)]
    rows = tuple(sum(cols[j][i] << j for j in range(n)) for i in range(n))
    return Gf2Matrix(rows, n)


def select_independent_columns(a: Gf2Matrix) -> list[int]:
    """Greedy left-to-right column basis: keep a column when it raises the rank."""
    chosen: list[int] = []
    current = 0
    for j in range(a.n_cols):
        trial = chosen + [j]
        if rank(a.columns(trial)) > current:
            chosen = trial
            current += 1
            if current == a.n_rows:
                break
    return chosen


def _bits(b: Sequence[int]) -> list[int]:
    out = [int(v) for v in b]
    if any(v not in (0, 1) for v in out):
        raise ValueError("vector entries must be 0 or 1")
    return out
