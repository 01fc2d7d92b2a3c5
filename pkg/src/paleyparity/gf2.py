"""Dense GF(2) linear algebra on int bitsets.

A row is a Python int whose bit ``j`` holds column ``j``; binary vectors use
the same encoding (bit ``i`` is coordinate ``i``).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .errors import NoParticularSolution


def to_mask(bits: Iterable[int] | int) -> int:
    """Accept a bitmask or a 0/1 sequence and return the bitmask."""
    if isinstance(bits, (int, np.integer)):
        return int(bits)
    mask = 0
    for i, b in enumerate(bits):
        if int(b) & 1:
            mask |= 1 << i
    return mask


def to_bits(mask: int, length: int) -> list[int]:
    return [(mask >> i) & 1 for i in range(length)]


def set_mask(indices: Iterable[int]) -> int:
    mask = 0
    for i in indices:
        mask |= 1 << int(i)
    return mask


def mask_members(mask: int) -> list[int]:
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return out


@dataclass(frozen=True)
class Gf2Matrix:
    nrows: int
    ncols: int
    rows: tuple[int, ...]

    def __post_init__(self):
        if self.nrows < 0 or self.ncols < 0 or len(self.rows) != self.nrows:
            raise ValueError("bad matrix dimensions")
        limit = 1 << self.ncols
        if any(r < 0 or r >= limit for r in self.rows):
            raise ValueError("row has bits beyond ncols")

    @classmethod
    def from_rows(cls, rows: Sequence[int], ncols: int) -> "Gf2Matrix":
        return cls(len(rows), ncols, tuple(int(r) for r in rows))

    @classmethod
    def from_array(cls, arr) -> "Gf2Matrix":
        arr = np.asarray(arr) & 1
        nrows, ncols = arr.shape
        return cls(nrows, ncols, tuple(to_mask(row) for row in arr.tolist()))

    @classmethod
    def identity(cls, n: int) -> "Gf2Matrix":
        return cls(n, n, tuple(1 << i for i in range(n)))

    @classmethod
    def zeros(cls, nrows: int, ncols: int) -> "Gf2Matrix":
        return cls(nrows, ncols, (0,) * nrows)

    def __getitem__(self, ij: tuple[int, int]) -> int:
        i, j = ij
        if not (0 <= i < self.nrows and 0 <= j < self.ncols):
            raise IndexError(ij)
        return (self.rows[i] >> j) & 1

    def to_array(self) -> np.ndarray:
        return np.array([to_bits(r, self.ncols) for r in self.rows], dtype=np.uint8).reshape(
            self.nrows, self.ncols
        )

    def transpose(self) -> "Gf2Matrix":
        cols = [0] * self.ncols
        for i, r in enumerate(self.rows):
            for j in mask_members(r):
                cols[j] |= 1 << i
        return Gf2Matrix(self.ncols, self.nrows, tuple(cols))

    @property
    def T(self) -> "Gf2Matrix":
        return self.transpose()

    def __add__(self, other: "Gf2Matrix") -> "Gf2Matrix":
        if (self.nrows, self.ncols) != (other.nrows, other.ncols):
            raise ValueError("shape mismatch")
        return Gf2Matrix(self.nrows, self.ncols, tuple(a ^ b for a, b in zip(self.rows, other.rows)))

    def mul_vec(self, x: Iterable[int] | int) -> int:
        """M @ x over GF(2), returned as a bitmask of length nrows."""
        x = to_mask(x)
        out = 0
        for i, r in enumerate(self.rows):
            if (r & x).bit_count() & 1:
                out |= 1 << i
        return out

    def row_sums(self) -> list[int]:
        return [r.bit_count() for r in self.rows]


@dataclass(frozen=True)
class AffineSolutionSpace:
    """Solutions of M x = b: ``particular`` + span(``kernel_basis``).

    ``particular`` is None when the system is inconsistent.
    """

    ncols: int
    rank: int
    particular: int | None
    kernel_basis: tuple[int, ...] = field(default_factory=tuple)

    @property
    def dimension(self) -> int:
        return len(self.kernel_basis)

    @property
    def consistent(self) -> bool:
        return self.particular is not None

    def count(self) -> int:
        return 1 << self.dimension if self.consistent else 0


def _echelon(rows: list[int], ncols: int) -> tuple[list[int], list[int]]:
    """Gauss-Jordan in place over the first ncols columns.

    Returns (reduced rows, pivot columns); row i of the result has pivot
    pivot_cols[i] for i < rank, remaining rows are zero on those columns.
    """
    pivots = []
    r = 0
    nrows = len(rows)
    for col in range(ncols):
        if r == nrows:
            break
        bit = 1 << col
        for i in range(r, nrows):
            if rows[i] & bit:
                break
        else:
            continue
        rows[r], rows[i] = rows[i], rows[r]
        piv = rows[r]
        for k in range(nrows):
            if k != r and rows[k] & bit:
                rows[k] ^= piv
        pivots.append(col)
        r += 1
    return rows, pivots


def rank(M: Gf2Matrix) -> int:
    """Rank over GF(2). M is not modified."""
    _, pivots = _echelon(list(M.rows), M.ncols)
    return len(pivots)


def solve_affine(M: Gf2Matrix, b: Iterable[int] | int) -> AffineSolutionSpace:
    b = to_mask(b)
    if b >> M.nrows:
        raise ValueError("right-hand side longer than row count")
    n = M.ncols
    aug_bit = 1 << n
    rows = [r | (aug_bit if (b >> i) & 1 else 0) for i, r in enumerate(M.rows)]
    rows, pivots = _echelon(rows, n)
    rk = len(pivots)
    low = aug_bit - 1
    if any(r == aug_bit for r in rows[rk:]):
        particular = None
    else:
        particular = 0
        for i, col in enumerate(pivots):
            if rows[i] & aug_bit:
                particular |= 1 << col
    pivot_set = set(pivots)
    basis = []
    for f in range(n):
        if f in pivot_set:
            continue
        v = 1 << f
        fbit = 1 << f
        for i, col in enumerate(pivots):
            if rows[i] & low & fbit:
                v |= 1 << col
        basis.append(v)
    return AffineSolutionSpace(n, rk, particular, tuple(basis))


def iter_solutions(space: AffineSolutionSpace):
    """All solutions in Gray-code order over the kernel coordinates."""
    if space.particular is None:
        raise NoParticularSolution("system is inconsistent")
    x = space.particular
    yield x
    basis = space.kernel_basis
    for i in range(1, 1 << len(basis)):
        x ^= basis[(i & -i).bit_length() - 1]
        yield x


def enumerate_solutions(space: AffineSolutionSpace, cap: int) -> tuple[list[int], bool]:
    """First min(2^dim, cap) solutions and whether the cap truncated the list."""
    if cap < 1:
        raise ValueError("cap must be positive")
    if space.particular is None:
        raise NoParticularSolution("system is inconsistent")
    total = 1 << space.dimension
    out = []
    for x in iter_solutions(space):
        if len(out) == cap:
            break
        out.append(x)
    return out, total > cap
