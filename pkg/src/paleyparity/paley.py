"""Paley graphs P_q (q = 1 mod 4) and Paley tournaments PT_q (q = 3 mod 4).

Vertices are field elements in canonical order. ``rows[x]`` is the bitmask of
all y with x - y a nonzero square, i.e. the out-neighbourhood of x.
"""

from __future__ import annotations

from enum import Enum
from functools import cached_property
from typing import Iterable

import numpy as np

from .ffield import FiniteField, field_of_order
from .gf2 import Gf2Matrix, set_mask


class ParityClass(str, Enum):
    EVEN = "even"
    ODD = "odd"
    MIXED = "mixed"


def as_mask(S: Iterable[int] | int) -> int:
    """Vertex sets are accepted either as bitmasks or as iterables of indices."""
    if isinstance(S, (int, np.integer)):
        return int(S)
    return set_mask(S)


def classify_rows(rows, S: Iterable[int] | int) -> ParityClass:
    """Parity class of the sub(di)graph induced on S, using out-degrees."""
    mask = as_mask(S)
    if mask == 0:
        return ParityClass.EVEN
    odd = 0
    m = mask
    while m:
        low = m & -m
        v = low.bit_length() - 1
        if (rows[v] & mask).bit_count() & 1:
            odd |= low
        m ^= low
    if odd == 0:
        return ParityClass.EVEN
    if odd == mask:
        return ParityClass.ODD
    return ParityClass.MIXED


def _pack_row(bits: np.ndarray) -> int:
    return int.from_bytes(np.packbits(bits.astype(np.uint8), bitorder="little").tobytes(), "little")


class PaleyStructure:
    """P_q or PT_q on the elements of ``field``.

    Bit rows are built lazily; sampling code only needs the field's
    quadratic character.
    """

    def __init__(self, field: FiniteField):
        self.field = field
        self.q = self.n = field.q
        self.kind = "graph" if field.q % 4 == 1 else "tournament"

    @property
    def directed(self) -> bool:
        return self.kind == "tournament"

    def __repr__(self) -> str:
        name = "P" if self.kind == "graph" else "PT"
        return f"{name}_{self.q}"

    @cached_property
    def rows(self) -> tuple[int, ...]:
        F = self.field
        ys = np.arange(F.q, dtype=np.int64)
        out = []
        for x in range(F.q):
            diff = F.sub_arr(np.int64(x), ys)
            out.append(_pack_row(F.eta_arr(diff) == 1))
        return tuple(out)

    @cached_property
    def in_rows(self) -> tuple[int, ...]:
        """in_rows[y]: bitmask of all x with an arc x -> y."""
        if not self.directed:
            return self.rows
        full = (1 << self.q) - 1
        return tuple(full ^ r ^ (1 << y) for y, r in enumerate(self.rows))

    def has_arc(self, x: int, y: int) -> bool:
        return self.field.eta(self.field.sub(x, y)) == 1

    def arc_matrix(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        """Vectorized arc test a -> b on index arrays."""
        return self.field.eta_arr(self.field.sub_arr(a, b)) == 1

    def out_degree(self, x: int) -> int:
        return self.rows[x].bit_count()


def build_paley(field: FiniteField | int) -> PaleyStructure:
    if not isinstance(field, FiniteField):
        field = field_of_order(field)
    return PaleyStructure(field)


def classify_induced(P, S: Iterable[int] | int) -> ParityClass:
    return classify_rows(P.rows, S)


def cut_arc_count(P, U: Iterable[int] | int, W: Iterable[int] | int) -> int:
    """Number of pairs (u, w), u in U, w in W, with an edge (graph) or arc u -> w."""
    U, W = as_mask(U), as_mask(W)
    total = 0
    while U:
        low = U & -U
        total += (P.rows[low.bit_length() - 1] & W).bit_count()
        U ^= low
    return total


def adjacency_gf2(P) -> Gf2Matrix:
    return Gf2Matrix.from_rows(P.rows, P.n)


def edge_list(P) -> str:
    """One "u v" pair per line; graphs list each edge once with u < v."""
    lines = []
    for u, row in enumerate(P.rows):
        for v in range(P.n):
            if (row >> v) & 1 and (P.directed or u < v):
                lines.append(f"{u} {v}")
    return "\n".join(lines) + ("\n" if lines else "")


__all__ = [
    "ParityClass",
    "PaleyStructure",
    "adjacency_gf2",
    "as_mask",
    "build_paley",
    "classify_induced",
    "classify_rows",
    "cut_arc_count",
    "edge_list",
]
