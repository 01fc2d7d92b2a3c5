"""Even-even partitions, odd-parity covers and co-even counting.

An odd-parity cover of a graph H is a vertex set Q with |N[v] & Q| odd for
every vertex v, i.e. a solution of (A + I) x = 1 over GF(2). Covers of the
odd-extension of G are in bijection with the even-even partitions of G.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Iterable

import numpy as np

from ._pool import chunk_map
from .errors import InvalidCover, NotCoEven, TooLarge
from .gf2 import AffineSolutionSpace, Gf2Matrix, enumerate_solutions, mask_members, solve_affine
from .paley import PaleyStructure, as_mask

BRUTE_FORCE_MAX_N = 24


@dataclass(frozen=True)
class SimpleGraph:
    """Undirected simple graph on vertices 0..n-1 stored as neighbour bitmasks."""

    n: int
    rows: tuple[int, ...]

    def __post_init__(self):
        if len(self.rows) != self.n:
            raise ValueError("need one row per vertex")
        for v, r in enumerate(self.rows):
            if r >> self.n or (r >> v) & 1:
                raise ValueError(f"row {v} has loops or out-of-range bits")
            for w in mask_members(r):
                if not (self.rows[w] >> v) & 1:
                    raise ValueError(f"adjacency not symmetric at ({v}, {w})")

    directed = False

    @property
    def in_rows(self) -> tuple[int, ...]:
        return self.rows

    @property
    def full(self) -> int:
        return (1 << self.n) - 1

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]]) -> "SimpleGraph":
        rows = [0] * n
        for u, v in edges:
            if u == v:
                raise ValueError("loops are not allowed")
            rows[u] |= 1 << v
            rows[v] |= 1 << u
        return cls(n, tuple(rows))

    @classmethod
    def from_paley(cls, P: PaleyStructure) -> "SimpleGraph":
        if P.directed:
            raise ValueError(f"{P!r} is a tournament, not a graph")
        return cls(P.n, tuple(P.rows))

    @classmethod
    def random(cls, n: int, p: float = 0.5, seed: int | None = None) -> "SimpleGraph":
        rng = random.Random(seed)
        edges = [(u, v) for u in range(n) for v in range(u + 1, n) if rng.random() < p]
        return cls.from_edges(n, edges)

    @classmethod
    def edgeless(cls, n: int) -> "SimpleGraph":
        return cls(n, (0,) * n)

    def degree(self, v: int) -> int:
        return self.rows[v].bit_count()

    def complement(self) -> "SimpleGraph":
        full = self.full
        return SimpleGraph(self.n, tuple(full ^ r ^ (1 << v) for v, r in enumerate(self.rows)))

    def induced(self, vertices: Iterable[int]) -> "SimpleGraph":
        """Induced subgraph relabelled 0..k-1 in the order given."""
        vs = list(vertices)
        pos = {v: i for i, v in enumerate(vs)}
        rows = []
        for v in vs:
            rows.append(sum(1 << pos[w] for w in mask_members(self.rows[v]) if w in pos))
        return SimpleGraph(len(vs), tuple(rows))

    def adjacency(self) -> Gf2Matrix:
        return Gf2Matrix.from_rows(self.rows, self.n)


@dataclass(frozen=True)
class EvenEvenPartition:
    n: int
    part1: int
    part2: int

    def parts(self) -> tuple[list[int], list[int]]:
        return mask_members(self.part1), mask_members(self.part2)


def is_even(rows, mask: int) -> bool:
    m = mask
    while m:
        low = m & -m
        if (rows[low.bit_length() - 1] & mask).bit_count() & 1:
            return False
        m ^= low
    return True


def is_coeven(G: SimpleGraph, V1: Iterable[int] | int) -> bool:
    V1 = as_mask(V1)
    return is_even(G.rows, V1) and is_even(G.rows, G.full ^ V1)


def odd_extension(G: SimpleGraph) -> tuple[SimpleGraph, dict[int, int]]:
    """Attach a pendant v' to every even-degree v.

    Pendants are numbered n, n+1, ... in the order of their even-degree
    anchors, so for an all-even G the adjacency is [[A, I], [I, 0]].
    """
    pendant = {}
    for v in range(G.n):
        if G.degree(v) % 2 == 0:
            pendant[v] = G.n + len(pendant)
    rows = list(G.rows) + [0] * len(pendant)
    for v, vp in pendant.items():
        rows[v] |= 1 << vp
        rows[vp] = 1 << v
    return SimpleGraph(G.n + len(pendant), tuple(rows)), pendant


def closed_neighbourhood_matrix(H: SimpleGraph) -> Gf2Matrix:
    """A + I for the graph H."""
    return Gf2Matrix.from_rows([r | (1 << v) for v, r in enumerate(H.rows)], H.n)


def is_odd_parity_cover(H: SimpleGraph, Q: Iterable[int] | int) -> bool:
    Q = as_mask(Q)
    return closed_neighbourhood_matrix(H).mul_vec(Q) == H.full


def odd_parity_covers(G: SimpleGraph) -> AffineSolutionSpace:
    """Solution space of (Abar + I) x = 1 over the vertices of the odd-extension."""
    H, _ = odd_extension(G)
    return solve_affine(closed_neighbourhood_matrix(H), H.full)


def list_covers(G: SimpleGraph, cap: int) -> tuple[list[int], bool]:
    return enumerate_solutions(odd_parity_covers(G), cap)


def cover_to_partition(Q: Iterable[int] | int, G: SimpleGraph) -> EvenEvenPartition:
    Q = as_mask(Q)
    H, _ = odd_extension(G)
    if Q >> H.n or not is_odd_parity_cover(H, Q):
        raise InvalidCover("not an odd-parity cover of the odd-extension")
    part1 = Q & G.full
    part2 = G.full ^ part1
    if not (is_even(G.rows, part1) and is_even(G.rows, part2)):
        raise AssertionError("cover did not yield an even-even partition")
    return EvenEvenPartition(G.n, part1, part2)


def partition_to_cover(V1: Iterable[int] | int, G: SimpleGraph) -> int:
    V1 = as_mask(V1)
    if V1 >> G.n or not is_coeven(G, V1):
        raise NotCoEven("V1 and its complement must both induce even subgraphs")
    _, pendant = odd_extension(G)
    Q = V1
    for v, vp in pendant.items():
        if not (V1 >> v) & 1:
            Q |= 1 << vp
    return Q


def gallai_partition(G: SimpleGraph) -> EvenEvenPartition:
    """The partition coming from the particular solution of the cover system."""
    space = odd_parity_covers(G)
    return cover_to_partition(space.particular, G)


def coeven_dimension(G: SimpleGraph) -> int:
    return odd_parity_covers(G).dimension


def count_coeven(G: SimpleGraph) -> int:
    """Number of vertex sets V1 with G[V1] and G[V - V1] both even."""
    return odd_parity_covers(G).count()


def coeven_sets(G: SimpleGraph, cap: int) -> tuple[list[int], bool]:
    """Co-even vertex sets (masks over V(G)), at most ``cap`` of them."""
    covers, truncated = list_covers(G, cap)
    return [Q & G.full for Q in covers], truncated


def _brute_chunk(args) -> int:
    rows, degpar, n, start, stop = args
    masks = np.arange(start, stop, dtype=np.uint32)
    bad = np.zeros(masks.shape, dtype=np.uint8)
    for v in range(n):
        in_s = ((masks >> np.uint32(v)) & np.uint32(1)).astype(np.uint8)
        par = (np.bitwise_count(masks & np.uint32(rows[v])) & 1).astype(np.uint8)
        bad |= in_s & par
        bad |= (in_s ^ 1) & (par ^ degpar[v])
    return int(np.count_nonzero(bad == 0))


def brute_force_coeven(G: SimpleGraph, workers: int = 1) -> int:
    """Count co-even vertex sets by testing all 2^n subsets."""
    n = G.n
    if n > BRUTE_FORCE_MAX_N:
        raise TooLarge(f"brute force limited to n <= {BRUTE_FORCE_MAX_N}")
    degpar = [G.degree(v) & 1 for v in range(n)]
    total = 1 << n
    step = 1 << 18
    chunks = [(G.rows, degpar, n, s, min(s + step, total)) for s in range(0, total, step)]
    return sum(chunk_map(_brute_chunk, chunks, workers))
