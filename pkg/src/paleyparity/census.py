"""Parity censuses of induced sub(di)graphs, character sums, and the
giant-even-subgraph lower bound.

A *host* is anything with ``n``, ``rows`` (out-neighbour bitmasks),
``in_rows`` and ``directed``: a :class:`PaleyStructure` or a
:class:`SimpleGraph`.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Sequence

import numpy as np

from ._pool import chunk_map
from .errors import BudgetExceeded, DomainError, TooLarge
from .ffield import BUILTIN_MODULI, FiniteField, field_of_order, is_prime
from .paley import PaleyStructure, build_paley
from .parity import SimpleGraph, coeven_sets

DEFAULT_BUDGET = 2 * 10**8
CHARSUM_BUDGET = 10**7
SAMPLE_BLOCK = 1 << 16
THETA_MAX_N = 14


@dataclass
class CensusReport:
    """Counts of even / odd / mixed induced sub(di)graphs of order ``r``.

    Exhaustive mode: exact counts over all C(n, r) subsets.
    Sampled mode: counts among ``samples`` uniform r-subsets, plus fractions
    and standard errors; ``truncated`` marks that not every subset was seen.
    """

    n: int
    kind: str
    r: int
    mode: str
    even: int
    odd: int
    mixed: int
    total: int
    samples: int | None = None
    seed: int | None = None
    truncated: bool = False

    @property
    def fractions(self) -> dict[str, float]:
        return {k: getattr(self, k) / self.total for k in ("even", "odd", "mixed")}

    def stderr(self, which: str = "even") -> float:
        f = getattr(self, which) / self.total
        return math.sqrt(f * (1 - f) / self.total)

    def to_json(self) -> dict:
        out = {
            "q": self.n,
            "kind": self.kind,
            "r": self.r,
            "mode": self.mode,
            "even": str(self.even),
            "odd": str(self.odd),
            "mixed": str(self.mixed),
            "total": str(self.total),
            "truncated": self.truncated,
        }
        if self.mode == "sampled":
            subsets = math.comb(self.n, self.r)
            out["samples"] = self.samples
            out["seed"] = self.seed
            for k, f in self.fractions.items():
                out[f"{k}_fraction"] = f
                out[f"{k}_stderr"] = self.stderr(k)
                out[f"{k}_estimate"] = f * subsets
        return out


# -- exhaustive walk -----------------------------------------------------------

def _walk_chunk(args) -> tuple[list[int], list[int], list[int]]:
    """DFS over subsets whose smallest vertex lies in ``firsts``.

    Keeps P = bitmask of vertices whose out-degree into S is odd; adding v
    flips every in-neighbour of v. S is even iff P & S == 0 and odd iff
    P & S == S.
    """
    in_rows, n, r_min, r_max, firsts = args
    even = [0] * (r_max + 1)
    odd = [0] * (r_max + 1)
    total = [0] * (r_max + 1)
    bits = [1 << v for v in range(n)]

    def rec(start: int, size: int, S: int, P: int) -> None:
        s2 = size + 1
        stop = n - max(0, r_min - s2)
        for v in range(start, stop):
            S2 = S | bits[v]
            P2 = P ^ in_rows[v]
            if s2 >= r_min:
                m = P2 & S2
                total[s2] += 1
                if m == 0:
                    even[s2] += 1
                elif m == S2:
                    odd[s2] += 1
            if s2 < r_max:
                rec(v + 1, s2, S2, P2)

    for v0 in firsts:
        S, P = bits[v0], in_rows[v0]
        if r_min <= 1:
            total[1] += 1
            if P & S == 0:
                even[1] += 1
        if r_max > 1:
            rec(v0 + 1, 1, S, P)
    return even, odd, total


def exhaustive_census(
    host, r_min: int, r_max: int, budget: int = DEFAULT_BUDGET, workers: int = 1
) -> list[CensusReport]:
    n = host.n
    if not 1 <= r_min <= r_max <= n:
        raise DomainError(f"need 1 <= r_min <= r_max <= n, got {r_min}..{r_max}, n={n}")
    steps = sum(math.comb(n, s) for s in range(1, r_max + 1))
    if steps > budget:
        raise BudgetExceeded(f"exhaustive census needs {steps} subset steps > budget {budget}")
    in_rows = tuple(host.in_rows)
    nchunks = min(n, 64)
    chunks = [
        (in_rows, n, r_min, r_max, list(range(c, n, nchunks))) for c in range(nchunks)
    ]
    parts = chunk_map(_walk_chunk, chunks, workers)
    kind = "tournament" if host.directed else "graph"
    reports = []
    for r in range(r_min, r_max + 1):
        even = sum(p[0][r] for p in parts)
        odd = sum(p[1][r] for p in parts)
        total = sum(p[2][r] for p in parts)
        assert total == math.comb(n, r)
        reports.append(CensusReport(n, kind, r, "exhaustive", even, odd, total - even - odd, total))
    return reports


# -- sampling ------------------------------------------------------------------

def block_rng(seed: int, block: int) -> np.random.Generator:
    """Counter-based stream for one block of draws, keyed by (seed, block)."""
    return np.random.Generator(np.random.Philox(np.random.SeedSequence([seed, block])))


def partial_fisher_yates(rng: np.random.Generator, n: int, r: int, count: int) -> np.ndarray:
    """``count`` independent uniform r-subsets of range(n), one per row.

    Row-wise partial Fisher-Yates shuffle of the identity permutation; the
    permutation is stored sparsely as the (position -> value) swaps made.
    """
    chosen = np.empty((count, r), dtype=np.int64)
    keys = np.full((count, r), -1, dtype=np.int64)
    vals = np.zeros((count, r), dtype=np.int64)
    for i in range(r):
        j = rng.integers(i, n, size=count, dtype=np.int64)
        hit_j = keys[:, :i] == j[:, None]
        has_j = hit_j.any(axis=1)
        val_j = np.where(has_j, (hit_j * vals[:, :i]).sum(axis=1), j)
        hit_i = keys[:, :i] == i
        val_i = np.where(hit_i.any(axis=1), (hit_i * vals[:, :i]).sum(axis=1), i)
        chosen[:, i] = val_j
        vals[:, :i] = np.where(hit_j, val_i[:, None], vals[:, :i])
        keys[:, i] = np.where(has_j, -1, j)
        vals[:, i] = val_i
    return chosen


def _arc_tester(host):
    if isinstance(host, PaleyStructure):
        return host.arc_matrix
    adj = np.array(
        [[(row >> v) & 1 for v in range(host.n)] for row in host.rows], dtype=bool
    ).reshape(host.n, host.n)
    return lambda a, b: adj[a, b]


def _sample_block(args) -> tuple[int, int]:
    host, r, seed, block, count = args
    arc = _arc_tester(host)
    S = partial_fisher_yates(block_rng(seed, block), host.n, r, count)
    par = np.zeros((count, r), dtype=np.int64)
    for i in range(r):
        for j in range(r):
            if i != j:
                par[:, i] += arc(S[:, i], S[:, j])
    par &= 1
    nodd = par.sum(axis=1)
    return int(np.count_nonzero(nodd == 0)), int(np.count_nonzero(nodd == r))


def sampled_census(host, r: int, samples: int, seed: int, workers: int = 1) -> CensusReport:
    if not 1 <= r <= host.n:
        raise DomainError(f"need 1 <= r <= n, got r={r}")
    if samples < 1:
        raise DomainError("samples must be positive")
    chunks = []
    for b, start in enumerate(range(0, samples, SAMPLE_BLOCK)):
        chunks.append((host, r, seed, b, min(SAMPLE_BLOCK, samples - start)))
    parts = chunk_map(_sample_block, chunks, workers)
    even = sum(p[0] for p in parts)
    odd = sum(p[1] for p in parts)
    kind = "tournament" if host.directed else "graph"
    return CensusReport(
        host.n, kind, r, "sampled", even, odd, samples - even - odd, samples,
        samples=samples, seed=seed, truncated=True,
    )


def census(
    host,
    r_min: int,
    r_max: int | None = None,
    mode: str = "exhaustive",
    budget: int = DEFAULT_BUDGET,
    samples: int = 10**5,
    seed: int = 0,
    workers: int = 1,
) -> list[CensusReport]:
    r_max = r_min if r_max is None else r_max
    if mode == "exhaustive":
        return exhaustive_census(host, r_min, r_max, budget, workers)
    if mode in ("sample", "sampled"):
        return [sampled_census(host, r, samples, seed, workers) for r in range(r_min, r_max + 1)]
    raise DomainError(f"unknown census mode {mode!r}")


def count_parity_induced(
    host, r: int, mode: str = "exhaustive", budget: int = DEFAULT_BUDGET,
    seed: int = 0, samples: int = 10**5, workers: int = 1,
) -> CensusReport:
    return census(host, r, r, mode, budget, samples, seed, workers)[0]


def even_count_in_range(host, lo: int, hi: int, budget: int = DEFAULT_BUDGET) -> int:
    """Number of even induced sub(di)graphs with order in [lo, hi] (empty set counts at 0)."""
    total = 1 if lo <= 0 else 0
    lo = max(lo, 1)
    if lo <= hi:
        total += sum(rep.even for rep in exhaustive_census(host, lo, hi, budget))
    return total


# -- character sums ------------------------------------------------------------

def f_W(F: FiniteField, W: Sequence[int], x: int) -> int:
    """prod_{w in W} (x - w); the empty product is 1."""
    out = 1
    for w in W:
        out = F.mul(out, F.sub(x, w))
    return out


def character_sum_A(
    F: FiniteField, W: Iterable[int], k: int, budget: int = CHARSUM_BUDGET,
    method: str = "enumerate",
) -> int:
    """Sum over k-subsets U of F \\ W of prod_{u in U} eta(f_W(u)).

    ``method="enumerate"`` walks every U; ``method="generating"`` reads the
    t^k coefficient of prod_u (1 + eta(f_W(u)) t) in closed form.
    """
    W = sorted(set(W))
    Wset = set(W)
    signs = [F.eta(f_W(F, W, u)) for u in F.elements() if u not in Wset]
    m = len(signs)
    if not 0 <= k <= m:
        raise DomainError(f"k must lie in [0, {m}]")
    if method == "generating":
        plus = signs.count(1)
        minus = m - plus
        return sum(
            (-1) ** j * math.comb(plus, k - j) * math.comb(minus, j) for j in range(0, k + 1)
        )
    if method != "enumerate":
        raise DomainError(f"unknown method {method!r}")
    if math.comb(m, k) > budget:
        raise BudgetExceeded(f"C({m}, {k}) terms exceed budget {budget}")
    return sum(math.prod(c) for c in combinations(signs, k))


def reconstruct_Nr(F: FiniteField, r: int, budget: int = CHARSUM_BUDGET, method: str = "enumerate") -> int:
    """Number of even induced sub(di)graphs of order r, from character sums alone.

    N_r = 2^-r sum_k s_k sum_{|W| = r-k} A_k(W), with s_k = (-1)^{k(r-k)} for
    P_q and an extra factor (-1)^{k(k-1)/2} for PT_q.
    """
    q = F.q
    if q > 17 or r > 5:
        raise BudgetExceeded("character-sum reconstruction is limited to q <= 17, r <= 5")
    if not 1 <= r <= q:
        raise DomainError("need 1 <= r <= q")
    directed = q % 4 == 3
    terms = 0
    acc = 0
    for k in range(r + 1):
        sign = (-1) ** (k * (r - k))
        if directed:
            sign *= (-1) ** (k * (k - 1) // 2)
        inner = 0
        for W in combinations(range(q), r - k):
            terms += math.comb(q - (r - k), k)
            if terms > budget:
                raise BudgetExceeded(f"more than {budget} character-sum terms")
            inner += character_sum_A(F, W, k, budget, method)
        acc += sign * inner
    N, rem = divmod(acc, 1 << r)
    assert rem == 0, "character-sum expansion not divisible by 2^r"
    return N


# -- Weil bound ----------------------------------------------------------------

@dataclass
class WeilReport:
    q: int
    roots: list[int]
    power: int
    lhs: int
    bound: float
    ok: bool

    def to_json(self) -> dict:
        return {
            "q": self.q, "roots": self.roots, "power": self.power,
            "lhs": self.lhs, "bound": self.bound, "ok": self.ok,
        }


def weil_check(F: FiniteField, W: Iterable[int], n: int) -> WeilReport:
    """|sum_c eta(f_W(c)^n)| against (|W| - 1) sqrt(q)."""
    W = sorted(set(W))
    if len(W) < 2:
        raise DomainError("need at least two distinct roots")
    if n < 1 or n % 2 == 0:
        raise DomainError("power must be a positive odd integer")
    lhs = abs(sum(F.eta(F.pow(f_W(F, W, c), n)) for c in F.elements()))
    d = len(W)
    ok = lhs * lhs <= (d - 1) ** 2 * F.q
    return WeilReport(F.q, W, n, lhs, (d - 1) * math.sqrt(F.q), ok)


def small_odd_prime_powers(limit: int) -> list[int]:
    out = [q for q in range(3, limit + 1, 2) if is_prime(q)]
    out += [q for q in BUILTIN_MODULI if q <= limit]
    return sorted(out)


def weil_trials(
    trials: int, seed: int, q: int | None = None, deg: int | None = None,
    q_max: int = 101, deg_range: tuple[int, int] = (2, 6), powers: Sequence[int] = (1, 3, 5),
) -> list[WeilReport]:
    """Random Weil-bound cases; fixed q / root count when given."""
    rng = random.Random(seed)
    orders = small_odd_prime_powers(q_max)
    out = []
    for _ in range(trials):
        qq = q if q is not None else rng.choice(orders)
        F = field_of_order(qq)
        d = deg if deg is not None else rng.randint(deg_range[0], min(deg_range[1], qq))
        W = rng.sample(range(qq), d)
        out.append(weil_check(F, W, rng.choice(list(powers))))
    return out


# -- giant even subgraphs ------------------------------------------------------

def binary_entropy(x: float) -> float:
    if not 0 < x < 1:
        raise DomainError("binary entropy needs 0 < x < 1")
    return -x * math.log2(x) - (1 - x) * math.log2(1 - x)


@dataclass
class BoundReport:
    n: int
    theta: int
    half: int
    bound: Fraction
    entropy_rhs: float | None = None

    def to_json(self) -> dict:
        return {
            "n": self.n, "theta": self.theta, "half": self.half,
            "bound": str(self.bound), "bound_float": float(self.bound),
            "entropy_rhs": self.entropy_rhs,
        }


def giant_lower_bound(n: int, theta: int) -> BoundReport:
    """C(n, n - theta) / C(n - ceil(theta/2), n - theta), exactly."""
    if not 1 <= theta <= n:
        raise DomainError("need 1 <= theta <= n")
    half = (theta + 1) // 2
    value = Fraction(math.comb(n, n - theta), math.comb(n - half, n - theta))
    rhs = None
    if theta < n:
        alpha = theta / n
        rhs = 2 ** ((binary_entropy(alpha / 2) - alpha) * n)
    return BoundReport(n, theta, half, value, rhs)


def theta_set(G: SimpleGraph, theta: int, budget: int = DEFAULT_BUDGET) -> set[int]:
    """Primary co-even parts of G[W] over all theta-subsets W (as bitmasks)."""
    n = G.n
    if n > THETA_MAX_N:
        raise TooLarge(f"theta_set is limited to n <= {THETA_MAX_N}")
    if not 1 <= theta <= n:
        raise DomainError("need 1 <= theta <= n")
    if math.comb(n, theta) > budget:
        raise TooLarge("too many theta-subsets for the budget")
    out = set()
    for W in combinations(range(n), theta):
        parts, _ = coeven_sets(G.induced(W), cap=1 << theta)
        for V1 in parts:
            if 2 * V1.bit_count() >= theta:
                out.add(sum(1 << W[i] for i in range(theta) if (V1 >> i) & 1))
    return out


__all__ = [
    "BoundReport",
    "CensusReport",
    "WeilReport",
    "binary_entropy",
    "build_paley",
    "census",
    "character_sum_A",
    "count_parity_induced",
    "even_count_in_range",
    "exhaustive_census",
    "giant_lower_bound",
    "reconstruct_Nr",
    "sampled_census",
    "theta_set",
    "weil_check",
    "weil_trials",
]
