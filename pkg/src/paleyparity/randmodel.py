"""Even induced subgraphs of random graphs G(n, p) and random digraphs D(n, p).

In D(n, p) every ordered pair (x, y), x != y, carries the arc x -> y
independently with probability p, so both directions may be present.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

import numpy as np

from ._pool import chunk_map
from .census import DEFAULT_BUDGET, block_rng, partial_fisher_yates
from .errors import BudgetExceeded, DomainError

TRIAL_BLOCK = 1000
EXHAUSTIVE_SUBSETS = 10**6
SUBSETS_PER_GRAPH = 1000
_CELLS = 1 << 24


def as_probability(p) -> Fraction:
    """Exact probability from a Fraction, int pair, float or "num/den" string."""
    try:
        frac = Fraction(p) if not isinstance(p, tuple) else Fraction(*p)
    except (ValueError, ZeroDivisionError, TypeError) as exc:
        raise DomainError(f"bad probability {p!r}") from exc
    if not 0 < frac < 1:
        raise DomainError("p must lie strictly between 0 and 1")
    return frac


def _check(n: int, r: int) -> None:
    if not 1 <= r <= n:
        raise DomainError("need 1 <= r <= n")


def lemma_a1_sum(p, r: int) -> Fraction:
    """sum_k C(r, k) (1 - 2p)^{k (r - k)}, exactly."""
    s = 1 - 2 * as_probability(p)
    return sum(math.comb(r, k) * s ** (k * (r - k)) for k in range(r + 1))


def expected_graph(n: int, p, r: int) -> Fraction:
    """Expected number of even induced subgraphs of order r in G(n, p)."""
    _check(n, r)
    return Fraction(math.comb(n, r), 2**r) * lemma_a1_sum(p, r)


def expected_digraph(n: int, p, r: int) -> Fraction:
    """Expected number of even induced subdigraphs of order r in D(n, p)."""
    _check(n, r)
    s = 1 - 2 * as_probability(p)
    return Fraction(math.comb(n, r), 2**r) * (1 + s ** (r - 1)) ** r


@dataclass
class RandomModelReport:
    n: int
    r: int
    p: Fraction
    kind: str
    closed_form: Fraction
    mc_mean: float
    mc_stderr: float
    trials: int
    seed: int
    method: str

    @property
    def z(self) -> float:
        if self.mc_stderr == 0:
            return 0.0 if self.mc_mean == self.closed_form else math.inf
        return (self.mc_mean - float(self.closed_form)) / self.mc_stderr

    def to_json(self) -> dict:
        return {
            "kind": self.kind,
            "n": self.n,
            "r": self.r,
            "p": f"{self.p.numerator}/{self.p.denominator}",
            "closed_form": f"{self.closed_form.numerator}/{self.closed_form.denominator}",
            "closed_form_decimal": float(self.closed_form),
            "mc_mean": self.mc_mean,
            "mc_stderr": self.mc_stderr,
            "z": self.z,
            "trials": self.trials,
            "seed": self.seed,
            "method": self.method,
        }


def _random_adjacency(rng: np.random.Generator, count: int, n: int, p: float, kind: str) -> np.ndarray:
    A = rng.random((count, n, n)) < p
    if kind == "graph":
        A = np.triu(A, 1)
        A = A | A.transpose(0, 2, 1)
    else:
        A[:, np.arange(n), np.arange(n)] = False
    return A.astype(np.uint8)


def _even_counts(A: np.ndarray, S: np.ndarray) -> np.ndarray:
    """Per graph, how many rows of S (vertex subsets) induce an even sub(di)graph.

    S is either (m, r), shared by all graphs, or (graphs, m, r).
    """
    g, n, _ = A.shape
    if n <= 64:
        weights = np.left_shift(np.uint64(1), np.arange(n, dtype=np.uint64))
        rows = (A.astype(np.uint64) * weights).sum(axis=2, dtype=np.uint64)
        masks = np.bitwise_or.reduce(weights[S], axis=-1)
        if S.ndim == 2:
            sel = rows[:, S]
            odd = np.bitwise_count(sel & masks[None, :, None]) & 1
        else:
            sel = rows[np.arange(g)[:, None, None], S]
            odd = np.bitwise_count(sel & masks[:, :, None]) & 1
        return np.count_nonzero(~odd.any(axis=2), axis=1)
    if S.ndim == 2:
        S = np.broadcast_to(S, (g,) + S.shape)
    gi = np.arange(g)[:, None, None, None]
    sub = A[gi, S[:, :, :, None], S[:, :, None, :]]
    odd = (sub.sum(axis=3, dtype=np.int64) & 1).any(axis=2)
    return np.count_nonzero(~odd, axis=1)


def _mc_block(args) -> tuple[int, int, int]:
    n, r, p, kind, seed, block, count, subsets = args
    rng = block_rng(seed, block)
    total = sq = 0
    if subsets is None:
        S = np.array(list(combinations(range(n), r)), dtype=np.int64).reshape(-1, r)
        per = max(1, _CELLS // (len(S) * r * (r if n > 64 else 1) + n * n))
    else:
        per = max(1, _CELLS // (subsets * r * (r if n > 64 else 1) + n * n))
    done = 0
    while done < count:
        g = min(per, count - done)
        A = _random_adjacency(rng, g, n, p, kind)
        if subsets is None:
            c = _even_counts(A, S)
        else:
            c = _even_counts(A, partial_fisher_yates(rng, n, r, g * subsets).reshape(g, subsets, r))
        total += int(c.sum())
        sq += int((c.astype(np.int64) ** 2).sum())
        done += g
    return count, total, sq


def monte_carlo(
    n: int,
    p,
    r: int,
    trials: int,
    seed: int = 0,
    kind: str = "graph",
    workers: int = 1,
    budget: int = DEFAULT_BUDGET,
    subsets: int = SUBSETS_PER_GRAPH,
) -> RandomModelReport:
    """Sample ``trials`` random (di)graphs and average the even-subset count.

    When C(n, r) is at most EXHAUSTIVE_SUBSETS every r-subset of every sample
    is tested; otherwise ``subsets`` uniform r-subsets per sample give an
    unbiased per-graph estimate, and the reported standard error is that of
    the combined two-level estimator.
    """
    if kind not in ("graph", "digraph"):
        raise DomainError(f"kind must be graph or digraph, not {kind!r}")
    if trials < 1:
        raise DomainError("trials must be positive")
    _check(n, r)
    p = as_probability(p)
    C = math.comb(n, r)
    exact = expected_graph(n, p, r) if kind == "graph" else expected_digraph(n, p, r)
    if C <= EXHAUSTIVE_SUBSETS:
        per_trial, method, m = C, "exhaustive", None
    else:
        per_trial, method, m = subsets, "sampled", subsets
    if per_trial * trials > budget:
        raise BudgetExceeded(f"{per_trial} subsets x {trials} trials exceed budget {budget}")
    blocks = [
        (n, r, float(p), kind, seed, b, min(TRIAL_BLOCK, trials - b * TRIAL_BLOCK), m)
        for b in range(-(-trials // TRIAL_BLOCK))
    ]
    parts = chunk_map(_mc_block, blocks, workers)
    total = sum(t for _, t, _ in parts)
    sq = sum(s for _, _, s in parts)
    scale = Fraction(C, m) if m else Fraction(1)
    mean = scale * Fraction(total, trials)
    if trials > 1:
        var = scale**2 * Fraction(sq * trials - total * total, trials * trials * (trials - 1))
        stderr = math.sqrt(var)
    else:
        stderr = 0.0
    return RandomModelReport(n, r, p, kind, exact, float(mean), stderr, trials, seed, method)
