"""MDS self-dual codes from (extended) generalized Reed-Solomon codes.

For an evaluation set S = {a_1..a_n} let D_i = prod_{j != i} (a_i - a_j).
Even n: GRS_{n/2}(a, v) is self-dual for some v iff all eta(D_i) agree.
Odd n: the extended code GRS_{(n+1)/2}(a, v, inf) is self-dual for some v
iff eta(-D_i) = 1 for every i.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from enum import Enum
from itertools import combinations
from typing import Iterable, Sequence

import numpy as np

from ._pool import chunk_map
from .census import DEFAULT_BUDGET, exhaustive_census
from .errors import (
    BudgetExceeded,
    ConstructionFailed,
    DomainError,
    EmptySet,
    Infeasible,
    NonResidue,
    TooLarge,
)
from .ffield import FiniteField, make_field
from .paley import PaleyStructure
from .parity import SimpleGraph, coeven_sets, count_coeven

CODEWORD_BUDGET = 10**7
COLUMN_SUBSET_BUDGET = 10**6
PAIR_SCAN_MAX_Q = 20


class Feasibility(str, Enum):
    EVEN_LENGTH_OK = "even_length_ok"
    ODD_LENGTH_OK = "odd_length_ok"
    INFEASIBLE = "infeasible"


@dataclass(frozen=True)
class EvaluationSet:
    field: FiniteField
    alphas: tuple[int, ...]

    def __post_init__(self):
        alphas = tuple(int(a) for a in self.alphas)
        object.__setattr__(self, "alphas", alphas)
        if not alphas:
            raise EmptySet("evaluation set must be non-empty")
        if len(set(alphas)) != len(alphas):
            raise DomainError("evaluation points must be distinct")
        if any(not 0 <= a < self.field.q for a in alphas):
            raise DomainError("evaluation point outside the field")

    @property
    def n(self) -> int:
        return len(self.alphas)


def delta(S: EvaluationSet, i: int) -> int:
    F, a = S.field, S.alphas
    return F.prod(F.sub(a[i], a[j]) for j in range(S.n) if j != i)


def deltas(S: EvaluationSet) -> list[int]:
    return [delta(S, i) for i in range(S.n)]


def feasibility(S: EvaluationSet) -> Feasibility:
    F = S.field
    ds = deltas(S)
    if S.n % 2 == 0:
        etas = {F.eta(d) for d in ds}
        return Feasibility.EVEN_LENGTH_OK if len(etas) == 1 else Feasibility.INFEASIBLE
    if all(F.eta(F.neg(d)) == 1 for d in ds):
        return Feasibility.ODD_LENGTH_OK
    return Feasibility.INFEASIBLE


@dataclass(frozen=True)
class GrsCode:
    """GRS_k(alphas, v), with the coefficient of x^(k-1) appended when extended."""

    field: FiniteField
    alphas: tuple[int, ...]
    v: tuple[int, ...]
    k: int
    extended: bool = False
    lam: int | None = None

    def __post_init__(self):
        if len(self.v) != len(self.alphas):
            raise DomainError("weight vector length must match the evaluation set")
        if any(x == 0 for x in self.v):
            raise DomainError("weights must be nonzero")
        if not 1 <= self.k <= len(self.alphas) + int(self.extended):
            raise DomainError("bad dimension")

    @property
    def length(self) -> int:
        return len(self.alphas) + int(self.extended)

    @property
    def generator(self) -> list[list[int]]:
        F = self.field
        rows = []
        for j in range(self.k):
            row = [F.mul(vi, F.pow(a, j)) for a, vi in zip(self.alphas, self.v)]
            if self.extended:
                row.append(1 if j == self.k - 1 else 0)
            rows.append(row)
        return rows


def gram(F: FiniteField, G: Sequence[Sequence[int]]) -> list[list[int]]:
    """G G^T over F."""
    out = []
    for r1 in G:
        line = []
        for r2 in G:
            acc = 0
            for x, y in zip(r1, r2):
                acc = F.add(acc, F.mul(x, y))
            line.append(acc)
        out.append(line)
    return out


def is_self_orthogonal(F: FiniteField, G) -> bool:
    return all(x == 0 for row in gram(F, G) for x in row)


def rank_fq(F: FiniteField, M: Sequence[Sequence[int]]) -> int:
    rows = [list(r) for r in M]
    if not rows:
        return 0
    ncols = len(rows[0])
    rk = 0
    for col in range(ncols):
        piv = next((i for i in range(rk, len(rows)) if rows[i][col]), None)
        if piv is None:
            continue
        rows[rk], rows[piv] = rows[piv], rows[rk]
        inv = F.inv(rows[rk][col])
        rows[rk] = [F.mul(inv, x) for x in rows[rk]]
        for i in range(len(rows)):
            if i != rk and rows[i][col]:
                c = rows[i][col]
                rows[i] = [F.sub(x, F.mul(c, y)) for x, y in zip(rows[i], rows[rk])]
        rk += 1
        if rk == len(rows):
            break
    return rk


def _weights(S: EvaluationSet, lam: int, odd: bool) -> tuple[int, ...]:
    F = S.field
    out = []
    for d in deltas(S):
        base = F.neg(d) if odd else d
        out.append(F.sqrt(F.mul(lam, F.inv(base))))
    return tuple(out)


def construct_self_dual(S: EvaluationSet) -> GrsCode:
    """Self-dual (extended) GRS code on S; the result is verified before return."""
    F = S.field
    feas = feasibility(S)
    if feas is Feasibility.INFEASIBLE:
        raise Infeasible(f"{S.alphas} admits no self-dual GRS code")
    if feas is Feasibility.EVEN_LENGTH_OK:
        lam = 1 if F.eta(delta(S, 0)) == 1 else F.nonsquare()
        code = GrsCode(F, S.alphas, _weights(S, lam, odd=False), S.n // 2, False, lam)
        if is_self_orthogonal(F, code.generator):
            return code
        raise ConstructionFailed(f"weights for lambda={lam} are not self-orthogonal")
    k = (S.n + 1) // 2
    for lam in range(1, F.q):
        try:
            v = _weights(S, lam, odd=True)
        except NonResidue:
            continue
        code = GrsCode(F, S.alphas, v, k, True, lam)
        if is_self_orthogonal(F, code.generator):
            return code
    raise ConstructionFailed("no lambda in F_q* gives a self-orthogonal extended code")


def verify_self_dual(C: GrsCode) -> bool:
    G = C.generator
    if C.length % 2 or C.k != C.length // 2:
        return False
    return is_self_orthogonal(C.field, G) and rank_fq(C.field, G) == C.k


def minimum_distance(C: GrsCode, budget: int = CODEWORD_BUDGET) -> int:
    """Minimum weight over all nonzero codewords, by full enumeration."""
    F, k, q = C.field, C.k, C.field.q
    total = q**k
    if total > budget:
        raise TooLarge(f"{total} codewords exceed enumeration budget {budget}")
    G = np.array(C.generator, dtype=np.int64)
    best = C.length + 1
    batch = max(1, 2**20 // max(C.length, 1))
    for start in range(0, total, batch):
        m = np.arange(start, min(start + batch, total), dtype=np.int64)
        word = np.zeros((m.size, C.length), dtype=np.int64)
        for j in range(k):
            digit = (m // q**j) % q
            word = F.add_arr(word, F.mul_arr(digit[:, None], G[j][None, :]))
        wt = np.count_nonzero(word, axis=1)
        wt = wt[wt > 0]
        if wt.size:
            best = min(best, int(wt.min()))
    if best > C.length:
        raise DomainError("code has no nonzero codeword")
    return best


def all_column_subsets_invertible(C: GrsCode, budget: int = COLUMN_SUBSET_BUDGET) -> bool:
    n, k = C.length, C.k
    if math.comb(n, k) > budget:
        raise TooLarge(f"C({n}, {k}) column subsets exceed budget {budget}")
    G = C.generator
    for cols in combinations(range(n), k):
        sub = [[row[c] for c in cols] for row in G]
        if rank_fq(C.field, sub) < k:
            return False
    return True


def verify_mds(C: GrsCode, strategy: str = "auto") -> bool:
    """Singleton-bound equality d = length - k + 1.

    ``strategy`` is "codewords", "columns" or "auto" (codewords when q^k is
    within budget, else column subsets).
    """
    if strategy == "auto":
        if C.field.q ** C.k <= CODEWORD_BUDGET:
            strategy = "codewords"
        elif math.comb(C.length, C.k) <= COLUMN_SUBSET_BUDGET:
            strategy = "columns"
        else:
            raise TooLarge("neither MDS strategy fits the budget")
    if strategy == "codewords":
        if rank_fq(C.field, C.generator) != C.k:
            return False
        return minimum_distance(C) == C.length - C.k + 1
    if strategy == "columns":
        return all_column_subsets_invertible(C)
    raise DomainError(f"unknown strategy {strategy!r}")


# -- Omega families ------------------------------------------------------------

@dataclass
class OmegaResult:
    q: int
    size: int
    sets: list[tuple[int, ...]]

    @property
    def extended(self) -> bool:
        return self.size % 2 == 1

    @property
    def code_length(self) -> int:
        return self.size + int(self.extended)

    @property
    def count(self) -> int:
        return len(self.sets)


def _omega_chunk(args) -> list[tuple[int, ...]]:
    F, n, firsts = args
    out = []
    for a0 in firsts:
        for rest in combinations(range(a0 + 1, F.q), n - 1):
            S = EvaluationSet(F, (a0,) + rest)
            if feasibility(S) is not Feasibility.INFEASIBLE:
                out.append(S.alphas)
    return out


def enumerate_omega(
    F: FiniteField, n: int, budget: int = DEFAULT_BUDGET, workers: int = 1
) -> OmegaResult:
    """All n-subsets of F admitting a self-dual (extended, for odd n) GRS code.

    Sets are sorted tuples, listed in lexicographic order.
    """
    if not 1 <= n <= F.q:
        raise DomainError("need 1 <= n <= q")
    if math.comb(F.q, n) > budget:
        raise BudgetExceeded(f"C({F.q}, {n}) subsets exceed budget {budget}")
    nchunks = min(F.q, 32)
    chunks = [(F, n, list(range(c, F.q, nchunks))) for c in range(nchunks)]
    sets = [s for part in chunk_map(_omega_chunk, chunks, workers) for s in part]
    sets.sort()
    return OmegaResult(F.q, n, sets)


def omega_count_from_census(P: PaleyStructure, n: int, budget: int = DEFAULT_BUDGET, workers: int = 1) -> int:
    """|Omega(n, q)| (even n) or |Omega~(n+1, q)| (odd n) from parity counts.

    P_q: even n -> even + odd, odd n -> even.
    PT_q: even n -> even + odd, odd n -> odd.
    """
    rep = exhaustive_census(P, n, n, budget, workers)[0]
    if n % 2 == 0:
        return rep.even + rep.odd
    return rep.odd if P.directed else rep.even


# -- complementary pairs -------------------------------------------------------

@dataclass
class PairCensus:
    q: int
    count: int
    witnesses: list[list[int]]
    truncated: bool
    method: str

    def to_json(self) -> dict:
        return {
            "q": self.q,
            "count": str(self.count),
            "witnesses": self.witnesses,
            "truncated": self.truncated,
            "method": self.method,
        }


def nonresidue_rows(F: FiniteField) -> list[int]:
    """rows[i]: bitmask of j != i with a_i - a_j a nonsquare."""
    rows = []
    for i in range(F.q):
        r = 0
        for j in range(F.q):
            if j != i and F.eta(F.sub(i, j)) == -1:
                r |= 1 << j
        rows.append(r)
    return rows


def _pair_scan(F: FiniteField, cap: int) -> tuple[int, list[int]]:
    """Test every subset: eta(D_S(a)) = prod eta(a - b) = (-1)^{#nonsquare differences}."""
    q = F.q
    rows = nonresidue_rows(F)
    masks = np.arange(1 << q, dtype=np.uint32)
    bad = (np.bitwise_count(masks) & 1).astype(bool)
    for i in range(q):
        in_s = ((masks >> np.uint32(i)) & np.uint32(1)).astype(bool)
        cnt_s = np.bitwise_count(masks & np.uint32(rows[i])).astype(np.int64)
        cnt_c = (rows[i].bit_count() - cnt_s)
        bad |= in_s & (cnt_s & 1).astype(bool)
        bad |= ~in_s & (cnt_c & 1).astype(bool)
    good = masks[~bad]
    sizes = np.bitwise_count(good)
    good = good[(sizes >= 2) & (sizes <= q - 1)]
    return int(good.size), [int(m) for m in good[:cap]]


def coeven_pair_census(F: FiniteField, cap: int = 64, method: str = "auto") -> PairCensus:
    """Even-size S, 2 <= |S| <= q-1, with eta(D_S(a)) = 1 on S and
    eta(D_{F - S}(b)) = 1 on the complement.

    ``scan`` tests all 2^q subsets; ``rank`` counts co-even sets of the
    nonsquare-difference graph through GF(2) linear algebra.
    """
    q = F.q
    if method == "auto":
        method = "scan" if q <= PAIR_SCAN_MAX_Q else "rank"

    def members(mask: int) -> list[int]:
        return [x for x in range(q) if (mask >> x) & 1]

    if method == "scan":
        if q > PAIR_SCAN_MAX_Q:
            raise TooLarge(f"exhaustive scan limited to q <= {PAIR_SCAN_MAX_Q}")
        count, masks = _pair_scan(F, cap)
        return PairCensus(q, count, [members(m) for m in masks], count > cap, "scan")
    if method != "rank":
        raise DomainError(f"unknown method {method!r}")
    if q % 4 == 3:
        # all out-degrees even forces C(|S|, 2) even: |S| = 0 mod 4 and the
        # odd complement has size 1 mod 4, so q = 1 mod 4
        return PairCensus(q, 0, [], False, "rank")
    H = SimpleGraph(q, tuple(nonresidue_rows(F)))
    count = count_coeven(H) // 2 - 1
    witnesses = []
    if cap > 0 and count > 0:
        sets, _ = coeven_sets(H, cap=min(4 * cap + 4, 1 << 22))
        for V1 in sets:
            if V1.bit_count() % 2 == 0 and V1.bit_count() >= 2:
                witnesses.append(members(V1))
                if len(witnesses) == cap:
                    break
    return PairCensus(q, count, witnesses, count > len(witnesses), "rank")


# -- serialization -------------------------------------------------------------

def code_to_record(C: GrsCode) -> dict:
    return {
        "field": C.field.to_json(),
        "q": C.field.q,
        "n": C.length,
        "k": C.k,
        "alphas": list(C.alphas),
        "v": list(C.v),
        "extended": C.extended,
        "lambda": C.lam,
        "generator": C.generator,
    }


def record_to_code(rec: dict) -> GrsCode:
    fd = rec.get("field")
    if fd is not None:
        modulus = None if fd["e"] == 1 else fd["modulus"]
        F = make_field(fd["p"], fd["e"], modulus)
    else:
        from .ffield import field_of_order

        F = field_of_order(rec["q"])
    return GrsCode(F, tuple(rec["alphas"]), tuple(rec["v"]), int(rec["k"]), bool(rec["extended"]), rec.get("lambda"))


def verify_record(rec: dict) -> dict:
    """Re-check a serialized code: stored generator, self-duality, MDS."""
    C = record_to_code(rec)
    gen_ok = rec.get("generator", C.generator) == C.generator and rec.get("n", C.length) == C.length
    sd = verify_self_dual(C)
    mds = verify_mds(C)
    return {"alphas": list(C.alphas), "generator_ok": gen_ok, "self_dual": sd, "mds": mds,
            "ok": gen_ok and sd and mds}


def generator_text(C: GrsCode) -> str:
    """First line "q n k", then k rows of space-separated element indices."""
    lines = [f"{C.field.q} {C.length} {C.k}"]
    lines += [" ".join(str(x) for x in row) for row in C.generator]
    return "\n".join(lines) + "\n"


def read_records(lines: Iterable[str]) -> list[dict]:
    out = []
    for line in lines:
        line = line.strip()
        if not line:
            continue
        rec = json.loads(line)
        if "alphas" in rec and "v" in rec:
            out.append(rec)
    return out
