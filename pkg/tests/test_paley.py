import math
from itertools import combinations

import pytest

from oracles import NaiveField, parity_counts
from paleyparity.ffield import field_of_order
from paleyparity.gf2 import Gf2Matrix, mask_members
from paleyparity.paley import (
    ParityClass,
    adjacency_gf2,
    build_paley,
    classify_induced,
    cut_arc_count,
    edge_list,
)


def test_kinds_and_degrees():
    P13 = build_paley(13)
    assert P13.kind == "graph" and not P13.directed
    assert all(P13.out_degree(x) == 6 for x in range(13))
    PT7 = build_paley(7)
    assert PT7.kind == "tournament" and PT7.directed
    assert all(PT7.out_degree(x) == 3 for x in range(7))
    assert {y for y in range(7) if PT7.has_arc(y, 0)} == {1, 2, 4}
    P9 = build_paley(field_of_order(9))
    assert P9.n == 9 and all(P9.out_degree(x) == 4 for x in range(9))


@pytest.mark.parametrize("q", [5, 7, 9, 11, 13, 25, 27, 49])
def test_rows_match_naive_squares(q):
    F = field_of_order(q)
    N = NaiveField(F.p, list(F.modulus) if F.modulus else None)
    sq = N.squares()
    P = build_paley(F)
    for x in range(q):
        assert mask_members(P.rows[x]) == [y for y in range(q) if N.sub(x, y) in sq]
        assert P.out_degree(x) == (q - 1) // 2


def test_classification_examples():
    P13 = build_paley(13)
    assert classify_induced(P13, {0}) is ParityClass.EVEN
    assert classify_induced(P13, range(13)) is ParityClass.EVEN
    assert classify_induced(P13, []) is ParityClass.EVEN
    PT7 = build_paley(7)
    for S in combinations(range(7), 2):
        assert classify_induced(PT7, S) is ParityClass.MIXED


def test_cut_counts():
    P5 = build_paley(5)
    assert cut_arc_count(P5, [], range(5)) == 0
    assert cut_arc_count(P5, {0}, {1}) == 1
    PT7 = build_paley(7)
    assert cut_arc_count(PT7, {0}, {1}) == 0
    assert cut_arc_count(PT7, {1}, {0}) == 1


def test_adjacency_matrices():
    A = adjacency_gf2(build_paley(13))
    assert A.nrows == A.ncols == 13
    assert A.T == A
    assert A.row_sums() == [6] * 13
    assert all(A[i, i] == 0 for i in range(13))
    T = adjacency_gf2(build_paley(7))
    J_minus_I = Gf2Matrix.from_rows([0b1111111 ^ (1 << i) for i in range(7)], 7)
    assert T + T.T == J_minus_I


def test_character_cut_identity_q13():
    P = build_paley(13)
    F = P.field
    for size in range(1, 6):
        for S in combinations(range(13), size):
            for t in range(size + 1):
                for T in combinations(S, t):
                    rest = [w for w in S if w not in T]
                    e = cut_arc_count(P, T, rest)
                    prod = math.prod(F.eta(F.sub(u, w)) for u in T for w in rest)
                    assert (-1) ** e == (-1) ** (len(T) * len(rest)) * prod


def test_tournament_self_pairing_q7():
    P = build_paley(7)
    F = P.field
    for k in range(6):
        sign = (-1) ** (k * (k - 1) // 2)
        for U in combinations(range(7), k):
            ordered = math.prod(F.eta(F.sub(u, w)) for u in U for w in U if u != w)
            assert ordered == sign
            assert (-1) ** cut_arc_count(P, U, U) == sign


@pytest.mark.parametrize("q", [7, 11])
def test_tournament_parity_exclusions_exhaustive(q):
    P = build_paley(q)
    for mask in range(1, 1 << q):
        size = mask.bit_count()
        cls = classify_induced(P, mask)
        if cls is ParityClass.EVEN:
            assert size % 4 in (0, 1)
        if cls is ParityClass.ODD:
            assert size % 4 in (0, 3)


def test_classification_agrees_with_oracle_counts():
    P = build_paley(11)
    for r in range(1, 6):
        even = odd = 0
        for S in combinations(range(11), r):
            c = classify_induced(P, S)
            even += c is ParityClass.EVEN
            odd += c is ParityClass.ODD
        assert (even, odd) == parity_counts(11, P.has_arc, r)


def test_edge_list_format():
    text = edge_list(build_paley(5))
    lines = text.splitlines()
    assert len(lines) == 5
    assert all(int(u) < int(v) for u, v in (ln.split() for ln in lines))
    arcs = edge_list(build_paley(7)).splitlines()
    assert len(arcs) == 21 and "1 0" in arcs and "0 1" not in arcs


def test_vertex_transitive_degree_sequence():
    for q in (29, 31, 81):
        P = build_paley(q)
        assert len({P.out_degree(x) for x in range(q)}) == 1
        assert len({r.bit_count() for r in P.in_rows}) == 1
