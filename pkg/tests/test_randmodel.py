import math
from fractions import Fraction
from itertools import combinations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from paleyparity.errors import BudgetExceeded, DomainError
from paleyparity.randmodel import (
    _even_counts,
    as_probability,
    expected_digraph,
    expected_graph,
    lemma_a1_sum,
    monte_carlo,
)

HALF = Fraction(1, 2)


def test_closed_form_examples():
    assert expected_graph(10, HALF, 4) == Fraction(105, 4)
    assert expected_digraph(10, HALF, 4) == Fraction(105, 8)
    assert expected_digraph(6, Fraction(1, 4), 3) == Fraction(625, 128)
    for n in (1, 5, 30):
        assert expected_graph(n, Fraction(1, 3), 1) == n
        assert expected_digraph(n, Fraction(2, 7), 1) == n


def test_sparse_limit_is_close_to_all_pairs():
    for n in (5, 20, 60):
        val = expected_graph(n, Fraction(1, 1000), 2)
        assert isinstance(val, Fraction)
        assert abs(val - math.comb(n, 2)) < Fraction(math.comb(n, 2), 100)


def test_probability_parsing():
    assert as_probability("3/10") == Fraction(3, 10)
    assert as_probability((1, 4)) == Fraction(1, 4)
    assert as_probability(0.5) == HALF
    for bad in (0, 1, "5/4", "-1/3", "x", (1, 0)):
        with pytest.raises(DomainError):
            as_probability(bad)
    with pytest.raises(DomainError):
        expected_graph(4, HALF, 5)
    with pytest.raises(DomainError):
        expected_digraph(4, HALF, 0)


def test_a1_sum_tends_to_two():
    p = Fraction(3, 10)
    for r in range(30, 201):
        assert 1.9 <= lemma_a1_sum(p, r) <= 2.1


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 40), st.data())
def test_half_identities(n, data):
    r = data.draw(st.integers(1, n))
    assert expected_graph(n, HALF, r) == Fraction(math.comb(n, r), 2 ** (r - 1))
    if r >= 2:  # at r = 1 the (1 - 2p)^0 term keeps the value at n
        assert expected_digraph(n, HALF, r) == Fraction(math.comb(n, r), 2**r)


@settings(max_examples=60, deadline=None)
@given(st.integers(2, 25), st.integers(1, 99))
def test_closed_forms_are_positive(n, k):
    p = Fraction(k, 100)
    r = 1 + k % n
    assert expected_graph(n, p, r) > 0 and expected_digraph(n, p, r) > 0


def test_exhaustive_closed_form_on_tiny_graphs():
    # average over all labelled graphs on 4 vertices, weighted by p^e (1-p)^(6-e)
    p = Fraction(1, 3)
    pairs = list(combinations(range(4), 2))
    total = Fraction(0)
    for bits in range(1 << 6):
        A = np.zeros((1, 4, 4), dtype=np.uint8)
        for i, (u, v) in enumerate(pairs):
            if bits >> i & 1:
                A[0, u, v] = A[0, v, u] = 1
        e = bits.bit_count()
        S = np.array(list(combinations(range(4), 3)))
        total += p**e * (1 - p) ** (6 - e) * int(_even_counts(A, S)[0])
    assert total == expected_graph(4, p, 3)


def test_monte_carlo_graph_and_digraph():
    g = monte_carlo(12, HALF, 4, 20_000, seed=3)
    assert g.closed_form == Fraction(495, 8)
    assert abs(g.z) <= 3 and g.method == "exhaustive"
    d = monte_carlo(12, Fraction(3, 10), 4, 20_000, seed=3, kind="digraph")
    assert abs(d.z) <= 3 and d.mc_stderr > 0


def test_monte_carlo_is_deterministic():
    a = monte_carlo(10, "2/5", 3, 3000, seed=11)
    b = monte_carlo(10, "2/5", 3, 3000, seed=11)
    assert a == b
    assert a.to_json() != monte_carlo(10, "2/5", 3, 3000, seed=12).to_json()


def test_workers_do_not_change_results():
    a = monte_carlo(9, HALF, 3, 4500, seed=2, workers=1)
    b = monte_carlo(9, HALF, 3, 4500, seed=2, workers=3)
    assert a == b


def test_tripling_trials_shrinks_stderr():
    for kind in ("graph", "digraph"):
        small = monte_carlo(10, Fraction(1, 3), 4, 3000, seed=5, kind=kind)
        big = monte_carlo(10, Fraction(1, 3), 4, 9000, seed=5, kind=kind)
        assert small.mc_stderr / big.mc_stderr >= 1.6


def test_sampled_subsets_are_unbiased():
    rep = monte_carlo(40, HALF, 6, 2000, seed=7, subsets=200)
    assert rep.method == "sampled"
    assert abs(rep.z) <= 3.5


def test_large_n_path_matches_naive_count():
    rng = np.random.default_rng(4)
    n, r = 70, 3
    A = np.triu(rng.random((2, n, n)) < 0.4, 1)
    A = (A | A.transpose(0, 2, 1)).astype(np.uint8)
    S = np.array([rng.choice(n, r, replace=False) for _ in range(300)])
    got = _even_counts(A, S)
    for g in range(2):
        want = sum(all(A[g, v, S[i]].sum() % 2 == 0 for v in S[i]) for i in range(len(S)))
        assert got[g] == want


def test_report_fields_and_errors():
    rep = monte_carlo(8, "1/4", 2, 50, seed=1, kind="digraph")
    js = rep.to_json()
    assert js["p"] == "1/4" and js["kind"] == "digraph" and js["trials"] == 50
    assert Fraction(js["closed_form"]) == expected_digraph(8, Fraction(1, 4), 2)
    assert rep.mc_stderr >= 0
    with pytest.raises(BudgetExceeded):
        monte_carlo(30, HALF, 5, 100, budget=10**6)
    with pytest.raises(DomainError):
        monte_carlo(8, HALF, 2, 0)
    with pytest.raises(DomainError):
        monte_carlo(8, HALF, 2, 5, kind="tournament")
