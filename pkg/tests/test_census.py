import math
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from frozen import EVEN_P13, EVEN_P17, PARITY_PT7, PARITY_PT11
from oracles import NaiveField, parity_counts
from paleyparity.census import (
    binary_entropy,
    block_rng,
    character_sum_A,
    count_parity_induced,
    even_count_in_range,
    exhaustive_census,
    giant_lower_bound,
    partial_fisher_yates,
    reconstruct_Nr,
    sampled_census,
    theta_set,
    weil_check,
    weil_trials,
)
from paleyparity.errors import BudgetExceeded, DomainError, TooLarge
from paleyparity.ffield import field_of_order
from paleyparity.paley import build_paley
from paleyparity.parity import SimpleGraph, is_coeven, is_even


def test_oracle_values_are_current():
    for q, frozen in ((13, EVEN_P13), (17, EVEN_P17)):
        N = NaiveField(q)
        sq = N.squares()
        adj = lambda x, y: N.sub(x, y) in sq
        assert [parity_counts(q, adj, r)[0] for r in range(1, 5)] == frozen


def test_census_examples():
    P13 = build_paley(13)
    assert count_parity_induced(P13, 1).even == 13
    rep = count_parity_induced(P13, 2)
    assert (rep.even, rep.odd) == (39, 39)
    assert count_parity_induced(build_paley(7), 2).even == 0


def test_exhaustive_matches_frozen():
    assert [rep.even for rep in exhaustive_census(build_paley(13), 1, 4)] == EVEN_P13
    assert [rep.even for rep in exhaustive_census(build_paley(17), 1, 4)] == EVEN_P17
    assert [(r.even, r.odd) for r in exhaustive_census(build_paley(7), 1, 7)] == PARITY_PT7
    assert [(r.even, r.odd) for r in exhaustive_census(build_paley(11), 1, 7)] == PARITY_PT11


@pytest.mark.parametrize("q", [5, 7, 9, 11, 13, 19])
def test_exhaustive_matches_oracle(q):
    P = build_paley(q)
    for rep in exhaustive_census(P, 1, min(q, 6)):
        assert (rep.even, rep.odd) == parity_counts(q, P.has_arc, rep.r)
        assert rep.even + rep.odd + rep.mixed == math.comb(q, rep.r) == rep.total


def test_random_graph_census_matches_oracle():
    G = SimpleGraph.random(14, 0.4, seed=8)
    for rep in exhaustive_census(G, 1, 6):
        assert (rep.even, rep.odd) == parity_counts(14, lambda v, w: (G.rows[v] >> w) & 1, rep.r)


@pytest.mark.parametrize("q", [7, 11])
def test_tournament_exclusions(q):
    for rep in exhaustive_census(build_paley(q), 1, 7):
        if rep.r % 4 in (2, 3):
            assert rep.even == 0
        if rep.r % 4 in (1, 2):
            assert rep.odd == 0


@pytest.mark.parametrize("q", [13, 17, 29])
def test_odd_count_equals_even_count_of_complement(q):
    G = SimpleGraph.from_paley(build_paley(q))
    H = G.complement()
    for r in (2, 4):
        odd = exhaustive_census(G, r, r)[0].odd
        assert odd == exhaustive_census(H, r, r)[0].even
        assert odd == exhaustive_census(G, r, r)[0].even


def test_workers_do_not_change_results():
    P = build_paley(19)
    a = [r.to_json() for r in exhaustive_census(P, 1, 6, workers=1)]
    b = [r.to_json() for r in exhaustive_census(P, 1, 6, workers=3)]
    assert a == b
    P = build_paley(101)
    s1 = sampled_census(P, 4, 150_000, seed=9, workers=1).to_json()
    s2 = sampled_census(P, 4, 150_000, seed=9, workers=2).to_json()
    assert s1 == s2


def test_budget_and_domain_errors():
    with pytest.raises(BudgetExceeded):
        exhaustive_census(build_paley(101), 1, 6)
    with pytest.raises(DomainError):
        exhaustive_census(build_paley(13), 0, 2)
    with pytest.raises(DomainError):
        sampled_census(build_paley(13), 14, 10, 0)


def test_sampled_is_within_four_standard_errors_of_truth():
    P = build_paley(29)
    for r in (3, 4, 5):
        truth = exhaustive_census(P, r, r)[0]
        est = sampled_census(P, r, 200_000, seed=r)
        f_true = truth.even / truth.total
        assert abs(est.fractions["even"] - f_true) <= 4 * est.stderr("even")
        assert est.truncated and est.mode == "sampled"


def test_sampled_report_fields():
    rep = sampled_census(build_paley(10009), 5, 20_000, seed=1)
    js = rep.to_json()
    assert js["samples"] == 20_000 and js["truncated"] is True
    assert js["even"] == str(rep.even)
    assert js["even_estimate"] == pytest.approx(js["even_fraction"] * math.comb(10009, 5))


@settings(max_examples=30, deadline=None)
@given(st.integers(5, 40), st.integers(1, 5), st.integers(0, 2**32))
def test_fisher_yates_draws_distinct_subsets(n, r, seed):
    r = min(r, n)
    S = partial_fisher_yates(block_rng(seed, 0), n, r, 500)
    assert S.shape == (500, r)
    assert (S >= 0).all() and (S < n).all()
    assert all(len(set(row)) == r for row in S.tolist())


def test_fisher_yates_is_uniform():
    S = partial_fisher_yates(block_rng(1, 0), 6, 2, 150_000)
    counts = {}
    for a, b in S.tolist():
        key = (min(a, b), max(a, b))
        counts[key] = counts.get(key, 0) + 1
    assert len(counts) == 15
    expected = 150_000 / 15
    chi2 = sum((c - expected) ** 2 / expected for c in counts.values())
    assert chi2 < 45  # 14 degrees of freedom; far tail


def test_reconstruction_examples():
    F = field_of_order(13)
    assert reconstruct_Nr(F, 1) == 13
    assert reconstruct_Nr(F, 2) == 39
    assert reconstruct_Nr(F, 3) == exhaustive_census(build_paley(13), 3, 3)[0].even


@pytest.mark.parametrize("q", [7, 11, 13, 17])
def test_reconstruction_matches_census(q):
    P = build_paley(q)
    for rep in exhaustive_census(P, 1, 4):
        assert reconstruct_Nr(P.field, rep.r) == rep.even
        assert reconstruct_Nr(P.field, rep.r, method="generating") == rep.even


def test_reconstruction_limits():
    with pytest.raises(BudgetExceeded):
        reconstruct_Nr(field_of_order(19), 2)


@settings(max_examples=60, deadline=None)
@given(st.sampled_from([5, 7, 9, 11, 13]), st.data())
def test_character_sum_methods_agree(q, data):
    F = field_of_order(q)
    W = data.draw(st.sets(st.integers(0, q - 1), max_size=3))
    k = data.draw(st.integers(0, q - len(W)))
    a = character_sum_A(F, W, k)
    b = character_sum_A(F, W, k, method="generating")
    assert a == b


def test_character_sum_empty_W():
    F = field_of_order(13)
    # f_W = 1, so every term is 1
    assert character_sum_A(F, [], 3) == math.comb(13, 3)
    with pytest.raises(DomainError):
        character_sum_A(F, [0], 13)


def test_weil_examples():
    F = field_of_order(13)
    rep = weil_check(F, [0, 1], 1)
    assert rep.ok and rep.lhs <= math.sqrt(13)
    W = random.Random(1).sample(range(13), 3)
    assert weil_check(F, W, 3).ok
    with pytest.raises(DomainError):
        weil_check(F, [4], 1)
    with pytest.raises(DomainError):
        weil_check(F, [0, 1], 2)


def test_weil_random_trials():
    reps = weil_trials(300, seed=2)
    assert len(reps) == 300 and all(r.ok for r in reps)
    assert weil_trials(20, 5) == weil_trials(20, 5)
    fixed = weil_trials(10, 3, q=49, deg=4)
    assert all(r.q == 49 and len(r.roots) == 4 for r in fixed)


def test_bound_examples():
    assert giant_lower_bound(4, 2).bound == 2
    assert giant_lower_bound(12, 6).bound == 11
    for n in range(1, 15):
        assert giant_lower_bound(n, n).bound == 1
    odd = giant_lower_bound(9, 5)
    assert odd.half == 3
    assert odd.bound == Fraction(math.comb(9, 4), math.comb(6, 4))
    with pytest.raises(DomainError):
        giant_lower_bound(5, 0)


def test_binary_entropy():
    assert binary_entropy(0.5) == pytest.approx(1.0)
    assert binary_entropy(0.25) == pytest.approx(binary_entropy(0.75))
    for bad in (0, 1, -0.1, 1.5):
        with pytest.raises(DomainError):
            binary_entropy(bad)


def test_theta_set_examples():
    T = theta_set(SimpleGraph.edgeless(4), 2)
    assert len(T) >= 2
    assert all(1 <= m.bit_count() <= 2 for m in T)
    G = SimpleGraph.from_paley(build_paley(13)).induced(range(8))
    T = theta_set(G, 4)
    assert len(T) >= math.ceil(Fraction(math.comb(8, 4), math.comb(6, 4)))
    K3 = SimpleGraph.from_edges(3, [(0, 1), (1, 2), (0, 2)])
    T = theta_set(K3, 3)
    assert K3.full in T
    with pytest.raises(TooLarge):
        theta_set(SimpleGraph.edgeless(15), 3)


def test_theta_set_members_are_even():
    G = SimpleGraph.random(10, 0.5, seed=4)
    for m in theta_set(G, 5):
        assert is_even(G.rows, m) and 3 <= m.bit_count() <= 5


def test_theta_set_is_bounded_below_on_random_graphs():
    rng = random.Random(6)
    for _ in range(8):
        n = rng.randint(6, 11)
        theta = rng.randint(2, n)
        G = SimpleGraph.random(n, 0.5, seed=rng.randrange(1 << 30))
        assert len(theta_set(G, theta)) >= giant_lower_bound(n, theta).bound


def test_even_count_in_range():
    G = SimpleGraph.edgeless(5)
    assert even_count_in_range(G, 0, 5) == 32
    assert even_count_in_range(G, 2, 3) == 20
    P = build_paley(13)
    assert even_count_in_range(P, 1, 2) == 13 + 39


def test_is_coeven_consistent_with_census():
    G = SimpleGraph.from_paley(build_paley(13))
    assert is_coeven(G, G.full) and is_coeven(G, 0)
