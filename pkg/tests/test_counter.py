import random

import pytest
from hypothesis import given, settings

from oracles import commutation_classes
from pseudochord.counter import (
    Budget, BudgetExceeded, DeadEnd, count_arrangements, default_order, enumerate_arrangements,
    estimate_weights, sample_arrangement,
)
from pseudochord.matching import Matching, family_matching, matching_from_pairs
from pseudochord.subdivision import chirotope
from test_matching import matchings


@pytest.mark.parametrize("n", range(1, 8))
def test_pseudoline_counts_match_commutation_classes(n):
    assert count_arrangements(family_matching([1] * n)) == commutation_classes(n)


def test_small_families():
    assert count_arrangements(Matching(())) == 1
    assert count_arrangements(family_matching([2])) == 1
    assert count_arrangements(family_matching([3, 4])) == 1  # a grid
    assert count_arrangements(family_matching([1, 1, 1])) == 2


def test_disjoint_union_multiplies():
    # two (1)_4 blocks on separate boundary arcs never interact
    a = family_matching([1] * 4)
    pairs = list(a.pairs) + [(x + 8, y + 8) for x, y in family_matching([1] * 3).pairs]
    assert count_arrangements(matching_from_pairs(pairs)) == 8 * 2


@settings(max_examples=25, deadline=None)
@given(matchings(max_k=6))
def test_count_invariant_under_symmetry_and_order(m):
    n = count_arrangements(m)
    assert count_arrangements(m.cyclic_shift(3)) == n
    assert count_arrangements(m.reflect()) == n
    rng = random.Random(m.k)
    assert count_arrangements(m, rng.sample(range(m.k), m.k)) == n


@settings(max_examples=25, deadline=None)
@given(matchings(max_k=6))
def test_enumeration_agrees_with_count(m):
    embs = list(enumerate_arrangements(m))
    assert len(embs) == count_arrangements(m)
    if m.k:
        assert len({chirotope(e) for e in embs}) == len(embs)


def test_order_validation():
    m = family_matching([1] * 3)
    with pytest.raises(ValueError):
        count_arrangements(m, [0, 1])
    with pytest.raises(ValueError):
        count_arrangements(m, [0, 1, 1])


def test_budget_exceeded():
    with pytest.raises(BudgetExceeded):
        count_arrangements(family_matching([1] * 7), budget=50)
    with pytest.raises(BudgetExceeded):
        list(enumerate_arrangements(family_matching([1] * 6), budget=10))
    b = Budget(2)
    b.charge(2)
    with pytest.raises(BudgetExceeded):
        b.charge()
    assert count_arrangements(family_matching([1] * 5), budget=None) == 62


def test_parallel_matches_serial():
    m = family_matching([1] * 6)
    assert count_arrangements(m, workers=2, split=4) == count_arrangements(m) == 908


def test_sampling_and_weights():
    m = family_matching([2, 1, 1])
    e = sample_arrangement(m, seed=3)
    e.check()
    assert e.inserted == 0b1111
    w = estimate_weights(m, samples=8, seed=1)
    assert set(w) == set(range(4)) and all(v >= 1 for v in w.values())
    assert estimate_weights(m, samples=8, seed=1) == w
    order = default_order(m, w)
    assert sorted(order) == list(range(4))
    assert [w[c] for c in order] == sorted(w.values())
    with pytest.raises(ValueError):
        estimate_weights(m, samples=0)


def test_sample_without_attempts_raises():
    with pytest.raises(DeadEnd):
        sample_arrangement(family_matching([1, 1, 1]), attempts=0)


def test_order_invariance_exhaustive_small():
    from pseudochord.verify import all_matchings

    rng = random.Random(3)
    for k in range(1, 6):
        for m in all_matchings(k):
            ident = count_arrangements(m, list(range(k)))
            assert count_arrangements(m, list(reversed(range(k)))) == ident
            assert count_arrangements(m, rng.sample(range(k), k)) == ident


def test_route_count_equals_routes_exhaustively():
    from pseudochord.counter import enumerate_completions
    from pseudochord.subdivision import boundary_embedding, count_insertions, insertion_routes

    rng = random.Random(8)
    cases = [family_matching([1] * 6), family_matching([2, 2, 2])]
    cases += [matching_from_pairs(zip(*[iter(rng.sample(range(12), 12))] * 2)) for _ in range(4)]
    for m in cases:
        for j in range(m.k):
            for e in enumerate_completions(boundary_embedding(m), list(range(j))):
                assert count_insertions(e, j) == len(insertion_routes(e, j))
