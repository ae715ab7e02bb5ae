import itertools
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gbtexplain import HitProblem, minimum_hitting_set


def brute_minimum(universe, sets):
    """Smallest hitting set by exhaustive search, lexicographically smallest."""
    universe = sorted(universe)
    for size in range(len(universe) + 1):
        for combo in itertools.combinations(universe, size):
            chosen = set(combo)
            if all(chosen & s for s in sets):
                return combo
    raise AssertionError("universe itself must hit everything")


def test_empty_collection_needs_nothing():
    assert minimum_hitting_set(HitProblem.of([1, 2, 3], [])) == ()


def test_forced_singletons():
    problem = HitProblem.of("ab", [{"a"}, {"b"}])
    assert minimum_hitting_set(problem) == ("a", "b")


def test_triangle_prefers_lexicographic():
    problem = HitProblem.of("abc", [{"a", "b"}, {"b", "c"}, {"a", "c"}])
    assert minimum_hitting_set(problem) == ("a", "b")
    # exhaustive confirmation over all 2^3 subsets
    assert brute_minimum("abc", [frozenset("ab"), frozenset("bc"), frozenset("ac")]) == ("a", "b")


def test_rejects_empty_sets():
    with pytest.raises(ValueError, match="empty"):
        HitProblem.of([1, 2], [set()])


def test_rejects_sets_outside_universe():
    with pytest.raises(ValueError, match="universe"):
        HitProblem.of([1, 2], [{3}])


@pytest.mark.parametrize("seed", range(10))
def test_random_problems_match_exhaustive_minimum(seed):
    rng = random.Random(seed)
    for _ in range(20):
        n = rng.randint(1, 12)
        universe = list(range(n))
        sets = [
            frozenset(rng.sample(universe, rng.randint(1, min(4, n))))
            for _ in range(rng.randint(1, 10))
        ]
        got = minimum_hitting_set(HitProblem.of(universe, sets))
        want = brute_minimum(universe, sets)
        assert len(got) == len(want)
        assert got == want  # lexicographically smallest among minimums
        assert all(set(got) & s for s in sets)


def test_output_is_irredundant_for_small_solutions():
    rng = random.Random(5)
    for _ in range(50):
        n = rng.randint(2, 10)
        universe = list(range(n))
        sets = [
            frozenset(rng.sample(universe, rng.randint(1, min(3, n))))
            for _ in range(rng.randint(1, 8))
        ]
        got = set(minimum_hitting_set(HitProblem.of(universe, sets)))
        if len(got) <= 4:
            for drop in got:
                smaller = got - {drop}
                assert not all(smaller & s for s in sets)


@given(st.data())
@settings(max_examples=100, deadline=None)
def test_adding_a_set_never_shrinks_the_minimum(data):
    n = data.draw(st.integers(1, 10))
    universe = list(range(n))
    set_strategy = st.frozensets(st.integers(0, n - 1), min_size=1, max_size=4)
    sets = data.draw(st.lists(set_strategy, min_size=0, max_size=8))
    extra = data.draw(set_strategy)
    before = len(minimum_hitting_set(HitProblem.of(universe, sets)))
    after = len(minimum_hitting_set(HitProblem.of(universe, sets + [extra])))
    assert after >= before


def test_two_hundred_random_problems_sixteen_wide():
    rng = random.Random(2024)
    for _ in range(200):
        n = rng.randint(1, 16)
        universe = list(range(n))
        sets = [
            frozenset(rng.sample(universe, rng.randint(1, min(5, n))))
            for _ in range(rng.randint(1, 12))
        ]
        got = minimum_hitting_set(HitProblem.of(universe, sets))
        assert len(got) == len(brute_minimum(universe, sets))
