"""Pair-selection strategies and the comparison budget."""

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from bayescj.posterior import PairPosterior, beta_entropy
from bayescj.ranking import BcjModel, MbcjModel
from bayescj.selection import (
    Budget,
    SelectionStrategy,
    StrategyKind,
    budget_remaining,
    combined_pair_entropies,
    default_budget,
    enumerate_pairs,
    next_pair_combined_entropy,
    next_pair_entropy,
    next_pair_random,
    pair_entropies,
    presentation_order,
    select_pair,
)


class TestBudget:
    def test_default_is_ten_per_item(self):
        assert default_budget(10) == 100
        assert default_budget(3) == 30

    def test_remaining(self):
        assert budget_remaining(Budget(max_comparisons=10, used=4)) == 6
        assert budget_remaining(Budget(max_comparisons=10, used=10)) == 0

    def test_validation(self):
        with pytest.raises(ValueError):
            Budget(max_comparisons=0)
        with pytest.raises(ValueError):
            Budget(max_comparisons=5, used=6)
        with pytest.raises(ValueError):
            Budget(max_comparisons=5, used=-1)


class TestEnumeratePairs:
    def test_order_and_orientation(self):
        assert enumerate_pairs(["c", "a", "b"]) == [("a", "c"), ("b", "c"), ("a", "b")]

    def test_count(self):
        assert len(enumerate_pairs([f"i{k}" for k in range(6)])) == 15


class TestRandomSelection:
    def test_uniform_over_pairs(self):
        m = BcjModel.flat(["a", "b", "c", "d"])
        rng = np.random.default_rng(0)
        counts = {p: 0 for p in enumerate_pairs(m.items)}
        draws = 6000
        for _ in range(draws):
            counts[next_pair_random(m, rng)] += 1
        for count in counts.values():
            assert abs(count / draws - 1 / 6) < 0.03

    def test_deterministic_given_rng(self):
        m = BcjModel.flat(["a", "b", "c"])
        assert next_pair_random(m, np.random.default_rng(5)) == next_pair_random(
            m, np.random.default_rng(5)
        )


class TestEntropySelection:
    def test_entropies_match_scalar_function(self):
        m = BcjModel.flat(["a", "b", "c"])
        m.record("a", "b")
        m.record("c", "b")
        pairs, entropies = pair_entropies(m)
        for pair, value in zip(pairs, entropies):
            assert value == pytest.approx(beta_entropy(m.posteriors[pair]), abs=1e-15)

    def test_prefers_the_unjudged_pair(self):
        # Judged pairs have negative entropy; the remaining flat pair (0) wins.
        m = BcjModel.flat(["a", "b", "c"])
        m.record("a", "b")
        m.record("a", "c")
        for seed in range(10):
            assert next_pair_entropy(m, np.random.default_rng(seed)) == ("b", "c")

    def test_most_contested_pair_wins_once_all_are_judged(self):
        # Beta(2,2) is more uncertain than Beta(3,1): split pairs come back first.
        m = BcjModel.flat(["a", "b", "c"])
        m.record("a", "b")
        m.record("b", "a")
        m.record("a", "c")
        m.record("a", "c")
        m.record("b", "c")
        m.record("c", "b")
        chosen = {next_pair_entropy(m, np.random.default_rng(s)) for s in range(30)}
        assert chosen == {("a", "b"), ("b", "c")}

    def test_flat_model_ties_cover_all_pairs(self):
        m = BcjModel.flat(["a", "b", "c", "d"])
        chosen = {next_pair_entropy(m, np.random.default_rng(s)) for s in range(200)}
        assert chosen == set(enumerate_pairs(m.items))


class TestCombinedEntropySelection:
    def test_sums_across_criteria(self):
        mm = MbcjModel.flat(["a", "b", "c"], ["c1", "c2"])
        mm.models["c1"].record("a", "b")
        mm.models["c2"].record("b", "a")
        pairs, totals = combined_pair_entropies(mm)
        expected = {
            pair: sum(beta_entropy(mm.models[c].posteriors[pair]) for c in mm.criteria)
            for pair in pairs
        }
        for pair, total in zip(pairs, totals):
            assert total == pytest.approx(expected[pair], abs=1e-15)

    def test_weighted_variant_scales_by_weights(self):
        mm = MbcjModel.flat(["a", "b"], ["c1", "c2"], weights=[0.9, 0.1])
        mm.models["c1"].record("a", "b")
        pairs, totals = combined_pair_entropies(mm, weighted=True)
        assert totals[0] == pytest.approx(
            0.9 * beta_entropy(mm.models["c1"].posteriors[pairs[0]]), abs=1e-15
        )

    def test_prefers_pair_unjudged_anywhere(self):
        mm = MbcjModel.flat(["a", "b", "c"], ["c1", "c2"])
        mm.models["c1"].record("a", "b")
        mm.models["c2"].record("a", "b")
        mm.models["c1"].record("a", "c")
        mm.models["c2"].record("c", "a")
        for seed in range(10):
            assert next_pair_combined_entropy(mm, np.random.default_rng(seed)) == ("b", "c")


class TestPresentationOrder:
    def test_flips_roughly_half_the_time(self):
        rng = np.random.default_rng(1)
        flips = sum(
            presentation_order(("a", "b"), rng) == ("b", "a") for _ in range(2000)
        )
        assert 850 < flips < 1150

    def test_preserves_the_pair(self):
        rng = np.random.default_rng(2)
        for _ in range(20):
            shown = presentation_order(("a", "b"), rng)
            assert sorted(shown) == ["a", "b"]


class TestDispatch:
    def test_random_works_on_both_model_kinds(self):
        m = BcjModel.flat(["a", "b", "c"])
        mm = MbcjModel.flat(["a", "b", "c"], ["c1"])
        strategy = SelectionStrategy(StrategyKind.RANDOM)
        assert select_pair(m, strategy, np.random.default_rng(0)) in enumerate_pairs(m.items)
        assert select_pair(mm, strategy, np.random.default_rng(0)) in enumerate_pairs(mm.items)

    def test_entropy_requires_single_criterion_model(self):
        mm = MbcjModel.flat(["a", "b"], ["c1"])
        with pytest.raises(ValueError):
            select_pair(mm, SelectionStrategy(StrategyKind.ENTROPY), np.random.default_rng(0))

    def test_combined_entropy_requires_multi_criteria_model(self):
        m = BcjModel.flat(["a", "b"])
        with pytest.raises(ValueError):
            select_pair(
                m, SelectionStrategy(StrategyKind.COMBINED_ENTROPY), np.random.default_rng(0)
            )

    @given(st.integers(min_value=0, max_value=2**31 - 1))
    @settings(max_examples=50, deadline=None)
    def test_selection_always_returns_a_known_pair(self, seed):
        rng = np.random.default_rng(seed)
        m = BcjModel.flat(["a", "b", "c", "d", "e"])
        for key in m.posteriors:
            m.posteriors[key] = PairPosterior(
                1.0 + float(rng.integers(0, 5)), 1.0 + float(rng.integers(0, 5))
            )
        pairs = set(enumerate_pairs(m.items))
        for kind in (StrategyKind.RANDOM, StrategyKind.ENTROPY):
            assert select_pair(m, SelectionStrategy(kind), rng) in pairs
