"""Synthetic judges, tau-convergence simulation, stratified splitting, CSV export."""

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from bayescj import export
from bayescj import session as sess
from bayescj.metrics import agreement_heatmap
from bayescj.ranking import BcjModel, overall_ranking
from bayescj.selection import StrategyKind
from bayescj.simulate import (
    SyntheticJudge,
    make_judge,
    perturbed_order,
    run_session,
    simulate,
    stratified_split,
)


class TestSyntheticJudge:
    def test_noiseless_judge_is_the_truth_oracle(self):
        judge = SyntheticJudge(truth={"holistic": ["a", "b", "c"]}, noise=0.0)
        rng = np.random.default_rng(0)
        for _ in range(20):
            assert judge.decide("holistic", "c", "a", rng) == "a"
            assert judge.decide("holistic", "b", "c", rng) == "b"

    def test_full_noise_flips_half_the_time(self):
        judge = SyntheticJudge(truth={"holistic": ["a", "b"]}, noise=0.5)
        rng = np.random.default_rng(1)
        wins = sum(judge.decide("holistic", "a", "b", rng) == "a" for _ in range(4000))
        assert 1800 < wins < 2200

    def test_noise_bounds_enforced(self):
        with pytest.raises(ValueError):
            SyntheticJudge(truth={"holistic": ["a", "b"]}, noise=0.6)
        with pytest.raises(ValueError):
            SyntheticJudge(truth={"holistic": ["a", "b"]}, noise=-0.1)

    def test_per_criterion_truths(self):
        judge = SyntheticJudge(
            truth={"c1": ["a", "b"], "c2": ["b", "a"]}, noise=0.0
        )
        rng = np.random.default_rng(2)
        assert judge.decide("c1", "a", "b", rng) == "a"
        assert judge.decide("c2", "a", "b", rng) == "b"


class TestPerturbedOrder:
    def test_zero_swaps_is_identity(self):
        base = ["a", "b", "c"]
        assert perturbed_order(base, 0, np.random.default_rng(0)) == base

    def test_swaps_keep_the_item_set(self):
        base = [f"i{k}" for k in range(8)]
        shuffled = perturbed_order(base, 5, np.random.default_rng(3))
        assert sorted(shuffled) == sorted(base)

    def test_make_judge_shares_one_truth_without_swaps(self):
        config = sess.make_config(
            "MBCJ",
            [{"id": "a"}, {"id": "b"}, {"id": "c"}],
            criteria=[{"id": "c1"}, {"id": "c2"}],
        )
        judge = make_judge(config, ["b", "a", "c"], noise=0.0)
        assert judge.truth["c1"] == judge.truth["c2"] == ["b", "a", "c"]


class TestRunSession:
    def test_records_tau_after_every_comparison(self):
        config = sess.make_config(
            "BCJ", [{"id": f"i{k}"} for k in range(5)], max_comparisons=12
        )
        truth = [f"i{k}" for k in range(5)]
        judge = make_judge(config, truth, noise=0.0)
        curve = run_session(config, judge, truth, np.random.default_rng(0))
        assert curve.comparisons == list(range(1, 13))
        assert all(0.0 <= t <= 1.0 for t in curve.taus)

    def test_noiseless_session_reaches_truth(self):
        config = sess.make_config(
            "BCJ", [{"id": f"i{k}"} for k in range(6)], max_comparisons=60
        )
        truth = [f"i{k}" for k in range(6)]
        judge = make_judge(config, truth, noise=0.0)
        curve = run_session(config, judge, truth, np.random.default_rng(1))
        assert curve.taus[-1] == 0.0


class TestSimulate:
    def test_bit_reproducible_for_equal_seeds(self):
        kwargs = dict(
            mode="BCJ", n_items=5, strategy=StrategyKind.ENTROPY,
            budget=15, seed=7, repeats=3,
        )
        a = simulate(**kwargs)
        b = simulate(**kwargs)
        assert np.array_equal(a.mean, b.mean)
        assert np.array_equal(a.sd, b.sd)
        for ca, cb in zip(a.curves, b.curves):
            assert ca.taus == cb.taus

    def test_workers_do_not_change_results(self):
        kwargs = dict(
            mode="BCJ", n_items=4, strategy=StrategyKind.RANDOM,
            budget=10, seed=3, repeats=4,
        )
        assert np.array_equal(
            simulate(**kwargs, workers=1).mean, simulate(**kwargs, workers=4).mean
        )

    def test_noiseless_bcj_converges(self):
        result = simulate(
            mode="BCJ", n_items=6, strategy=StrategyKind.ENTROPY,
            budget=60, seed=0, repeats=5,
        )
        assert result.final_taus == [0.0] * 5

    def test_mbcj_runs_with_combined_entropy(self):
        result = simulate(
            mode="MBCJ", n_items=4, strategy=StrategyKind.COMBINED_ENTROPY,
            n_criteria=2, budget=20, seed=1, repeats=2,
        )
        assert result.mean.shape == (20,)
        assert result.final_taus == [0.0, 0.0]

    def test_initial_taus_are_recorded(self):
        result = simulate(
            mode="BCJ", n_items=6, strategy=StrategyKind.RANDOM,
            budget=5, seed=2, repeats=8,
        )
        assert len(result.initial_taus) == 8
        assert all(0.0 <= t <= 1.0 for t in result.initial_taus)

    def test_rejects_bad_repeats(self):
        with pytest.raises(ValueError):
            simulate("BCJ", 4, StrategyKind.ENTROPY, repeats=0)


class TestStratifiedSplit:
    def test_forced_round_robin_no_ties(self):
        marks = [("a", 6), ("b", 5), ("c", 4), ("d", 3), ("e", 2), ("f", 1)]
        assert stratified_split(marks, 2) == [["a", "c", "e"], ["b", "d", "f"]]

    def test_thirty_items_three_groups_of_ten(self):
        marks = [(f"i{k:02d}", float(k % 8)) for k in range(30)]
        groups = stratified_split(marks, 3, seed=1)
        assert [len(g) for g in groups] == [10, 10, 10]

    def test_single_group_is_identity_partition(self):
        marks = [("a", 3.0), ("b", 2.0), ("c", 1.0)]
        assert stratified_split(marks, 1) == [["a", "b", "c"]]

    def test_group_sizes_differ_by_at_most_one(self):
        marks = [(f"i{k}", float(k)) for k in range(11)]
        sizes = [len(g) for g in stratified_split(marks, 3)]
        assert max(sizes) - min(sizes) <= 1

    def test_equal_marks_shuffled_by_seed(self):
        marks = [(f"i{k}", 5.0) for k in range(6)]
        layouts = {
            tuple(tuple(g) for g in stratified_split(marks, 2, seed=s))
            for s in range(20)
        }
        assert len(layouts) > 1

    def test_errors(self):
        marks = [("a", 1.0), ("b", 2.0)]
        with pytest.raises(ValueError):
            stratified_split(marks, 0)
        with pytest.raises(ValueError):
            stratified_split(marks, 3)
        with pytest.raises(ValueError):
            stratified_split([("a", 1.0), ("a", 2.0)], 1)

    @given(
        st.lists(
            st.tuples(st.integers(min_value=0, max_value=20)),
            min_size=1, max_size=30,
        ),
        st.integers(min_value=1, max_value=5),
        st.integers(min_value=0, max_value=100),
    )
    @settings(max_examples=50, deadline=None)
    def test_always_a_partition(self, raw_marks, groups, seed):
        marks = [(f"i{k}", float(m[0])) for k, m in enumerate(raw_marks)]
        if groups > len(marks):
            return
        assignment = stratified_split(marks, groups, seed=seed)
        flat = [item for group in assignment for item in group]
        assert sorted(flat) == sorted(i for i, _ in marks)
        sizes = [len(g) for g in assignment]
        assert max(sizes) - min(sizes) <= 1


class TestCsvExport:
    def test_density_csv_rows_sum_to_one(self, tmp_path):
        m = BcjModel.flat(["a", "b", "c"])
        m.record("a", "b")
        result = overall_ranking(m)
        path = tmp_path / "densities.csv"
        export.write_density_csv(path, result)
        lines = path.read_text().strip().splitlines()
        assert lines[0] == "item_id,rank_1,rank_2,rank_3"
        assert len(lines) == 4
        for line in lines[1:]:
            cells = line.split(",")
            assert sum(float(x) for x in cells[1:]) == pytest.approx(1.0, abs=1e-5)

    def test_expected_ranks_csv(self, tmp_path):
        m = BcjModel.flat(["a", "b"])
        result = overall_ranking(m)
        path = tmp_path / "er.csv"
        export.write_expected_ranks_csv(path, result)
        lines = path.read_text().strip().splitlines()
        assert lines[0] == "rank,item_id,expected_rank"
        assert len(lines) == 3

    def test_flat_heatmap_is_all_zero_upper_triangle(self, tmp_path):
        m = BcjModel.flat(["a", "b", "c"])
        path = tmp_path / "heat.csv"
        export.write_heatmap_csv(path, agreement_heatmap(m), "eap")
        lines = path.read_text().strip().splitlines()
        assert lines[0] == "item_id,a,b,c"
        assert lines[1].split(",") == ["a", "", "0.000000", "0.000000"]
        assert lines[3].split(",") == ["c", "", "", ""]

    def test_tau_curve_csv_length_is_budget_used(self, tmp_path):
        result = simulate(
            mode="BCJ", n_items=4, strategy=StrategyKind.ENTROPY,
            budget=9, seed=0, repeats=2,
        )
        path = tmp_path / "tau.csv"
        export.write_tau_curve_csv(path, result)
        lines = path.read_text().strip().splitlines()
        assert lines[0] == "comparisons,tau_mean,tau_sd"
        assert len(lines) == 10  # one point per judgement

    def test_marks_round_trip_and_header_check(self, tmp_path):
        path = tmp_path / "marks.csv"
        path.write_text("id,mark\na,3.5\nb,2\n")
        assert export.read_marks_csv(path) == [("a", 3.5), ("b", 2.0)]
        bad = tmp_path / "bad.csv"
        bad.write_text("item,score\na,1\n")
        with pytest.raises(ValueError):
            export.read_marks_csv(bad)

    def test_split_csv(self, tmp_path):
        path = tmp_path / "split.csv"
        export.write_split_csv(path, [["a", "c"], ["b"]])
        assert path.read_text().strip().splitlines() == [
            "item_id,group", "a,1", "c,1", "b,2",
        ]
