"""Headless synthetic-judge simulations and dataset splitting.

Runs full judging sessions against a scripted judge and records the
normalised Kendall tau distance to the ground-truth order after every
comparison, aggregated over repeats. Also provides the stratified
round-robin splitter used to build comparable assessment groups from marks.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import session as sess
from .metrics import kendall_tau_distance
from .selection import SelectionStrategy, StrategyKind
from .session import SessionConfig, make_config


@dataclass
class SyntheticJudge:
    """Scripted assessor: answers along a fixed order, flipped with probability `noise`.

    `truth` maps each criterion id to a total order (best first). noise = 0 is
    the deterministic oracle judge.
    """

    truth: dict[str, list[str]]
    noise: float = 0.0

    def __post_init__(self) -> None:
        if not (0.0 <= self.noise <= 0.5):
            raise ValueError("noise must lie in [0, 0.5]")

    def decide(
        self, criterion: str, a: str, b: str, rng: np.random.Generator
    ) -> str:
        order = self.truth[criterion]
        truthful = a if order.index(a) < order.index(b) else b
        if self.noise > 0.0 and rng.random() < self.noise:
            return b if truthful == a else a
        return truthful


@dataclass
class TauCurve:
    """Tau against the target order after each comparison of one session run."""

    comparisons: list[int]
    taus: list[float]


@dataclass
class SimulationResult:
    comparisons: np.ndarray  # 1..budget
    mean: np.ndarray
    sd: np.ndarray
    curves: list[TauCurve] = field(default_factory=list)
    initial_taus: list[float] = field(default_factory=list)

    @property
    def final_taus(self) -> list[float]:
        return [c.taus[-1] for c in self.curves]


def _default_items(n: int) -> list[str]:
    width = len(str(n))
    return [f"item{str(i + 1).zfill(width)}" for i in range(n)]


def perturbed_order(
    base: list[str], swaps: int, rng: np.random.Generator
) -> list[str]:
    """Apply `swaps` random adjacent transpositions to a copy of `base`."""
    order = list(base)
    for _ in range(swaps):
        i = int(rng.integers(len(order) - 1))
        order[i], order[i + 1] = order[i + 1], order[i]
    return order


def make_judge(
    config: SessionConfig,
    truth_order: list[str],
    noise: float,
    criterion_swaps: int = 0,
    rng: np.random.Generator | None = None,
) -> SyntheticJudge:
    """Judge whose per-criterion truths are the shared order, optionally perturbed."""
    truth = {}
    for criterion in config.criterion_ids:
        if criterion_swaps > 0:
            if rng is None:
                raise ValueError("criterion_swaps needs an rng")
            truth[criterion] = perturbed_order(truth_order, criterion_swaps, rng)
        else:
            truth[criterion] = list(truth_order)
    return SyntheticJudge(truth=truth, noise=noise)


def run_session(
    config: SessionConfig,
    judge: SyntheticJudge,
    truth_order: list[str],
    judge_rng: np.random.Generator,
    judge_id: str = "sim",
) -> TauCurve:
    """Drive one full session until the budget is spent, recording tau per step."""
    state = sess.new_state(config, session_id="sim")
    comparisons: list[int] = []
    taus: list[float] = []
    while True:
        issued = sess.next_pair(state, judge_id)
        if issued is None:
            break
        a, b = issued.pair
        decisions = {
            criterion: judge.decide(criterion, a, b, judge_rng)
            for criterion in config.criterion_ids
        }
        sess.submit_judgement(state, judge_id, issued.pair, decisions)
        ordered = sess.session_ranking(state).ordered
        comparisons.append(len(state.audit))
        taus.append(kendall_tau_distance(ordered, truth_order).normalised)
    return TauCurve(comparisons=comparisons, taus=taus)


def initial_tau(config: SessionConfig, truth_order: list[str]) -> float:
    """Tau of the zero-comparison (tie-broken flat) ranking against the truth."""
    state = sess.new_state(config, session_id="sim")
    ordered = sess.session_ranking(state).ordered
    return kendall_tau_distance(ordered, truth_order).normalised


def simulate(
    mode: str,
    n_items: int,
    strategy: StrategyKind,
    n_criteria: int = 3,
    noise: float = 0.0,
    budget: int | None = None,
    seed: int = 0,
    repeats: int = 1,
    criterion_swaps: int = 0,
    workers: int | None = None,
) -> SimulationResult:
    """Repeat headless sessions with per-repeat derived seeds; aggregate tau curves."""
    if repeats < 1:
        raise ValueError("repeats must be >= 1")
    items = _default_items(n_items)

    def one_repeat(index: int) -> tuple[TauCurve, float]:
        rng = np.random.default_rng([seed, index])
        truth_order = [items[i] for i in rng.permutation(n_items)]
        config = make_config(
            mode=mode,
            items=[{"id": i} for i in items],
            criteria=(
                None
                if mode.upper() == "BCJ"
                else [{"id": f"crit{c + 1}"} for c in range(n_criteria)]
            ),
            strategy=SelectionStrategy(strategy, rng_seed=int(rng.integers(2**31))),
            max_comparisons=budget,
            seed=int(rng.integers(2**31)),
        )
        judge = make_judge(config, truth_order, noise, criterion_swaps, rng)
        start_tau = initial_tau(config, truth_order)
        curve = run_session(config, judge, truth_order, judge_rng=rng)
        return curve, start_tau

    indices = list(range(repeats))
    if workers is None or workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            outcomes = list(pool.map(one_repeat, indices))
    else:
        outcomes = [one_repeat(i) for i in indices]

    curves = [c for c, _ in outcomes]
    initial = [t for _, t in outcomes]
    taus = np.array([c.taus for c in curves])
    return SimulationResult(
        comparisons=np.asarray(curves[0].comparisons),
        mean=taus.mean(axis=0),
        sd=taus.std(axis=0, ddof=1) if repeats > 1 else np.zeros(taus.shape[1]),
        curves=curves,
        initial_taus=initial,
    )


def stratified_split(
    marks: list[tuple[str, float]], groups: int, seed: int = 0
) -> list[list[str]]:
    """Deal items into `groups` mark-balanced groups.

    Sort by mark descending, shuffle ties within each equal-mark stratum with
    the seeded rng, then deal round-robin so group sizes differ by at most one
    and mark distributions stay as close as the dealing allows.
    """
    if groups < 1:
        raise ValueError("need at least one group")
    if groups > len(marks):
        raise ValueError("more groups than items")
    ids = [i for i, _ in marks]
    if len(set(ids)) != len(ids):
        raise ValueError("duplicate item id in marks")

    rng = np.random.default_rng(seed)
    by_mark: dict[float, list[str]] = {}
    for item_id, mark in marks:
        by_mark.setdefault(float(mark), []).append(item_id)
    dealt: list[str] = []
    for mark in sorted(by_mark, reverse=True):
        stratum = by_mark[mark]
        if len(stratum) > 1:
            stratum = [stratum[i] for i in rng.permutation(len(stratum))]
        dealt.extend(stratum)
    out: list[list[str]] = [[] for _ in range(groups)]
    for position, item_id in enumerate(dealt):
        out[position % groups].append(item_id)
    return out
