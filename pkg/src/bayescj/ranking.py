"""Rank densities and orderings derived from pair posteriors.

An item's number of wins against the rest of the field is Poisson-binomial
over the per-pair win probabilities (pairs treated as independent). Rank r
means beating N - r opponents, so the rank density is the win-count pmf
reversed. Items are ordered by expected rank; the multi-criteria model keeps
one pairwise model per criterion and combines rank distributions through a
weighted sum of their CDFs.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Sequence

import numpy as np

from .posterior import JudgementOutcome, PairPosterior, posterior_mean, update_pair

WEIGHT_TOL = 1e-12


class UnknownItemError(KeyError):
    pass


def canonical_pair(a: str, b: str) -> tuple[str, str]:
    """Canonical storage orientation for an unordered pair: lower id first."""
    if a == b:
        raise ValueError(f"pair must join two distinct items, got {a!r} twice")
    return (a, b) if a < b else (b, a)


@dataclass
class BcjModel:
    """All pair posteriors for one criterion over a fixed item set.

    Posteriors are stored once per unordered pair under the canonical
    orientation; reads in the opposite orientation see the counts' roles
    swapped.
    """

    items: list[str]
    posteriors: dict[tuple[str, str], PairPosterior]

    @classmethod
    def flat(cls, items: Sequence[str]) -> "BcjModel":
        """Fresh model with the flat Beta(1, 1) prior on every pair."""
        items = list(items)
        if len(items) < 2:
            raise ValueError("a model needs at least 2 items")
        if len(set(items)) != len(items):
            raise ValueError("item ids must be distinct")
        posteriors = {
            canonical_pair(a, b): PairPosterior() for a, b in combinations(items, 2)
        }
        return cls(items=items, posteriors=posteriors)

    def index_of(self, item: str) -> int:
        try:
            return self.items.index(item)
        except ValueError:
            raise UnknownItemError(item) from None

    def posterior_for(self, a: str, b: str) -> PairPosterior:
        """Posterior oriented as (a beats b), whatever the stored orientation."""
        key = canonical_pair(a, b)
        stored = self.posteriors[key]
        return stored if key == (a, b) else stored.flipped()

    def record(self, winner: str, loser: str) -> None:
        """Fold one judgement (winner beat loser) into the stored posterior."""
        key = canonical_pair(winner, loser)
        outcome = JudgementOutcome.FIRST if key == (winner, loser) else JudgementOutcome.SECOND
        self.posteriors[key] = update_pair(self.posteriors[key], outcome)

    def judgement_count(self) -> int:
        return sum(p.judgements for p in self.posteriors.values())


@dataclass
class MbcjModel:
    """One independent pairwise model per criterion, plus combination weights."""

    criteria: list[str]
    models: dict[str, BcjModel]
    weights: list[float]

    @classmethod
    def flat(
        cls,
        items: Sequence[str],
        criteria: Sequence[str],
        weights: Sequence[float] | None = None,
    ) -> "MbcjModel":
        criteria = list(criteria)
        if not criteria:
            raise ValueError("at least one criterion required")
        if len(set(criteria)) != len(criteria):
            raise ValueError("criterion ids must be distinct")
        if weights is None:
            weights = [1.0 / len(criteria)] * len(criteria)
        weights = [float(w) for w in weights]
        validate_weights(weights, len(criteria))
        models = {c: BcjModel.flat(items) for c in criteria}
        return cls(criteria=criteria, models=models, weights=weights)

    @property
    def items(self) -> list[str]:
        return self.models[self.criteria[0]].items


def validate_weights(weights: Sequence[float], count: int) -> None:
    if len(weights) != count:
        raise ValueError(f"expected {count} weights, got {len(weights)}")
    if any(w < 0.0 for w in weights):
        raise ValueError("weights must be non-negative")
    if abs(sum(weights) - 1.0) > WEIGHT_TOL:
        raise ValueError(f"weights must sum to 1, got {sum(weights)}")


@dataclass
class RankDensity:
    """Probability over ranks 1..N for one item, with its mean rank."""

    item: str
    probabilities: np.ndarray
    expected_rank: float

    @classmethod
    def from_probabilities(cls, item: str, probabilities: np.ndarray) -> "RankDensity":
        probs = np.asarray(probabilities, dtype=float)
        ranks = np.arange(1, probs.size + 1, dtype=float)
        return cls(item=item, probabilities=probs, expected_rank=float(ranks @ probs))


@dataclass
class TieBreak:
    """Record of one seeded shuffle among items tied on the sort key."""

    key: float
    tied: list[str]
    resolved: list[str]


@dataclass
class RankingResult:
    """Final ordering (rank 1 first) with per-item densities and tie-break trace."""

    ordered: list[str]
    densities: dict[str, RankDensity]
    tie_breaks: list[TieBreak] = field(default_factory=list)


def win_probability_matrix(m: BcjModel) -> np.ndarray:
    """N x N matrix of posterior-mean win probabilities; diagonal left at 0."""
    n = len(m.items)
    w = np.zeros((n, n))
    for i, j in combinations(range(n), 2):
        p = posterior_mean(m.posterior_for(m.items[i], m.items[j]))
        w[i, j] = p
        w[j, i] = 1.0 - p
    return w


def win_vector(m: BcjModel, item: str) -> np.ndarray:
    """Win probabilities of `item` against every other item (model order)."""
    m.index_of(item)
    others = [o for o in m.items if o != item]
    return np.array([posterior_mean(m.posterior_for(item, o)) for o in others])


def poisson_binomial_pmf(probs: np.ndarray) -> np.ndarray:
    """Exact pmf of the number of successes among independent Bernoulli(probs).

    Standard O(n^2) convolution: fold each trial into the running pmf.
    """
    probs = np.asarray(probs, dtype=float)
    f = np.zeros(probs.size + 1)
    f[0] = 1.0
    for q in probs:
        f[1:] = f[1:] * (1.0 - q) + f[:-1] * q
        f[0] *= 1.0 - q
    return f


def rank_density_exact(m: BcjModel, item: str) -> RankDensity:
    """Exact rank density: rank r is achieved by beating N - r opponents."""
    wins_pmf = poisson_binomial_pmf(win_vector(m, item))
    return RankDensity.from_probabilities(item, wins_pmf[::-1])


def rank_density_mc(m: BcjModel, item: str, samples: int, seed: int) -> RankDensity:
    """Monte-Carlo estimate of the rank density; deterministic given `seed`."""
    if samples < 1:
        raise ValueError("samples must be >= 1")
    p = win_vector(m, item)
    rng = np.random.default_rng(seed)
    n = len(m.items)
    counts = np.zeros(n, dtype=np.int64)
    remaining = samples
    chunk = 200_000
    while remaining > 0:
        k = min(chunk, remaining)
        wins = (rng.random((k, p.size)) < p).sum(axis=1)
        counts += np.bincount(wins, minlength=n)
        remaining -= k
    return RankDensity.from_probabilities(item, (counts / samples)[::-1])


def _break_ties(
    keyed: list[tuple[float, str]], rng: np.random.Generator
) -> tuple[list[str], list[TieBreak]]:
    """Stable-sort by key, then shuffle each group of exactly-equal keys."""
    order = sorted(range(len(keyed)), key=lambda i: keyed[i][0])
    ordered: list[str] = []
    trace: list[TieBreak] = []
    i = 0
    while i < len(order):
        j = i
        while j < len(order) and keyed[order[j]][0] == keyed[order[i]][0]:
            j += 1
        group = [keyed[k][1] for k in order[i:j]]
        if len(group) > 1:
            resolved = [group[k] for k in rng.permutation(len(group))]
            trace.append(TieBreak(key=keyed[order[i]][0], tied=group, resolved=resolved))
            ordered.extend(resolved)
        else:
            ordered.extend(group)
        i = j
    return ordered, trace


def ranking_from_densities(
    items: Sequence[str], densities: dict[str, RankDensity], seed: int
) -> RankingResult:
    """Order items by expected rank ascending; seeded shuffle among exact ties."""
    rng = np.random.default_rng(seed)
    keyed = [(densities[item].expected_rank, item) for item in items]
    ordered, trace = _break_ties(keyed, rng)
    return RankingResult(ordered=ordered, densities=dict(densities), tie_breaks=trace)


def overall_ranking(m: BcjModel, seed: int = 0) -> RankingResult:
    densities = {item: rank_density_exact(m, item) for item in m.items}
    return ranking_from_densities(m.items, densities, seed)


def combine_criteria(
    densities: Sequence[RankDensity], weights: Sequence[float]
) -> RankDensity:
    """Mix per-criterion rank densities through a weighted sum of their CDFs."""
    if not densities:
        raise ValueError("no densities to combine")
    sizes = {d.probabilities.size for d in densities}
    if len(sizes) != 1:
        raise ValueError(f"densities cover different rank ranges: {sorted(sizes)}")
    items = {d.item for d in densities}
    if len(items) != 1:
        raise ValueError(f"densities describe different items: {sorted(items)}")
    weights = [float(w) for w in weights]
    validate_weights(weights, len(densities))
    active = [(d, w) for d, w in zip(densities, weights) if w > 0.0]
    if len(active) == 1:
        # A single live criterion must come back bit-for-bit, so skip the
        # cdf round trip (cumsum then diff is not an exact identity).
        return RankDensity.from_probabilities(
            active[0][0].item, active[0][0].probabilities.copy()
        )
    cdf = np.zeros(sizes.pop())
    for d, w in active:
        cdf += w * np.cumsum(d.probabilities)
    pmf = np.maximum(np.diff(cdf, prepend=0.0), 0.0)
    return RankDensity.from_probabilities(densities[0].item, pmf)


def combined_density(mm: MbcjModel, item: str) -> RankDensity:
    per_criterion = [rank_density_exact(mm.models[c], item) for c in mm.criteria]
    return combine_criteria(per_criterion, mm.weights)


def mbcj_overall_ranking(mm: MbcjModel, seed: int = 0) -> RankingResult:
    densities = {item: combined_density(mm, item) for item in mm.items}
    return ranking_from_densities(mm.items, densities, seed)


@dataclass
class RadarSummary:
    """Per-criterion expected ranks for one item, plus the combined value."""

    item: str
    per_criterion: dict[str, float]
    combined: float


def radar_summary(mm: MbcjModel, item: str) -> RadarSummary:
    per_criterion = {
        c: rank_density_exact(mm.models[c], item).expected_rank for c in mm.criteria
    }
    return RadarSummary(
        item=item,
        per_criterion=per_criterion,
        combined=combined_density(mm, item).expected_rank,
    )
