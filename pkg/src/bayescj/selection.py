"""Next-pair choice for a judging session.

Traditional CJ draws a pair uniformly at random; the Bayesian variants query
the pair whose posterior is most uncertain -- maximum differential Beta
entropy, summed across criteria for the multi-criteria model. All tie-breaks
go through the caller's generator so a session replay regenerates identical
choices.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from itertools import combinations

import numpy as np

from .posterior import beta_entropies
from .ranking import BcjModel, MbcjModel, canonical_pair


class StrategyKind(Enum):
    RANDOM = "random"
    ENTROPY = "entropy"
    COMBINED_ENTROPY = "combined_entropy"


@dataclass(frozen=True)
class SelectionStrategy:
    kind: StrategyKind
    rng_seed: int = 0


@dataclass
class Budget:
    """Comparison budget; sessions refuse new pairs once it is spent."""

    max_comparisons: int
    used: int = 0

    def __post_init__(self) -> None:
        if self.max_comparisons < 1:
            raise ValueError("max_comparisons must be positive")
        if not (0 <= self.used <= self.max_comparisons):
            raise ValueError(f"used must lie in [0, {self.max_comparisons}]")


def default_budget(n_items: int) -> int:
    """Rule-of-thumb cap: ten comparisons per item."""
    return n_items * 10


def budget_remaining(b: Budget) -> int:
    return b.max_comparisons - b.used


def enumerate_pairs(items: list[str]) -> list[tuple[str, str]]:
    """All unordered pairs in item-list order, each in canonical orientation."""
    return [canonical_pair(a, b) for a, b in combinations(items, 2)]


def next_pair_random(m: BcjModel, rng: np.random.Generator) -> tuple[str, str]:
    """Uniform draw over all pairs (traditional CJ)."""
    pairs = enumerate_pairs(m.items)
    return pairs[int(rng.integers(len(pairs)))]


def _argmax_with_ties(
    pairs: list[tuple[str, str]], scores: np.ndarray, rng: np.random.Generator
) -> tuple[str, str]:
    ties = np.flatnonzero(scores == scores.max())
    return pairs[int(ties[int(rng.integers(ties.size))])]


def pair_entropies(m: BcjModel) -> tuple[list[tuple[str, str]], np.ndarray]:
    """Differential entropy of every pair posterior, in pair-enumeration order."""
    pairs = enumerate_pairs(m.items)
    alphas = np.array([m.posteriors[p].alpha for p in pairs])
    betas = np.array([m.posteriors[p].beta for p in pairs])
    return pairs, beta_entropies(alphas, betas)


def next_pair_entropy(m: BcjModel, rng: np.random.Generator) -> tuple[str, str]:
    """Most uncertain pair: argmax of Beta entropy, ties broken via `rng`."""
    pairs, entropies = pair_entropies(m)
    return _argmax_with_ties(pairs, entropies, rng)


def combined_pair_entropies(
    mm: MbcjModel, weighted: bool = False
) -> tuple[list[tuple[str, str]], np.ndarray]:
    """Per-pair entropy summed over criteria (optionally weighted by the model weights)."""
    pairs = enumerate_pairs(mm.items)
    total = np.zeros(len(pairs))
    for criterion, weight in zip(mm.criteria, mm.weights):
        _, entropies = pair_entropies(mm.models[criterion])
        total += (weight if weighted else 1.0) * entropies
    return pairs, total


def next_pair_combined_entropy(
    mm: MbcjModel, rng: np.random.Generator, weighted: bool = False
) -> tuple[str, str]:
    pairs, total = combined_pair_entropies(mm, weighted=weighted)
    return _argmax_with_ties(pairs, total, rng)


def presentation_order(
    pair: tuple[str, str], rng: np.random.Generator
) -> tuple[str, str]:
    """Randomise which item shows on the left to avoid position bias."""
    a, b = pair
    return (a, b) if rng.random() < 0.5 else (b, a)


def select_pair(
    model: BcjModel | MbcjModel,
    strategy: SelectionStrategy,
    rng: np.random.Generator,
    weighted_combination: bool = False,
) -> tuple[str, str]:
    """Dispatch on the configured strategy; COMBINED_ENTROPY needs a multi-criteria model."""
    if strategy.kind is StrategyKind.COMBINED_ENTROPY:
        if not isinstance(model, MbcjModel):
            raise ValueError("combined-entropy selection requires a multi-criteria model")
        return next_pair_combined_entropy(model, rng, weighted=weighted_combination)
    if strategy.kind is StrategyKind.RANDOM:
        pairs = enumerate_pairs(model.items)
        return pairs[int(rng.integers(len(pairs)))]
    if strategy.kind is StrategyKind.ENTROPY:
        if not isinstance(model, BcjModel):
            raise ValueError("entropy selection applies to a single-criterion model")
        return next_pair_entropy(model, rng)
    raise ValueError(f"unknown strategy {strategy.kind}")
