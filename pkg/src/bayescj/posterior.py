"""Conjugate Beta-Bernoulli belief over the win bias of an oriented item pair.

Each pair of items under comparison carries a Bernoulli "bias" -- the
probability that the first item of the pair beats the second -- with a Beta
posterior over that bias. Judgements are coin flips: a win for the first item
adds one pseudo-count to alpha, a win for the second adds one to beta. The
prior is always the flat Beta(1, 1).
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np
from scipy import special
from scipy import stats


class JudgementOutcome(Enum):
    """Winner of a single judgement, relative to the pair's orientation."""

    FIRST = "first"
    SECOND = "second"


@dataclass(frozen=True)
class PairPosterior:
    """Beta(alpha, beta) posterior for the bias that the first item beats the second.

    alpha and beta are the flat-prior pseudo-count (1 each) plus the observed
    win counts, so ``alpha + beta - 2`` is the number of judgements recorded
    for the pair.
    """

    alpha: float = 1.0
    beta: float = 1.0

    def __post_init__(self) -> None:
        if not (self.alpha >= 1.0 and self.beta >= 1.0):
            raise ValueError(
                f"Beta counts must both be >= 1, got ({self.alpha}, {self.beta})"
            )

    @property
    def judgements(self) -> int:
        """Number of judgements folded into this posterior."""
        return int(round(self.alpha + self.beta)) - 2

    def flipped(self) -> "PairPosterior":
        """The same belief seen from the opposite pair orientation."""
        return PairPosterior(self.beta, self.alpha)


def update_pair(p: PairPosterior, outcome: JudgementOutcome) -> PairPosterior:
    """Conjugate update: one observed judgement adds one count to the winner's side."""
    if outcome is JudgementOutcome.FIRST:
        return PairPosterior(p.alpha + 1.0, p.beta)
    if outcome is JudgementOutcome.SECOND:
        return PairPosterior(p.alpha, p.beta + 1.0)
    raise TypeError(f"not a JudgementOutcome: {outcome!r}")


def posterior_mean(p: PairPosterior) -> float:
    """Posterior mean of the win bias, alpha / (alpha + beta)."""
    return p.alpha / (p.alpha + p.beta)


def posterior_mode(p: PairPosterior) -> float:
    """Posterior mode (alpha-1)/(alpha+beta-2); 0.5 for the flat Beta(1, 1).

    The flat prior's pdf is uniform so any point is modal; 0.5 keeps the map
    total and symmetric.
    """
    total = p.alpha + p.beta
    if total <= 2.0:
        return 0.5
    return (p.alpha - 1.0) / (total - 2.0)


def beta_entropy(p: PairPosterior) -> float:
    """Differential entropy of the Beta posterior in nats (negative once data arrive).

    ln B(a, b) - (a-1) psi(a) - (b-1) psi(b) + (a+b-2) psi(a+b)
    """
    return float(_entropy_from_counts(np.asarray(p.alpha), np.asarray(p.beta)))


def beta_entropies(alphas: np.ndarray, betas: np.ndarray) -> np.ndarray:
    """Vectorised `beta_entropy` over parallel arrays of counts."""
    a = np.asarray(alphas, dtype=float)
    b = np.asarray(betas, dtype=float)
    return _entropy_from_counts(a, b)


def _entropy_from_counts(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return (
        special.betaln(a, b)
        - (a - 1.0) * special.digamma(a)
        - (b - 1.0) * special.digamma(b)
        + (a + b - 2.0) * special.digamma(a + b)
    )


def posterior_pdf(p: PairPosterior, grid) -> np.ndarray:
    """Beta pdf evaluated pointwise on `grid`; grid values must lie in [0, 1]."""
    g = np.asarray(grid, dtype=float)
    if g.size and (np.min(g) < 0.0 or np.max(g) > 1.0):
        raise ValueError("pdf grid values must lie in [0, 1]")
    return stats.beta.pdf(g, p.alpha, p.beta)
