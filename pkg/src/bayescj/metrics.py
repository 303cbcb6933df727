"""Evaluation and transparency metrics.

Normalised Kendall tau rank distance (fraction of discordant pairs), the
mode/expected agreement percentages with their 0.5 quartile-threshold
semantics, per-pair agreement heatmaps, and the Bradley-Terry
minorisation-maximisation baseline used by traditional CJ.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable, Sequence

import numpy as np

from .posterior import PairPosterior, posterior_mean, posterior_mode
from .ranking import BcjModel, MbcjModel, TieBreak, _break_ties

HOLISTIC_KEY = "holistic"

# Boundary clamp for Bradley-Terry strengths: with zero-win items the MM fixed
# point sits on the simplex boundary; the floor keeps strengths positive
# without affecting interior solutions.
_STRENGTH_FLOOR = 1e-12


@dataclass(frozen=True)
class TauDistance:
    discordant_pairs: int
    total_pairs: int
    normalised: float


def kendall_tau_distance(a: Sequence[str], b: Sequence[str]) -> TauDistance:
    """Fraction of item pairs ordered oppositely in the two rankings."""
    if set(a) != set(b) or len(a) != len(set(a)) or len(b) != len(set(b)):
        raise ValueError("rankings must be permutations of the same item set")
    position_b = {item: i for i, item in enumerate(b)}
    seq = [position_b[item] for item in a]
    n = len(seq)
    discordant = sum(
        1 for i, j in combinations(range(n), 2) if seq[i] > seq[j]
    )
    total = n * (n - 1) // 2
    return TauDistance(
        discordant_pairs=discordant,
        total_pairs=total,
        normalised=discordant / total if total else 0.0,
    )


def expected_agreement(p: PairPosterior) -> float:
    """EAP: rescaled distance of the posterior mean from the undecided point 0.5.

    >= 0.5 exactly when the mean leaves the (0.25, 0.75) quartile band.
    """
    return 2.0 * abs(posterior_mean(p) - 0.5)


def mode_agreement(p: PairPosterior) -> float:
    """MAP: same rescaling applied to the posterior mode."""
    return 2.0 * abs(posterior_mode(p) - 0.5)


@dataclass
class AgreementMatrix:
    """Upper-triangular MAP/EAP grids over the item set; nan below the diagonal."""

    items: list[str]
    map_values: np.ndarray
    eap_values: np.ndarray


def agreement_heatmap(m: BcjModel) -> AgreementMatrix:
    n = len(m.items)
    map_grid = np.full((n, n), np.nan)
    eap_grid = np.full((n, n), np.nan)
    for i, j in combinations(range(n), 2):
        p = m.posterior_for(m.items[i], m.items[j])
        map_grid[i, j] = mode_agreement(p)
        eap_grid[i, j] = expected_agreement(p)
    return AgreementMatrix(items=list(m.items), map_values=map_grid, eap_values=eap_grid)


def mbcj_agreement_heatmaps(mm: MbcjModel) -> dict[str, AgreementMatrix]:
    """One heatmap per criterion plus a pooled "holistic" one.

    The holistic matrix folds every criterion's win counts into a single
    posterior per pair, the same pooling used when several judges share a
    session.
    """
    out = {c: agreement_heatmap(mm.models[c]) for c in mm.criteria}
    pooled = BcjModel.flat(mm.items)
    for c in mm.criteria:
        for key, post in mm.models[c].posteriors.items():
            current = pooled.posteriors[key]
            pooled.posteriors[key] = PairPosterior(
                current.alpha + (post.alpha - 1.0), current.beta + (post.beta - 1.0)
            )
    out[HOLISTIC_KEY] = agreement_heatmap(pooled)
    return out


class DisconnectedComparisonGraphError(ValueError):
    """Raised when the judged pairs do not connect all items."""

    def __init__(self, components: list[list[str]]):
        self.components = components
        rendered = "; ".join("{" + ", ".join(c) + "}" for c in components)
        super().__init__(f"comparison graph is disconnected: {rendered}")


@dataclass
class BtmScores:
    """Bradley-Terry strengths (positive, summing to 1) with the fit trace."""

    items: list[str]
    strengths: np.ndarray
    iterations: int
    converged: bool
    log_likelihoods: list[float] = field(default_factory=list)


def _win_matrix(judgements: Iterable[tuple[str, str]], items: list[str]) -> np.ndarray:
    index = {item: i for i, item in enumerate(items)}
    w = np.zeros((len(items), len(items)))
    for winner, loser in judgements:
        if winner not in index or loser not in index:
            raise ValueError(f"judgement mentions unknown item: {(winner, loser)}")
        w[index[winner], index[loser]] += 1.0
    return w


def _components(adjacency: np.ndarray, items: list[str]) -> list[list[str]]:
    n = len(items)
    seen = [False] * n
    components = []
    for start in range(n):
        if seen[start]:
            continue
        stack, members = [start], []
        seen[start] = True
        while stack:
            u = stack.pop()
            members.append(items[u])
            for v in np.flatnonzero(adjacency[u]):
                if not seen[v]:
                    seen[v] = True
                    stack.append(int(v))
        components.append(members)
    return components


def btm_log_likelihood(w: np.ndarray, strengths: np.ndarray) -> float:
    """Bradley-Terry log-likelihood sum_ij w_ij ln(p_i / (p_i + p_j))."""
    rows, cols = np.nonzero(w)
    p = np.asarray(strengths, dtype=float)
    return float(np.dot(w[rows, cols], np.log(p[rows]) - np.log(p[rows] + p[cols])))


def btm_fit(
    judgements: Iterable[tuple[str, str]],
    items: Sequence[str],
    tolerance: float = 1e-10,
    max_iterations: int = 10_000,
) -> BtmScores:
    """Fit Bradley-Terry strengths by minorisation-maximisation.

    Iterates p_i <- W_i / sum_{j != i} n_ij / (p_i + p_j) with the old
    strengths on the right, renormalising each step, until the largest
    strength change drops below `tolerance`. The comparison graph must be
    connected; non-convergence is flagged on the result, not raised.
    """
    if tolerance <= 0:
        raise ValueError("tolerance must be positive")
    items = list(items)
    w = _win_matrix(judgements, items)
    n_ij = w + w.T
    components = _components(n_ij > 0, items)
    if len(components) > 1:
        raise DisconnectedComparisonGraphError(components)

    wins = w.sum(axis=1)
    p = np.full(len(items), 1.0 / len(items))
    ll_trace = [btm_log_likelihood(w, p)]
    if len(items) == 1:
        return BtmScores(
            items=items,
            strengths=p,
            iterations=0,
            converged=True,
            log_likelihoods=ll_trace,
        )
    # Connectivity gives every item an opponent, so the denominator stays
    # positive and the update needs no zero guards inside the hot loop.
    rows, cols = np.nonzero(w)
    w_nz = w[rows, cols]
    converged = False
    iterations = 0
    for iterations in range(1, max_iterations + 1):
        denom = (n_ij / (p[:, None] + p[None, :])).sum(axis=1)
        p_new = np.maximum(wins / denom, _STRENGTH_FLOOR)
        p_new /= p_new.sum()
        ll_trace.append(
            float(np.dot(w_nz, np.log(p_new[rows]) - np.log(p_new[rows] + p_new[cols])))
        )
        delta = np.max(np.abs(p_new - p))
        p = p_new
        if delta < tolerance:
            converged = True
            break
    return BtmScores(
        items=items,
        strengths=p,
        iterations=iterations,
        converged=converged,
        log_likelihoods=ll_trace,
    )


@dataclass
class BtmRanking:
    ordered: list[str]
    tie_breaks: list[TieBreak]


def btm_ranking(scores: BtmScores, seed: int = 0) -> BtmRanking:
    """Items by descending strength; exact ties shuffled with the seeded rng."""
    rng = np.random.default_rng(seed)
    keyed = [(-float(s), item) for item, s in zip(scores.items, scores.strengths)]
    ordered, trace = _break_ties(keyed, rng)
    return BtmRanking(ordered=ordered, tie_breaks=trace)
