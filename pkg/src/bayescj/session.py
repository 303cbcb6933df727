"""Judging-session lifecycle, kept transport-free.

A session is its judgement log: model posteriors, budget and rng position are
all a pure fold of the append-only log over the session config, so any state
can be reproduced by replay. The HTTP layer in `bayescj.api` wraps these
functions; the simulation harness drives them headlessly.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from datetime import datetime, timezone

import numpy as np

from . import metrics, ranking, selection
from .posterior import posterior_mode, posterior_pdf
from .ranking import BcjModel, MbcjModel, RankingResult, canonical_pair
from .selection import Budget, SelectionStrategy, StrategyKind

HOLISTIC = "holistic"

# Grid on which per-pair Beta pdfs are sampled for decision-transparency plots.
DECISION_PDF_POINTS = 101

# When enabled, every mutation re-derives the state from the audit log and
# asserts the incremental model matches the fold (slow; tests switch it on).
fold_check_enabled = False


class SessionError(Exception):
    pass


class InvalidConfigError(SessionError):
    pass


class UnknownSessionError(SessionError):
    pass


class StalePairError(SessionError):
    pass


class InvalidJudgementError(SessionError):
    pass


class BudgetExhaustedError(SessionError):
    pass


class InvalidLogError(SessionError):
    pass


@dataclass(frozen=True)
class ItemSpec:
    id: str
    title: str = ""
    content_ref: str = ""


@dataclass(frozen=True)
class CriterionSpec:
    id: str
    label: str = ""


@dataclass(frozen=True)
class SessionConfig:
    mode: str  # "BCJ" | "MBCJ"
    items: tuple[ItemSpec, ...]
    criteria: tuple[CriterionSpec, ...]
    weights: tuple[float, ...]
    strategy: SelectionStrategy
    max_comparisons: int
    seed: int = 0

    @property
    def item_ids(self) -> list[str]:
        return [item.id for item in self.items]

    @property
    def criterion_ids(self) -> list[str]:
        return [c.id for c in self.criteria]


def make_config(
    mode: str,
    items,
    criteria=None,
    weights=None,
    strategy: SelectionStrategy | None = None,
    max_comparisons: int | None = None,
    seed: int = 0,
) -> SessionConfig:
    """Validate and normalise a session config, filling in defaults.

    BCJ sessions get the single implicit holistic criterion; the budget
    defaults to ten comparisons per item and weights to uniform.
    """
    mode = mode.upper()
    if mode not in ("BCJ", "MBCJ"):
        raise InvalidConfigError(f"mode must be BCJ or MBCJ, got {mode!r}")
    item_specs = tuple(
        item if isinstance(item, ItemSpec) else ItemSpec(**item) for item in items
    )
    if len(item_specs) < 2:
        raise InvalidConfigError("a session needs at least 2 items")
    ids = [item.id for item in item_specs]
    if len(set(ids)) != len(ids):
        raise InvalidConfigError("duplicate item id")
    if any(not item.id for item in item_specs):
        raise InvalidConfigError("empty item id")

    if mode == "BCJ":
        if criteria:
            raise InvalidConfigError("BCJ sessions use the implicit holistic criterion")
        criterion_specs = (CriterionSpec(id=HOLISTIC, label="Holistic"),)
    else:
        if not criteria:
            raise InvalidConfigError("MBCJ sessions need at least one criterion")
        criterion_specs = tuple(
            c if isinstance(c, CriterionSpec) else CriterionSpec(**c) for c in criteria
        )
        cids = [c.id for c in criterion_specs]
        if len(set(cids)) != len(cids):
            raise InvalidConfigError("duplicate criterion id")
        if any(not c.id for c in criterion_specs):
            raise InvalidConfigError("empty criterion id")

    if weights is None:
        weights = [1.0 / len(criterion_specs)] * len(criterion_specs)
    weights = tuple(float(w) for w in weights)
    try:
        ranking.validate_weights(weights, len(criterion_specs))
    except ValueError as exc:
        raise InvalidConfigError(str(exc)) from exc

    if strategy is None:
        strategy = SelectionStrategy(
            StrategyKind.COMBINED_ENTROPY if mode == "MBCJ" else StrategyKind.ENTROPY
        )
    if mode == "BCJ" and strategy.kind is StrategyKind.COMBINED_ENTROPY:
        raise InvalidConfigError("combined-entropy selection is only valid for MBCJ")
    if mode == "MBCJ" and strategy.kind is StrategyKind.ENTROPY:
        raise InvalidConfigError("MBCJ sessions use combined-entropy (or random) selection")

    if max_comparisons is None:
        max_comparisons = selection.default_budget(len(item_specs))
    if max_comparisons < 1:
        raise InvalidConfigError("budget must be positive")

    return SessionConfig(
        mode=mode,
        items=item_specs,
        criteria=criterion_specs,
        weights=weights,
        strategy=strategy,
        max_comparisons=int(max_comparisons),
        seed=int(seed),
    )


@dataclass(frozen=True)
class Judgement:
    """One submitted decision: the pair, and the winner per criterion."""

    sequence: int
    judge_id: str
    pair: tuple[str, str]
    decisions: dict[str, str]
    wall_time: str


@dataclass(frozen=True)
class PendingPair:
    pair: tuple[str, str]
    left: str
    right: str
    issued_at: int  # log length when issued


@dataclass
class SessionState:
    session_id: str
    config: SessionConfig
    model: BcjModel | MbcjModel
    audit: list[Judgement] = field(default_factory=list)
    pending: dict[str, PendingPair] = field(default_factory=dict)

    @property
    def budget(self) -> Budget:
        return Budget(max_comparisons=self.config.max_comparisons, used=len(self.audit))

    def bcj_model(self) -> BcjModel:
        assert isinstance(self.model, BcjModel)
        return self.model


def new_state(config: SessionConfig, session_id: str) -> SessionState:
    if config.mode == "BCJ":
        model: BcjModel | MbcjModel = BcjModel.flat(config.item_ids)
    else:
        model = MbcjModel.flat(config.item_ids, config.criterion_ids, config.weights)
    return SessionState(session_id=session_id, config=config, model=model)


def _event_rng(config: SessionConfig, log_length: int) -> np.random.Generator:
    # Selection is a pure function of (config, log position): the issuing rng
    # is derived from the strategy seed and the number of judgements so far,
    # so replaying the log reproduces every choice.
    return np.random.default_rng([config.strategy.rng_seed, log_length])


def next_pair(state: SessionState, judge_id: str) -> PendingPair | None:
    """Issue (or re-issue) the judge's pair; None once the budget is spent."""
    if not judge_id:
        raise InvalidJudgementError("judge id must be non-empty")
    if selection.budget_remaining(state.budget) <= 0:
        return None
    existing = state.pending.get(judge_id)
    if existing is not None:
        return existing
    rng = _event_rng(state.config, len(state.audit))
    pair = selection.select_pair(state.model, state.config.strategy, rng)
    left, right = selection.presentation_order(pair, rng)
    issued = PendingPair(pair=pair, left=left, right=right, issued_at=len(state.audit))
    state.pending[judge_id] = issued
    return issued


def _check_decisions(config: SessionConfig, pair: tuple[str, str], decisions: dict[str, str]) -> None:
    expected = set(config.criterion_ids)
    if set(decisions) != expected:
        raise InvalidJudgementError(
            f"decisions must cover criteria {sorted(expected)}, got {sorted(decisions)}"
        )
    for criterion, winner in decisions.items():
        if winner not in pair:
            raise InvalidJudgementError(
                f"winner {winner!r} for criterion {criterion!r} is not in the judged pair"
            )


def apply_judgement(model: BcjModel | MbcjModel, judgement: Judgement) -> None:
    """Fold one judgement into the model: one posterior update per criterion."""
    a, b = judgement.pair
    for criterion, winner in judgement.decisions.items():
        loser = b if winner == a else a
        target = model if isinstance(model, BcjModel) else model.models[criterion]
        target.record(winner, loser)


def submit_judgement(
    state: SessionState,
    judge_id: str,
    pair,
    decisions: dict[str, str],
    wall_time: str | None = None,
) -> Judgement:
    """Validate against the judge's pending pair, append to the log, update posteriors."""
    if selection.budget_remaining(state.budget) <= 0:
        raise BudgetExhaustedError("comparison budget exhausted")
    pending = state.pending.get(judge_id)
    if pending is None:
        raise StalePairError(f"no pair pending for judge {judge_id!r}")
    submitted = canonical_pair(*pair)
    if submitted != pending.pair:
        raise StalePairError(
            f"submitted pair {submitted} does not match pending {pending.pair}"
        )
    _check_decisions(state.config, submitted, decisions)

    judgement = Judgement(
        sequence=len(state.audit) + 1,
        judge_id=judge_id,
        pair=submitted,
        decisions=dict(decisions),
        wall_time=wall_time or _now_rfc3339(),
    )
    apply_judgement(state.model, judgement)
    state.audit.append(judgement)
    del state.pending[judge_id]

    if fold_check_enabled:
        refolded = replay(state.audit, state.config, session_id=state.session_id)
        assert _posterior_counts(refolded.model) == _posterior_counts(state.model), (
            "incremental model diverged from log fold"
        )
    return judgement


def _now_rfc3339() -> str:
    return datetime.now(timezone.utc).isoformat().replace("+00:00", "Z")


def replay(audit_log, config: SessionConfig, session_id: str = "replayed") -> SessionState:
    """Rebuild a session from its log; rejects malformed or gapped logs."""
    state = new_state(config, session_id)
    item_ids = set(config.item_ids)
    for position, judgement in enumerate(audit_log, start=1):
        if judgement.sequence != position:
            raise InvalidLogError(
                f"sequence gap: expected {position}, got {judgement.sequence}"
            )
        a, b = judgement.pair
        if a not in item_ids or b not in item_ids or canonical_pair(a, b) != (a, b):
            raise InvalidLogError(f"entry {position} has invalid pair {judgement.pair}")
        try:
            _check_decisions(config, judgement.pair, judgement.decisions)
        except InvalidJudgementError as exc:
            raise InvalidLogError(f"entry {position}: {exc}") from exc
        if position > config.max_comparisons:
            raise InvalidLogError("log exceeds the session budget")
        apply_judgement(state.model, judgement)
        state.audit.append(judgement)
    return state


def _posterior_counts(model: BcjModel | MbcjModel) -> dict:
    if isinstance(model, BcjModel):
        return {k: (p.alpha, p.beta) for k, p in model.posteriors.items()}
    return {
        c: {k: (p.alpha, p.beta) for k, p in model.models[c].posteriors.items()}
        for c in model.criteria
    }


def session_ranking(state: SessionState) -> RankingResult:
    if isinstance(state.model, BcjModel):
        return ranking.overall_ranking(state.model, seed=state.config.seed)
    return ranking.mbcj_overall_ranking(state.model, seed=state.config.seed)


def _density_list(d: ranking.RankDensity) -> list[float]:
    return [float(x) for x in d.probabilities]


def _matrix_rows(grid: np.ndarray) -> list[list[float | None]]:
    # Row-major with nulls on and below the diagonal.
    return [[None if np.isnan(v) else float(v) for v in row] for row in grid]


def _agreement_entry(matrix: metrics.AgreementMatrix) -> dict:
    return {
        "items": matrix.items,
        "map": _matrix_rows(matrix.map_values),
        "eap": _matrix_rows(matrix.eap_values),
    }


def agreement_payload(state: SessionState, judge_id: str | None = None) -> dict:
    """MAP/EAP matrices; optionally restricted to one judge's judgements."""
    if judge_id is None:
        model = state.model
    else:
        filtered = [j for j in state.audit if j.judge_id == judge_id]
        renumbered = [replace(j, sequence=i) for i, j in enumerate(filtered, start=1)]
        model = replay(renumbered, state.config).model
    if isinstance(model, BcjModel):
        matrices = {HOLISTIC: metrics.agreement_heatmap(model)}
    else:
        matrices = metrics.mbcj_agreement_heatmaps(model)
    return {
        "session_id": state.session_id,
        "judge_id": judge_id,
        "matrices": {name: _agreement_entry(m) for name, m in matrices.items()},
    }


def _decision_pdfs(model: BcjModel) -> list[dict]:
    grid = np.linspace(0.0, 1.0, DECISION_PDF_POINTS)
    out = []
    for pair in selection.enumerate_pairs(model.items):
        post = model.posteriors[pair]
        out.append(
            {
                "pair": list(pair),
                "alpha": float(post.alpha),
                "beta": float(post.beta),
                "grid": [float(x) for x in grid],
                "pdf": [float(x) for x in posterior_pdf(post, grid)],
                "mode": float(posterior_mode(post)),
            }
        )
    return out


def results_payload(state: SessionState) -> dict:
    """Full transparency payload: ordering, densities, radar, agreement, pair pdfs."""
    config = state.config
    result = session_ranking(state)
    titles = {item.id: item.title for item in config.items}

    entries = []
    for position, item_id in enumerate(result.ordered, start=1):
        density = result.densities[item_id]
        entry: dict = {
            "rank": position,
            "item_id": item_id,
            "title": titles[item_id],
            "expected_rank": float(density.expected_rank),
            "density": _density_list(density),
        }
        if isinstance(state.model, MbcjModel):
            per_criterion = {
                c: ranking.rank_density_exact(state.model.models[c], item_id)
                for c in state.model.criteria
            }
            entry["criterion_densities"] = {
                c: _density_list(d) for c, d in per_criterion.items()
            }
            entry["criterion_expected_ranks"] = {
                c: float(d.expected_rank) for c, d in per_criterion.items()
            }
        entries.append(entry)

    payload: dict = {
        "session_id": state.session_id,
        "mode": config.mode,
        "items": [
            {"id": item.id, "title": item.title, "content_ref": item.content_ref}
            for item in config.items
        ],
        "budget": {
            "max_comparisons": config.max_comparisons,
            "used": len(state.audit),
            "remaining": selection.budget_remaining(state.budget),
        },
        "ranking": entries,
        "tie_breaks": [
            {"expected_rank": tb.key, "tied": tb.tied, "resolved": tb.resolved}
            for tb in result.tie_breaks
        ],
        "agreement": agreement_payload(state)["matrices"],
    }
    if isinstance(state.model, MbcjModel):
        payload["criteria"] = [
            {"id": c.id, "label": c.label} for c in config.criteria
        ]
        payload["weights"] = [float(w) for w in config.weights]
        radar = {
            item_id: ranking.radar_summary(state.model, item_id)
            for item_id in config.item_ids
        }
        payload["radar"] = {
            item_id: {
                "per_criterion": {c: float(v) for c, v in r.per_criterion.items()},
                "combined": float(r.combined),
            }
            for item_id, r in radar.items()
        }
        payload["decision_pdfs"] = {
            c: _decision_pdfs(state.model.models[c]) for c in state.model.criteria
        }
    else:
        payload["criteria"] = [{"id": HOLISTIC, "label": "Holistic"}]
        payload["decision_pdfs"] = {HOLISTIC: _decision_pdfs(state.model)}
    return payload


def audit_payload(state: SessionState, judge_id: str | None = None) -> dict:
    entries = [
        {
            "sequence": j.sequence,
            "judge_id": j.judge_id,
            "pair": list(j.pair),
            "decisions": dict(j.decisions),
            "wall_time": j.wall_time,
        }
        for j in state.audit
        if judge_id is None or j.judge_id == judge_id
    ]
    return {"session_id": state.session_id, "judge_id": judge_id, "entries": entries}
