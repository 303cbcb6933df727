"""Pydantic request/response models for the session service."""

from __future__ import annotations

from typing import Any, Optional

from pydantic import BaseModel, Field


class ItemIn(BaseModel):
    id: str
    title: str = ""
    content_ref: str = ""


class CriterionIn(BaseModel):
    id: str
    label: str = ""


class StrategyIn(BaseModel):
    kind: str = Field(description="random | entropy | combined_entropy")
    rng_seed: int = 0


class CreateSessionRequest(BaseModel):
    mode: str = Field(description="BCJ | MBCJ")
    items: list[ItemIn]
    criteria: Optional[list[CriterionIn]] = None
    weights: Optional[list[float]] = None
    strategy: Optional[StrategyIn] = None
    max_comparisons: Optional[int] = None
    seed: int = 0


class ConfigOut(BaseModel):
    mode: str
    items: list[ItemIn]
    criteria: list[CriterionIn]
    weights: list[float]
    strategy: StrategyIn
    max_comparisons: int
    seed: int


class SessionCreatedResponse(BaseModel):
    session_id: str
    config: ConfigOut


class NextPairResponse(BaseModel):
    session_id: str
    judge_id: str
    exhausted: bool
    pair: Optional[list[str]] = None
    left: Optional[str] = None
    right: Optional[str] = None
    budget_remaining: int


class SubmitJudgementRequest(BaseModel):
    judge_id: str
    pair: list[str]
    decisions: dict[str, str] = Field(
        description="criterion id -> winning item id; BCJ uses the 'holistic' key"
    )


class JudgementOut(BaseModel):
    sequence: int
    judge_id: str
    pair: list[str]
    decisions: dict[str, str]
    wall_time: str


class SubmitJudgementResponse(BaseModel):
    acknowledged: JudgementOut
    next: NextPairResponse


class BudgetOut(BaseModel):
    max_comparisons: int
    used: int
    remaining: int


class RankedItemOut(BaseModel):
    rank: int
    item_id: str
    title: str
    expected_rank: float
    density: list[float]
    criterion_densities: Optional[dict[str, list[float]]] = None
    criterion_expected_ranks: Optional[dict[str, float]] = None


class TieBreakOut(BaseModel):
    expected_rank: float
    tied: list[str]
    resolved: list[str]


class AgreementMatrixOut(BaseModel):
    items: list[str]
    map: list[list[Optional[float]]]
    eap: list[list[Optional[float]]]


class RadarOut(BaseModel):
    per_criterion: dict[str, float]
    combined: float


class DecisionPdfOut(BaseModel):
    pair: list[str]
    alpha: float
    beta: float
    grid: list[float]
    pdf: list[float]
    mode: float


class ResultsResponse(BaseModel):
    session_id: str
    mode: str
    items: list[dict[str, Any]]
    budget: BudgetOut
    ranking: list[RankedItemOut]
    tie_breaks: list[TieBreakOut]
    agreement: dict[str, AgreementMatrixOut]
    criteria: list[CriterionIn]
    weights: Optional[list[float]] = None
    radar: Optional[dict[str, RadarOut]] = None
    decision_pdfs: dict[str, list[DecisionPdfOut]]


class AgreementResponse(BaseModel):
    session_id: str
    judge_id: Optional[str] = None
    matrices: dict[str, AgreementMatrixOut]


class AuditResponse(BaseModel):
    session_id: str
    judge_id: Optional[str] = None
    entries: list[JudgementOut]


class HealthResponse(BaseModel):
    status: str
    sessions: int
