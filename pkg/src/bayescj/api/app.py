"""HTTP session service wrapping the core engine.

All mutations for one session are serialised through its lock (single-writer
contract); distinct sessions proceed in parallel. Sessions not in memory are
lazily rebuilt from their on-disk audit log. Authentication is a bearer-token
stub: set a token to require `Authorization: Bearer <token>` on every
/sessions route.
"""

from __future__ import annotations

import os
import threading
from dataclasses import dataclass, field

from fastapi import Depends, FastAPI, HTTPException, Query, Request
from fastapi.middleware.cors import CORSMiddleware

from .. import session as sess
from ..selection import SelectionStrategy, StrategyKind, budget_remaining
from ..store import SessionStore, config_to_dict
from . import schemas


@dataclass
class _Runtime:
    state: sess.SessionState
    lock: threading.Lock = field(default_factory=threading.Lock)


class ServiceRegistry:
    """In-memory session runtimes backed by the append-only store."""

    def __init__(self, store: SessionStore):
        self.store = store
        self._runtimes: dict[str, _Runtime] = {}
        self._registry_lock = threading.Lock()

    def create(self, config: sess.SessionConfig) -> sess.SessionState:
        session_id = self.store.create(config)
        state = sess.new_state(config, session_id)
        with self._registry_lock:
            self._runtimes[session_id] = _Runtime(state=state)
        return state

    def get(self, session_id: str) -> _Runtime:
        with self._registry_lock:
            runtime = self._runtimes.get(session_id)
            if runtime is None:
                if not self.store.exists(session_id):
                    raise sess.UnknownSessionError(session_id)
                runtime = _Runtime(state=self.store.load_state(session_id))
                self._runtimes[session_id] = runtime
            return runtime

    def count(self) -> int:
        return len(self.store.list_sessions())


def _strategy_from(payload: schemas.StrategyIn | None) -> SelectionStrategy | None:
    if payload is None:
        return None
    try:
        kind = StrategyKind(payload.kind)
    except ValueError as exc:
        raise sess.InvalidConfigError(f"unknown strategy kind {payload.kind!r}") from exc
    return SelectionStrategy(kind=kind, rng_seed=payload.rng_seed)


def _next_pair_response(
    state: sess.SessionState, judge_id: str, issued: sess.PendingPair | None
) -> schemas.NextPairResponse:
    if issued is None:
        return schemas.NextPairResponse(
            session_id=state.session_id,
            judge_id=judge_id,
            exhausted=True,
            budget_remaining=0,
        )
    return schemas.NextPairResponse(
        session_id=state.session_id,
        judge_id=judge_id,
        exhausted=False,
        pair=list(issued.pair),
        left=issued.left,
        right=issued.right,
        budget_remaining=budget_remaining(state.budget),
    )


def create_app(data_dir: str | None = None, token: str | None = None) -> FastAPI:
    data_dir = data_dir or os.environ.get("BAYESCJ_DATA_DIR", "./bayescj-data")
    token = token if token is not None else os.environ.get("BAYESCJ_TOKEN")
    registry = ServiceRegistry(SessionStore(data_dir))

    app = FastAPI(title="bayescj", version="0.1.0")
    app.state.registry = registry
    app.add_middleware(
        CORSMiddleware,
        allow_origins=["*"],
        allow_methods=["*"],
        allow_headers=["*"],
    )

    def require_token(request: Request) -> None:
        if token is None:
            return
        header = request.headers.get("authorization", "")
        if header != f"Bearer {token}":
            raise HTTPException(status_code=401, detail="missing or invalid bearer token")

    auth = Depends(require_token)

    @app.exception_handler(sess.SessionError)
    async def session_error_handler(request: Request, exc: sess.SessionError):
        from fastapi.responses import JSONResponse

        status = 500
        if isinstance(exc, sess.UnknownSessionError):
            status = 404
        elif isinstance(exc, (sess.StalePairError, sess.BudgetExhaustedError)):
            status = 409
        elif isinstance(exc, (sess.InvalidConfigError, sess.InvalidJudgementError, sess.InvalidLogError)):
            status = 400
        return JSONResponse(
            status_code=status,
            content={"error": type(exc).__name__, "detail": str(exc)},
        )

    @app.get("/healthz", response_model=schemas.HealthResponse)
    def healthz():
        return schemas.HealthResponse(status="ok", sessions=registry.count())

    @app.post(
        "/sessions",
        response_model=schemas.SessionCreatedResponse,
        dependencies=[auth],
        status_code=201,
    )
    def create_session(request: schemas.CreateSessionRequest):
        config = sess.make_config(
            mode=request.mode,
            items=[item.model_dump() for item in request.items],
            criteria=(
                [c.model_dump() for c in request.criteria] if request.criteria else None
            ),
            weights=request.weights,
            strategy=_strategy_from(request.strategy),
            max_comparisons=request.max_comparisons,
            seed=request.seed,
        )
        state = registry.create(config)
        return schemas.SessionCreatedResponse(
            session_id=state.session_id,
            config=schemas.ConfigOut(**config_to_dict(config)),
        )

    @app.get(
        "/sessions/{session_id}/next-pair",
        response_model=schemas.NextPairResponse,
        dependencies=[auth],
    )
    def get_next_pair(session_id: str, judge: str = Query(...)):
        runtime = registry.get(session_id)
        with runtime.lock:
            issued = sess.next_pair(runtime.state, judge)
            return _next_pair_response(runtime.state, judge, issued)

    @app.post(
        "/sessions/{session_id}/judgements",
        response_model=schemas.SubmitJudgementResponse,
        dependencies=[auth],
    )
    def submit_judgement(session_id: str, request: schemas.SubmitJudgementRequest):
        if len(request.pair) != 2:
            raise sess.InvalidJudgementError("pair must list exactly two item ids")
        runtime = registry.get(session_id)
        with runtime.lock:
            judgement = sess.submit_judgement(
                runtime.state,
                judge_id=request.judge_id,
                pair=(request.pair[0], request.pair[1]),
                decisions=request.decisions,
            )
            registry.store.append_judgement(session_id, judgement)
            issued = sess.next_pair(runtime.state, request.judge_id)
            return schemas.SubmitJudgementResponse(
                acknowledged=schemas.JudgementOut(
                    sequence=judgement.sequence,
                    judge_id=judgement.judge_id,
                    pair=list(judgement.pair),
                    decisions=dict(judgement.decisions),
                    wall_time=judgement.wall_time,
                ),
                next=_next_pair_response(runtime.state, request.judge_id, issued),
            )

    @app.get(
        "/sessions/{session_id}/results",
        response_model=schemas.ResultsResponse,
        response_model_exclude_none=True,
        dependencies=[auth],
    )
    def get_results(session_id: str):
        runtime = registry.get(session_id)
        with runtime.lock:
            return sess.results_payload(runtime.state)

    @app.get(
        "/sessions/{session_id}/agreement",
        response_model=schemas.AgreementResponse,
        response_model_exclude_none=True,
        dependencies=[auth],
    )
    def get_agreement(session_id: str, judge: str | None = Query(default=None)):
        runtime = registry.get(session_id)
        with runtime.lock:
            return sess.agreement_payload(runtime.state, judge_id=judge)

    @app.get(
        "/sessions/{session_id}/audit",
        response_model=schemas.AuditResponse,
        response_model_exclude_none=True,
        dependencies=[auth],
    )
    def get_audit(session_id: str, judge: str | None = Query(default=None)):
        runtime = registry.get(session_id)
        with runtime.lock:
            return sess.audit_payload(runtime.state, judge_id=judge)

    return app


app = create_app()
