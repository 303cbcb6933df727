"""On-disk session persistence: a config document plus an append-only log.

Each session lives in its own directory as `config.json` and `audit.jsonl`
(one UTF-8 JSON object per judgement, LF-terminated). The log is the state:
loading a session replays it from the flat prior.
"""

from __future__ import annotations

import json
import uuid
from pathlib import Path

from .selection import SelectionStrategy, StrategyKind
from .session import (
    CriterionSpec,
    InvalidLogError,
    ItemSpec,
    Judgement,
    SessionConfig,
    SessionState,
    UnknownSessionError,
    replay,
)

CONFIG_FILE = "config.json"
AUDIT_FILE = "audit.jsonl"


def config_to_dict(config: SessionConfig) -> dict:
    return {
        "mode": config.mode,
        "items": [
            {"id": i.id, "title": i.title, "content_ref": i.content_ref}
            for i in config.items
        ],
        "criteria": [{"id": c.id, "label": c.label} for c in config.criteria],
        "weights": list(config.weights),
        "strategy": {
            "kind": config.strategy.kind.value,
            "rng_seed": config.strategy.rng_seed,
        },
        "max_comparisons": config.max_comparisons,
        "seed": config.seed,
    }


def config_from_dict(doc: dict) -> SessionConfig:
    return SessionConfig(
        mode=doc["mode"],
        items=tuple(ItemSpec(**i) for i in doc["items"]),
        criteria=tuple(CriterionSpec(**c) for c in doc["criteria"]),
        weights=tuple(float(w) for w in doc["weights"]),
        strategy=SelectionStrategy(
            kind=StrategyKind(doc["strategy"]["kind"]),
            rng_seed=int(doc["strategy"]["rng_seed"]),
        ),
        max_comparisons=int(doc["max_comparisons"]),
        seed=int(doc["seed"]),
    )


def judgement_to_dict(j: Judgement) -> dict:
    return {
        "sequence": j.sequence,
        "judge_id": j.judge_id,
        "pair": list(j.pair),
        "decisions": dict(j.decisions),
        "wall_time": j.wall_time,
    }


def judgement_from_dict(doc: dict) -> Judgement:
    return Judgement(
        sequence=int(doc["sequence"]),
        judge_id=doc["judge_id"],
        pair=(doc["pair"][0], doc["pair"][1]),
        decisions=dict(doc["decisions"]),
        wall_time=doc["wall_time"],
    )


class SessionStore:
    def __init__(self, root: Path | str):
        # The root directory is created on first write, not here, so merely
        # constructing a store (e.g. importing the service app) touches nothing.
        self.root = Path(root)

    def _dir(self, session_id: str) -> Path:
        return self.root / session_id

    def create(self, config: SessionConfig, session_id: str | None = None) -> str:
        session_id = session_id or uuid.uuid4().hex
        directory = self._dir(session_id)
        directory.mkdir(parents=True, exist_ok=False)
        doc = {"session_id": session_id, **config_to_dict(config)}
        with open(directory / CONFIG_FILE, "w", encoding="utf-8") as f:
            json.dump(doc, f, indent=2)
            f.write("\n")
        (directory / AUDIT_FILE).touch()
        return session_id

    def append_judgement(self, session_id: str, judgement: Judgement) -> None:
        path = self._dir(session_id) / AUDIT_FILE
        if not path.exists():
            raise UnknownSessionError(session_id)
        with open(path, "a", encoding="utf-8") as f:
            f.write(json.dumps(judgement_to_dict(judgement)) + "\n")

    def exists(self, session_id: str) -> bool:
        return (self._dir(session_id) / CONFIG_FILE).exists()

    def list_sessions(self) -> list[str]:
        if not self.root.exists():
            return []
        return sorted(
            p.name for p in self.root.iterdir() if (p / CONFIG_FILE).exists()
        )

    def load_config(self, session_id: str) -> SessionConfig:
        path = self._dir(session_id) / CONFIG_FILE
        if not path.exists():
            raise UnknownSessionError(session_id)
        with open(path, encoding="utf-8") as f:
            return config_from_dict(json.load(f))

    def load_audit(self, session_id: str) -> list[Judgement]:
        path = self._dir(session_id) / AUDIT_FILE
        if not path.exists():
            raise UnknownSessionError(session_id)
        entries = []
        with open(path, encoding="utf-8") as f:
            for line_no, line in enumerate(f, start=1):
                line = line.strip()
                if not line:
                    continue
                try:
                    entries.append(judgement_from_dict(json.loads(line)))
                except (json.JSONDecodeError, KeyError) as exc:
                    raise InvalidLogError(
                        f"{path} line {line_no}: malformed judgement"
                    ) from exc
        return entries

    def load_state(self, session_id: str) -> SessionState:
        """Replay the stored log into a live state."""
        config = self.load_config(session_id)
        audit = self.load_audit(session_id)
        return replay(audit, config, session_id=session_id)
