"""HTTP session service for live slider-feedback elicitation.

Each session is persisted as an append-only JSON-lines event log plus a
belief snapshot; the belief is rebuilt deterministically from (seed,
history) on every feedback, so a crashed or restarted service recovers the
exact same state, and any session can be replayed offline from its log.
"""

from __future__ import annotations

import json
import threading
import uuid
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path

import numpy as np
from fastapi import FastAPI, Request
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse
from fastapi.staticfiles import StaticFiles
from pydantic import BaseModel, ConfigDict

from .belief import Belief, mean_weight, sample_posterior, SamplerSettings, DEFAULT_SAMPLER
from .errors import InvalidInputError, ScaleFeedbackError
from .queries import QueryPolicy, select_query
from .seeding import POSTERIOR_STREAM, SELECTION_STREAM, derive_rng
from .trajectories import Query, Trajectory, TrajectorySet, best_trajectory, load_trajectory_set
from .users import FeedbackRecord, slider_grid

DEFAULT_POSTERIOR_SAMPLES = 100
DEFAULT_SIGMA = 0.35


class ApiError(ScaleFeedbackError):
    def __init__(self, status: int, code: str, message: str):
        super().__init__(message)
        self.status = status
        self.code = code
        self.message = message


class PolicyBody(BaseModel):
    model_config = ConfigDict(extra="forbid")
    kind: str = "info_gain"
    candidate_budget: int = 2000
    seed: int | None = None


class CreateSessionBody(BaseModel):
    model_config = ConfigDict(extra="forbid")
    set_id: str
    policy: PolicyBody = PolicyBody()
    sigma: float = DEFAULT_SIGMA
    epsilon: float = 0.1


class FeedbackBody(BaseModel):
    model_config = ConfigDict(extra="forbid")
    mu: float


def _trajectory_payload(traj: Trajectory) -> dict:
    return traj.to_json()


@dataclass
class Session:
    session_id: str
    set_id: str
    tset: TrajectorySet
    policy: QueryPolicy
    sigma: float
    epsilon: float
    seed: int
    history: list[FeedbackRecord]
    belief: Belief
    pending: Query | None = None
    created: str = ""
    updated: str = ""
    lock: threading.Lock = field(default_factory=threading.Lock)


def _now() -> str:
    return datetime.now(timezone.utc).isoformat()


def rebuild_belief(tset: TrajectorySet, history: list[FeedbackRecord], sigma: float,
                   seed: int, m: int = DEFAULT_POSTERIOR_SAMPLES,
                   sampler: SamplerSettings = DEFAULT_SAMPLER) -> Belief:
    """Belief after ``len(history)`` answers; pure function of its arguments."""
    rng = derive_rng(seed, POSTERIOR_STREAM, len(history))
    return sample_posterior(tset, history, sigma, m, rng, sampler)


def select_session_query(session: Session) -> Query:
    rng = derive_rng(session.seed, SELECTION_STREAM, len(session.history) + 1)
    return select_query(session.belief, session.tset, session.policy, rng)


class SessionStore:
    """Persists sessions under data_dir and restores them after restarts."""

    def __init__(self, data_dir: str | Path, posterior_samples: int = DEFAULT_POSTERIOR_SAMPLES,
                 sampler: SamplerSettings = DEFAULT_SAMPLER):
        self.data_dir = Path(data_dir)
        self.sets_dir = self.data_dir / "sets"
        self.sessions_dir = self.data_dir / "sessions"
        self.sets_dir.mkdir(parents=True, exist_ok=True)
        self.sessions_dir.mkdir(parents=True, exist_ok=True)
        self.posterior_samples = posterior_samples
        self.sampler = sampler
        self.sets: dict[str, TrajectorySet] = {}
        self.sessions: dict[str, Session] = {}
        self._registry_lock = threading.Lock()
        for path in sorted(self.sets_dir.glob("*.jsonl")):
            self.sets[path.stem] = load_trajectory_set(path)

    def register_set(self, set_id: str, tset: TrajectorySet) -> None:
        self.sets[set_id] = tset

    def log_path(self, session_id: str) -> Path:
        return self.sessions_dir / f"{session_id}.jsonl"

    def _append_event(self, session_id: str, event: dict) -> None:
        with self.log_path(session_id).open("a", encoding="utf-8") as fh:
            fh.write(json.dumps(event) + "\n")

    def _write_snapshot(self, session: Session) -> None:
        snapshot_path = self.sessions_dir / f"{session.session_id}.belief.json"
        snapshot_path.write_text(json.dumps(session.belief.to_snapshot()), encoding="utf-8")

    def create_session(self, body: CreateSessionBody) -> Session:
        if body.set_id not in self.sets:
            raise ApiError(404, "unknown_set", f"no trajectory set registered as {body.set_id!r}")
        if not 0.0 < body.epsilon <= 1.0:
            raise ApiError(422, "bad_epsilon", "epsilon must be in (0, 1]")
        if body.sigma <= 0.0:
            raise ApiError(422, "bad_sigma", "sigma must be positive")
        try:
            policy = QueryPolicy(kind=body.policy.kind,
                                 candidate_budget=body.policy.candidate_budget,
                                 epsilon=body.epsilon, seed=body.policy.seed)
        except InvalidInputError as exc:
            raise ApiError(422, "bad_policy", str(exc)) from exc
        seed = policy.seed if policy.seed is not None \
            else int(np.random.SeedSequence().generate_state(1)[0])
        session_id = uuid.uuid4().hex[:12]
        tset = self.sets[body.set_id]
        belief = rebuild_belief(tset, [], body.sigma, seed,
                                self.posterior_samples, self.sampler)
        session = Session(
            session_id=session_id, set_id=body.set_id, tset=tset, policy=policy,
            sigma=body.sigma, epsilon=body.epsilon, seed=seed, history=[],
            belief=belief, created=_now(), updated=_now(),
        )
        with self._registry_lock:
            self.sessions[session_id] = session
        self._append_event(session_id, {
            "type": "created", "session_id": session_id, "set_id": body.set_id,
            "policy": {"kind": policy.kind, "candidate_budget": policy.candidate_budget},
            "sigma": body.sigma, "epsilon": body.epsilon, "seed": seed,
            "posterior_samples": self.posterior_samples, "at": session.created,
        })
        self._write_snapshot(session)
        return session

    def get_session(self, session_id: str) -> Session:
        with self._registry_lock:
            session = self.sessions.get(session_id)
        if session is None:
            session = self._restore(session_id)
        if session is None:
            raise ApiError(404, "unknown_session", f"no session {session_id!r}")
        return session

    def _restore(self, session_id: str) -> Session | None:
        """Rebuild a session from its event log (used after a restart)."""
        path = self.log_path(session_id)
        if not path.exists():
            return None
        state = replay_events(_read_events(path), self.sets,
                              posterior_samples=self.posterior_samples,
                              sampler=self.sampler)
        with self._registry_lock:
            # two requests may race to restore; the first insert wins so all
            # callers share one session object (and one lock)
            existing = self.sessions.get(session_id)
            if existing is not None:
                return existing
            self.sessions[session_id] = state
        return state

    def issue_query(self, session: Session) -> Query:
        with session.lock:
            if session.pending is None:
                session.pending = select_session_query(session)
                session.updated = _now()
                self._append_event(session.session_id, {
                    "type": "query", "iteration": len(session.history) + 1,
                    "p_id": session.pending.p_id, "q_id": session.pending.q_id,
                    "at": session.updated,
                })
            return session.pending

    def submit_feedback(self, session: Session, mu: float) -> dict:
        with session.lock:
            if session.pending is None:
                raise ApiError(409, "no_pending_query",
                               "no query awaiting feedback; fetch the next query first")
            grid = slider_grid(session.epsilon)
            idx = int(np.argmin(np.abs(grid - mu)))
            if abs(grid[idx] - mu) > 1e-9:
                raise ApiError(422, "off_grid",
                               f"mu={mu} is not on the slider grid "
                               f"{[round(float(g), 10) for g in grid]}")
            record = FeedbackRecord(query=session.pending, mu=float(grid[idx]),
                                    epsilon=session.epsilon)
            session.history.append(record)
            session.belief = rebuild_belief(session.tset, session.history, session.sigma,
                                            session.seed, self.posterior_samples, self.sampler)
            session.pending = None
            session.updated = _now()
            self._append_event(session.session_id, {
                "type": "feedback", "iteration": len(session.history),
                "mu": record.mu, "at": session.updated,
            })
            self._write_snapshot(session)
            estimate = mean_weight(session.belief)
            return {
                "iteration": len(session.history),
                "w_hat": [float(x) for x in estimate.w_hat],
                "alpha_hat": estimate.alpha_hat,
            }


def _read_events(path: Path) -> list[dict]:
    events = []
    with path.open("r", encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if line:
                events.append(json.loads(line))
    return events


def replay_events(events: list[dict], sets: dict[str, TrajectorySet],
                  posterior_samples: int = DEFAULT_POSTERIOR_SAMPLES,
                  sampler: SamplerSettings = DEFAULT_SAMPLER) -> Session:
    """Reconstruct a session purely from its event log.

    The belief comes out identical to the live service's because posterior
    rebuilds are a pure function of (seed, history length, records).
    """
    if not events or events[0].get("type") != "created":
        raise InvalidInputError("event log must start with a 'created' event")
    head = events[0]
    set_id = head["set_id"]
    if set_id not in sets:
        raise InvalidInputError(f"unknown trajectory set {set_id!r} in event log")
    tset = sets[set_id]
    policy = QueryPolicy(kind=head["policy"]["kind"],
                         candidate_budget=head["policy"]["candidate_budget"],
                         epsilon=head["epsilon"], seed=head["seed"])
    history: list[FeedbackRecord] = []
    pending: Query | None = None
    for event in events[1:]:
        if event["type"] == "query":
            pending = Query(event["p_id"], event["q_id"])
        elif event["type"] == "feedback":
            if pending is None:
                raise InvalidInputError("feedback event without a preceding query event")
            history.append(FeedbackRecord(query=pending, mu=float(event["mu"]),
                                          epsilon=head["epsilon"]))
            pending = None
    m = int(head.get("posterior_samples", posterior_samples))
    belief = rebuild_belief(tset, history, head["sigma"], head["seed"], m, sampler)
    return Session(
        session_id=head["session_id"], set_id=set_id, tset=tset, policy=policy,
        sigma=head["sigma"], epsilon=head["epsilon"], seed=head["seed"],
        history=history, belief=belief, pending=pending,
        created=head.get("at", ""), updated=_now(),
    )


def replay_session_log(log_path: str | Path, sets: dict[str, TrajectorySet],
                       posterior_samples: int = DEFAULT_POSTERIOR_SAMPLES,
                       sampler: SamplerSettings = DEFAULT_SAMPLER) -> Session:
    return replay_events(_read_events(Path(log_path)), sets,
                         posterior_samples=posterior_samples, sampler=sampler)


def create_app(data_dir: str | Path, posterior_samples: int = DEFAULT_POSTERIOR_SAMPLES,
               sampler: SamplerSettings = DEFAULT_SAMPLER,
               frontend_dir: str | Path | None = None) -> FastAPI:
    """Build the service; state lives in ``data_dir`` (sets/ and sessions/)."""
    app = FastAPI(title="scalefb session service")
    store = SessionStore(data_dir, posterior_samples=posterior_samples, sampler=sampler)
    app.state.store = store

    @app.exception_handler(ApiError)
    async def api_error_handler(request: Request, exc: ApiError):
        return JSONResponse(status_code=exc.status,
                            content={"code": exc.code, "message": exc.message})

    @app.exception_handler(RequestValidationError)
    async def validation_handler(request: Request, exc: RequestValidationError):
        return JSONResponse(status_code=422,
                            content={"code": "validation_error", "message": str(exc.errors())})

    @app.get("/sets")
    def list_sets():
        return {
            "sets": [
                {"set_id": set_id, "dimension": tset.dimension, "size": len(tset)}
                for set_id, tset in sorted(store.sets.items())
            ]
        }

    @app.post("/sessions")
    def create_session(body: CreateSessionBody):
        session = store.create_session(body)
        return {"session_id": session.session_id}

    @app.get("/sessions/{session_id}/query")
    def next_query(session_id: str):
        session = store.get_session(session_id)
        query = store.issue_query(session)
        return {
            "query": {"p": query.p_id, "q": query.q_id},
            "trajectories": [
                _trajectory_payload(session.tset[query.p_id]),
                _trajectory_payload(session.tset[query.q_id]),
            ],
            "epsilon": session.epsilon,
            "iteration": len(session.history) + 1,
        }

    @app.post("/sessions/{session_id}/feedback")
    def submit_feedback(session_id: str, body: FeedbackBody):
        session = store.get_session(session_id)
        return store.submit_feedback(session, body.mu)

    @app.get("/sessions/{session_id}/estimate")
    def get_estimate(session_id: str):
        session = store.get_session(session_id)
        with session.lock:
            estimate = mean_weight(session.belief)
            best = best_trajectory(estimate.w_hat, session.tset)
            return {
                "w_hat": [float(x) for x in estimate.w_hat],
                "alpha_hat": estimate.alpha_hat,
                "iteration": len(session.history),
                "best_trajectory": _trajectory_payload(best),
            }

    if frontend_dir is not None:
        app.mount("/", StaticFiles(directory=str(frontend_dir), html=True), name="ui")
    return app
