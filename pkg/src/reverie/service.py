"""HTTP API over the session engine.

Synchronous turn handling: the game is strictly turn-based, so each request
drives the provider and engine inline and blocks for the bounded provider
timeout. Sessions persist as one JSONL log each under data_dir/sessions/;
an instance restarted mid-session resumes any session from its log.
"""

from __future__ import annotations

import csv
import threading
import uuid
from collections import OrderedDict
from pathlib import Path
from typing import Optional

from fastapi import FastAPI, Request
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse
from pydantic import BaseModel

from .agents.providers import HttpProvider, ProviderError
from .config import EngineConfig
from .contract import ContractError
from .minigames import IncompleteForm, OutOfOrderEvent
from .runtime import SessionRuntime
from .session import (
    EmptyInput,
    GameMismatch,
    InvalidProfile,
    PlayerProfile,
    WrongPhase,
)
from .store import SessionEventLog, StorageError, read_events, rebuild_session

DEDUP_WINDOW = 100


class ProfileIn(BaseModel):
    age: int
    gender: str
    identity: str
    stressor_text: str
    seed: Optional[int] = None


class TurnIn(BaseModel):
    text: str
    request_id: Optional[str] = None


class MiniGameEventIn(BaseModel):
    game: str
    event_kind: str
    timestamp: Optional[float] = None
    path: Optional[list] = None
    form: Optional[dict] = None
    request_id: Optional[str] = None


class VasIn(BaseModel):
    value: float


class SessionEntry:
    def __init__(self, runtime: SessionRuntime):
        self.runtime = runtime
        self.lock = threading.Lock()
        self.dedup: OrderedDict = OrderedDict()

    def cached(self, request_id: Optional[str]):
        if request_id is None:
            return None
        return self.dedup.get(request_id)

    def remember(self, request_id: Optional[str], response: dict) -> None:
        if request_id is None:
            return
        self.dedup[request_id] = response
        while len(self.dedup) > DEDUP_WINDOW:
            self.dedup.popitem(last=False)


class ApiError(Exception):
    def __init__(self, status_code: int, detail: str):
        self.status_code = status_code
        self.detail = detail


def create_app(config: EngineConfig, provider=None) -> FastAPI:
    app = FastAPI(title="reverie", docs_url=None, redoc_url=None)
    provider = provider if provider is not None else HttpProvider(config.provider)
    sessions: dict = {}
    sessions_guard = threading.Lock()
    data_dir = Path(config.data_dir)
    vas_guard = threading.Lock()

    def log_path(session_id: str) -> Path:
        return data_dir / "sessions" / f"{session_id}.jsonl"

    def get_entry(session_id: str) -> SessionEntry:
        with sessions_guard:
            entry = sessions.get(session_id)
            if entry is not None:
                return entry
        path = log_path(session_id)
        if not path.is_file():
            raise ApiError(404, f"unknown session {session_id}")
        try:
            state = rebuild_session(read_events(path))
        except StorageError as exc:
            raise ApiError(404, f"session {session_id} cannot be restored: {exc}")
        runtime = SessionRuntime.resume(
            state, config, provider, log=SessionEventLog(path)
        )
        entry = SessionEntry(runtime)
        with sessions_guard:
            return sessions.setdefault(session_id, entry)

    @app.exception_handler(ApiError)
    async def handle_api_error(request: Request, exc: ApiError):
        return JSONResponse(status_code=exc.status_code, content={"detail": exc.detail})

    @app.exception_handler(RequestValidationError)
    async def handle_validation(request: Request, exc: RequestValidationError):
        return JSONResponse(status_code=400, content={"detail": str(exc)})

    def run_guarded(entry: SessionEntry, request_id: Optional[str], action):
        with entry.lock:
            cached = entry.cached(request_id)
            if cached is not None:
                return cached
            try:
                response = action()
            except (WrongPhase, GameMismatch) as exc:
                raise ApiError(409, str(exc))
            except (
                ContractError,
                EmptyInput,
                InvalidProfile,
                IncompleteForm,
                OutOfOrderEvent,
                ValueError,
                KeyError,
            ) as exc:
                raise ApiError(400, str(exc))
            except ProviderError as exc:
                raise ApiError(502, str(exc))
            except StorageError as exc:
                raise ApiError(500, str(exc))
            entry.remember(request_id, response)
            return response

    @app.get("/healthz")
    def healthz():
        return {"status": "ok"}

    @app.post("/sessions")
    def create_session_endpoint(body: ProfileIn):
        profile = PlayerProfile(
            age=body.age,
            gender=body.gender,
            identity=body.identity,
            stressor_text=body.stressor_text,
        )
        seed = body.seed if body.seed is not None else uuid.uuid4().int & ((1 << 63) - 1)
        session_id = uuid.uuid4().hex[:16]
        try:
            runtime = SessionRuntime.create(
                profile,
                config,
                provider,
                seed=seed,
                session_id=session_id,
                log=SessionEventLog(log_path(session_id)),
            )
            runtime.open_scene()
        except InvalidProfile as exc:
            raise ApiError(400, str(exc))
        except ProviderError as exc:
            raise ApiError(502, str(exc))
        entry = SessionEntry(runtime)
        with sessions_guard:
            sessions[session_id] = entry
        return {"session_id": session_id}

    @app.get("/sessions/{session_id}")
    def get_session(session_id: str):
        entry = get_entry(session_id)
        with entry.lock:
            return entry.runtime.view()

    @app.post("/sessions/{session_id}/turn")
    def post_turn(session_id: str, body: TurnIn):
        entry = get_entry(session_id)

        def action():
            entry.runtime.submit_text(body.text)
            return entry.runtime.view()

        return run_guarded(entry, body.request_id, action)

    @app.post("/sessions/{session_id}/minigame/event")
    def post_minigame_event(session_id: str, body: MiniGameEventIn):
        entry = get_entry(session_id)
        payload = {"game": body.game, "event_kind": body.event_kind}
        if body.timestamp is not None:
            payload["timestamp"] = body.timestamp
        if body.path is not None:
            payload["path"] = body.path
        if body.form is not None:
            payload["form"] = body.form

        def action():
            outcome = entry.runtime.minigame_event(payload)
            view = entry.runtime.view()
            view["minigame_outcome"] = outcome
            return view

        return run_guarded(entry, body.request_id, action)

    @app.post("/sessions/{session_id}/exit")
    def post_exit(session_id: str):
        entry = get_entry(session_id)

        def action():
            entry.runtime.exit()
            return entry.runtime.view()

        return run_guarded(entry, None, action)

    @app.get("/sessions/{session_id}/transcript")
    def get_transcript(session_id: str):
        entry = get_entry(session_id)
        with entry.lock:
            state = entry.runtime.state
            return {
                "session_id": state.session_id,
                "rounds": [
                    {
                        "round_index": r.round_index,
                        "npc_prompt": r.npc_prompt,
                        "player_input": r.player_input,
                        "npc_reply": r.turn.npc_reply,
                        "score_awarded": r.score_awarded,
                        "minigame_bonus": r.minigame_bonus,
                        "score_corrected": r.turn.score_corrected,
                    }
                    for r in state.transcript
                ],
            }

    @app.post("/sessions/{session_id}/vas")
    def post_vas(session_id: str, body: VasIn):
        # Extension endpoint: daily momentary stress ratings, stored in the
        # same long format the analysis toolkit ingests.
        entry = get_entry(session_id)
        if not 0 <= body.value <= 10:
            raise ApiError(400, "vas value must lie in [0, 10]")
        vas_path = data_dir / "vas.csv"
        with vas_guard:
            day = 1
            if vas_path.is_file():
                with vas_path.open(newline="", encoding="utf-8") as handle:
                    day += sum(
                        1 for row in csv.DictReader(handle) if row["id"] == session_id
                    )
            is_new = not vas_path.is_file()
            with vas_path.open("a", newline="", encoding="utf-8") as handle:
                writer = csv.writer(handle)
                if is_new:
                    writer.writerow(["id", "day", "vas"])
                writer.writerow([session_id, day, body.value])
        return {"session_id": session_id, "day": day, "vas": body.value}

    return app
