"""Append-only JSON Lines session log and exact replay.

One file per session, one event per line:
{ts: ISO-8601, session_id, kind, payload}. Replay consumes this format
verbatim and reconstructs the SessionState through the same deterministic
engine transitions, so a replayed state is bit-identical to the live one.
"""

from __future__ import annotations

import json
import os
import warnings
from datetime import datetime, timezone
from pathlib import Path

from .contract import parse_npc_turn, reconcile_turn
from .safety import RiskLexicon
from .session import (
    MiniGameResult,
    Phase,
    PlayerProfile,
    SceneSpec,
    SessionState,
    apply_minigame_result,
    create_session,
    enter_scene,
    exit_session,
    state_digest,
    submit_player_input,
    trigger_safe_mode,
)

EVENT_KINDS = (
    "created",
    "scene",
    "player_input",
    "npc_turn",
    "minigame_start",
    "minigame_result",
    "safe_mode",
    "completed",
    "exited",
)


class StorageError(Exception):
    pass


def make_event(session_id: str, kind: str, payload: dict) -> dict:
    if kind not in EVENT_KINDS:
        raise StorageError(f"unknown event kind {kind!r}")
    return {
        "ts": datetime.now(timezone.utc).isoformat(),
        "session_id": session_id,
        "kind": kind,
        "payload": payload,
    }


class SessionEventLog:
    """Single-session append-only log file."""

    def __init__(self, path: str | Path):
        self.path = Path(path)
        self.path.parent.mkdir(parents=True, exist_ok=True)

    def append(self, event: dict) -> None:
        if event.get("kind") not in EVENT_KINDS:
            raise StorageError(f"unknown event kind {event.get('kind')!r}")
        line = json.dumps(event, ensure_ascii=False, sort_keys=True)
        try:
            with self.path.open("a", encoding="utf-8") as handle:
                handle.write(line + "\n")
                handle.flush()
                os.fsync(handle.fileno())
        except OSError as exc:
            raise StorageError(f"cannot append to {self.path}: {exc}") from exc

    def read(self) -> list:
        return read_events(self.path)


def read_events(path: str | Path) -> list:
    """Read all complete events; a truncated final line is dropped with a
    warning, anything undecodable earlier is corruption and raises."""
    path = Path(path)
    try:
        raw_lines = path.read_text(encoding="utf-8").split("\n")
    except OSError as exc:
        raise StorageError(f"cannot read {path}: {exc}") from exc
    events = []
    for index, line in enumerate(raw_lines):
        if not line.strip():
            continue
        try:
            events.append(json.loads(line))
        except json.JSONDecodeError:
            remainder = [l for l in raw_lines[index + 1 :] if l.strip()]
            if remainder:
                raise StorageError(
                    f"corrupt event at {path}:{index + 1} with later events present"
                )
            warnings.warn(
                f"dropping truncated final event at {path}:{index + 1}",
                stacklevel=2,
            )
            break
    return events


def rebuild_session(events) -> SessionState:
    """Replay a recorded event sequence into a fresh SessionState."""
    state, _ = rebuild_session_with_digests(events)
    return state


def rebuild_session_with_digests(events):
    """Replay, returning the state plus the digest after every event."""
    state = None
    pending_input = None
    digests = []
    for event in events:
        kind = event["kind"]
        payload = event["payload"]
        if kind == "created":
            state = create_session(
                PlayerProfile.from_dict(payload["profile"]),
                pass_threshold=payload["pass_threshold"],
                cooldown_rounds=payload["cooldown_rounds"],
                lexicon=RiskLexicon(phrases=tuple(payload["lexicon"])),
                seed=payload["seed"],
                session_id=event["session_id"],
            )
        elif state is None:
            raise StorageError(f"event {kind!r} before created")
        elif kind == "scene":
            enter_scene(state, SceneSpec.from_dict(payload))
        elif kind == "player_input":
            pending_input = payload["text"]
        elif kind == "npc_turn":
            if pending_input is None:
                raise StorageError("npc_turn event without preceding player_input")
            turn = reconcile_turn(parse_npc_turn(payload["raw"]))
            submit_player_input(state, pending_input, turn)
            pending_input = None
        elif kind == "minigame_start":
            if (
                state.active_minigame is None
                or state.active_minigame.game != payload["game"]
            ):
                raise StorageError("minigame_start disagrees with engine state")
        elif kind == "minigame_result":
            apply_minigame_result(state, MiniGameResult.from_dict(payload))
        elif kind == "safe_mode":
            if state.phase != Phase.SAFE_MODE_TERMINATED:
                trigger_safe_mode(state)
        elif kind == "completed":
            if state.phase != Phase.COMPLETED:
                raise StorageError("completed marker disagrees with engine state")
        elif kind == "exited":
            exit_session(state)
        else:
            raise StorageError(f"unknown event kind {kind!r}")
        digests.append(state_digest(state) if state else "")
    if state is None:
        raise StorageError("no created event found")
    return state, digests


def replay_log(path: str | Path) -> SessionState:
    return rebuild_session(read_events(path))
