"""Batch persona-driven session simulation, fully offline.

A seeded synthetic provider plays the NPC side and a persona script plays
the player side, so whole-session behavior (scores, mini-games, safety
terminations, event logs) can be exercised and measured deterministically:
equal seeds produce byte-identical summaries and state digests.
"""

from __future__ import annotations

import hashlib
import json
import random
from importlib import resources
from pathlib import Path

from .agents.providers import ScriptedProvider
from .config import EngineConfig
from .contract import ScoreComponents, compute_round_score
from .minigames import match3_find_chain
from .runtime import SessionRuntime
from .session import Phase, PlayerProfile, state_digest
from .store import SessionEventLog, read_events, rebuild_session

MAX_ROUNDS = 60
HIGH_RISK_ROUND = 3
GATE_FLAG_ROUND = 4

# Deterministic 3-cycle breathing timeline (press 11 s, exhale 8 s).
BREATHING_TIMELINE = (
    ("press", 0.0), ("release", 11.0), ("press", 19.0), ("release", 30.0),
    ("press", 38.0), ("release", 49.0), ("tick", 57.0),
)

GROUNDING_FORM = {
    "see": ["a window", "a mug", "a plant", "a notebook", "a lamp"],
    "touch": ["the desk", "a sweater", "cold keys", "rough paper"],
    "hear": ["birdsong", "distant traffic", "a fan"],
    "smell": ["coffee", "rain on pavement"],
    "taste": ["mint tea"],
}

_PLAYER_LINES = (
    "I keep telling myself it will all collapse, but writing it down it sounds extreme.",
    "Maybe the thought that I always fail is not actually true every time.",
    "I noticed I was assuming the worst again; a smaller first step could work.",
    "Talking it through helps; the deadline is hard but not impossible.",
    "I could ask for help tomorrow instead of hiding the problem.",
    "The plan for tonight is one chapter, not the whole book.",
)

_STYLE_QUALITY = {
    # (start level, ramp per round, ceiling, perfunctory probability)
    "engaged": (3, 0.5, 5, 0.02),
    "slow_starter": (1, 0.4, 5, 0.05),
    "distracted": (1, 0.2, 3, 0.15),
    "high_risk": (2, 0.4, 4, 0.05),
    "gate_flagged": (2, 0.4, 4, 0.05),
}

_MINIGAME_PROBABILITY = {"engaged": 0.15, "slow_starter": 0.2, "distracted": 0.3,
                         "high_risk": 0.2, "gate_flagged": 0.2}


class SimulatedProvider(ScriptedProvider):
    """Synthesizes plausible NPC turns from a seeded generator.

    Scene and image requests fall through to the deterministic scripted
    fixtures; turn requests invent scoring components by persona style,
    with a small chance of a wrong reported score so the local
    recomputation path sees real corrections.
    """

    def __init__(self, rng: random.Random, style: str = "engaged"):
        super().__init__([])
        self.rng = rng
        self.style = style
        self.turn_index = 0

    def complete(self, messages, temperature=None, kind="chat") -> str:
        if kind == "scene":
            return super().complete(messages, temperature, kind)
        self.requests.append({"kind": kind, "messages": [dict(m) for m in messages]})
        self.turn_index += 1
        rng = self.rng

        if self.style == "gate_flagged" and self.turn_index == GATE_FLAG_ROUND:
            return json.dumps(
                {
                    "npc_reply": (
                        "I am worried about what you just shared. Please pause the "
                        "game and reach out to a local hospital or mental health "
                        "service; you deserve direct support right now."
                    ),
                    "safety_gate": 0,
                    "difficulty_factor": 1.0,
                    "penalty_score": 1,
                    "Ct": 0,
                    "Et": 0,
                    "Pt": 0,
                    "round_score": 0,
                    "mini_game_call": "none",
                    "safe_mode": True,
                }
            )

        start, ramp, ceiling, perfunctory_p = _STYLE_QUALITY[self.style]
        level = min(ceiling, start + ramp * (self.turn_index - 1))
        def sample_level():
            return max(0, min(5, int(round(level + rng.uniform(-1, 1)))))

        penalty = 0 if rng.random() < perfunctory_p else 1
        components = ScoreComponents(
            safety_gate=1,
            difficulty_factor=rng.choice((0.8, 1.0, 1.2)),
            penalty_score=penalty,
            ct=sample_level(),
            et=sample_level(),
            pt=2 if self.turn_index == 1 else sample_level(),
        )
        true_score = compute_round_score(components)
        reported = true_score if rng.random() > 0.1 else max(0.0, true_score - 1)

        call = "none"
        if rng.random() < _MINIGAME_PROBABILITY[self.style]:
            call = rng.choice(("breathing", "match3", "five_senses"))
        reply = rng.choice(
            (
                "That sounds heavy, and you are carrying it honestly. What thought showed up first?",
                "Thank you for staying with this. Which part feels most out of your control?",
                "You noticed the thought instead of obeying it; that matters. What would a kinder reading be?",
                "Let us slow down together. What is one small thing you could try tonight?",
            )
        )
        record = {
            "npc_reply": reply,
            "safety_gate": 1,
            "difficulty_factor": components.difficulty_factor,
            "penalty_score": components.penalty_score,
            "Ct": components.ct,
            "Et": components.et,
            "Pt": components.pt,
            "round_score": reported,
            "mini_game_call": call,
            "safe_mode": False,
        }
        if rng.random() < 0.5:
            record["suggested_replies"] = [
                "That rings true for me.",
                "I had not seen it that way.",
            ]
        return json.dumps(record)


def load_personas(path=None) -> list:
    if path is not None:
        return json.loads(Path(path).read_text(encoding="utf-8"))
    text = (
        resources.files("reverie").joinpath("data", "personas.json").read_text("utf-8")
    )
    return json.loads(text)


def _player_text(persona: dict, round_number: int, rng: random.Random) -> str:
    if persona.get("style") == "high_risk" and round_number == HIGH_RISK_ROUND:
        return "Honestly some days I feel like there is no reason to live."
    return f"{rng.choice(_PLAYER_LINES)} (round {round_number})"


def _play_minigame(runtime: SessionRuntime) -> None:
    game = runtime.play.game
    if game == "breathing":
        for kind, t in BREATHING_TIMELINE:
            runtime.minigame_event(
                {"game": "breathing", "event_kind": kind, "timestamp": t}
            )
    elif game == "match3":
        while runtime.state.phase == Phase.MINI_GAME_ACTIVE:
            chain = match3_find_chain(runtime.play.board)
            if chain is None:
                runtime.minigame_event({"game": "match3", "event_kind": "abandon"})
                break
            runtime.minigame_event(
                {"game": "match3", "event_kind": "chain",
                 "path": [list(cell) for cell in chain]}
            )
    else:
        runtime.minigame_event(
            {"game": "five_senses", "event_kind": "submit", "form": GROUNDING_FORM}
        )


def _session_seed(seed: int, index: int) -> int:
    digest = hashlib.sha256(f"sim:{seed}:{index}".encode("ascii")).digest()
    return int.from_bytes(digest[:8], "big")


def simulate_sessions(
    sessions: int,
    seed: int,
    config: EngineConfig | None = None,
    personas: list | None = None,
    data_dir: str | Path | None = None,
) -> dict:
    """Run a batch of scripted sessions; returns the deterministic summary."""
    config = config or EngineConfig()
    personas = personas or load_personas()
    results = []
    for index in range(sessions):
        persona = personas[index % len(personas)]
        style = persona.get("style", "engaged")
        session_seed = _session_seed(seed, index)
        rng = random.Random(session_seed)
        provider = SimulatedProvider(random.Random(session_seed ^ 0xA5A5), style)
        profile = PlayerProfile(
            age=persona["age"],
            gender=persona["gender"],
            identity=persona["identity"],
            stressor_text=persona["stressor_text"],
        )
        log = None
        if data_dir is not None:
            log = SessionEventLog(
                Path(data_dir) / "sessions" / f"sim-{seed}-{index:04d}.jsonl"
            )
        runtime = SessionRuntime.create(
            profile,
            config,
            provider,
            seed=session_seed,
            session_id=f"sim-{seed}-{index:04d}",
            log=log,
        )
        runtime.open_scene()

        minigames_played: dict = {}
        suppressed = 0
        for round_number in range(1, MAX_ROUNDS + 1):
            if runtime.state.phase == Phase.DIALOGUE:
                report = runtime.submit_text(_player_text(persona, round_number, rng))
                if report.suppressed_call:
                    suppressed += 1
                if report.minigame_started:
                    minigames_played[report.minigame_started] = (
                        minigames_played.get(report.minigame_started, 0) + 1
                    )
            if runtime.state.phase == Phase.MINI_GAME_ACTIVE:
                _play_minigame(runtime)
            if runtime.state.phase not in (Phase.DIALOGUE, Phase.MINI_GAME_ACTIVE):
                break

        results.append(
            {
                "session_id": runtime.state.session_id,
                "phase": runtime.state.phase.value,
                "rounds": runtime.state.round_index,
                "score": round(runtime.state.cumulative_score, 6),
                "minigames": minigames_played,
                "suppressed_calls": suppressed,
                "digest": state_digest(runtime.state),
            }
        )

    completed = [r for r in results if r["phase"] == "completed"]
    safe_mode = [r for r in results if r["phase"] == "safe_mode_terminated"]
    rounds = [r["rounds"] for r in completed]
    minigame_totals: dict = {}
    for entry in results:
        for game, count in entry["minigames"].items():
            minigame_totals[game] = minigame_totals.get(game, 0) + count
    summary = {
        "sessions": sessions,
        "seed": seed,
        "completed": len(completed),
        "safe_mode": len(safe_mode),
        "unfinished": sessions - len(completed) - len(safe_mode),
        "safe_mode_rate": round(len(safe_mode) / sessions, 6) if sessions else 0.0,
        "rounds_to_completion": {
            "mean": round(sum(rounds) / len(rounds), 6) if rounds else None,
            "min": min(rounds) if rounds else None,
            "max": max(rounds) if rounds else None,
        },
        "minigame_invocations": dict(sorted(minigame_totals.items())),
        "suppressed_calls": sum(r["suppressed_calls"] for r in results),
        "sessions_detail": results,
    }
    return summary


def summary_to_json(summary: dict) -> str:
    return json.dumps(summary, indent=2, sort_keys=True, ensure_ascii=False)


def verify_logs_replay(summary: dict, data_dir: str | Path) -> bool:
    """Replay every session log and compare digests to the live run."""
    for entry in summary["sessions_detail"]:
        path = Path(data_dir) / "sessions" / f"{entry['session_id']}.jsonl"
        state = rebuild_session(read_events(path))
        if state_digest(state) != entry["digest"]:
            return False
    return True
