"""Single-session game state machine.

Drives one stress-relief session: profile collection, scene entry, scored
dialogue rounds, mini-game scheduling under a cooldown, safety-mode
termination, and level completion. All transitions are deterministic
functions of (inputs, provider outputs, seed), which is what makes the
append-only event log replayable bit-for-bit.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from enum import Enum
from typing import Optional

from .contract import ReconciledTurn, turn_to_dict
from .safety import RiskLexicon


class Phase(str, Enum):
    PREPARATION = "preparation"
    SCENE_INIT = "scene_init"
    DIALOGUE = "dialogue"
    MINI_GAME_ACTIVE = "mini_game_active"
    COMPLETED = "completed"
    SAFE_MODE_TERMINATED = "safe_mode_terminated"
    EXITED = "exited"


TERMINAL_PHASES = frozenset(
    {Phase.COMPLETED, Phase.SAFE_MODE_TERMINATED, Phase.EXITED}
)

MINIGAME_COMPLETION_BONUS = 5.0


class SessionError(Exception):
    pass


class WrongPhase(SessionError):
    def __init__(self, expected, actual: Phase):
        super().__init__(f"operation requires phase {expected}, session is in {actual.value}")
        self.actual = actual


class EmptyInput(SessionError):
    pass


class InvalidProfile(SessionError):
    pass


class GameMismatch(SessionError):
    pass


@dataclass(frozen=True)
class PlayerProfile:
    age: int
    gender: str
    identity: str
    stressor_text: str

    def to_dict(self) -> dict:
        return {
            "age": self.age,
            "gender": self.gender,
            "identity": self.identity,
            "stressor_text": self.stressor_text,
        }

    @classmethod
    def from_dict(cls, payload: dict) -> "PlayerProfile":
        return cls(
            age=payload["age"],
            gender=payload["gender"],
            identity=payload["identity"],
            stressor_text=payload["stressor_text"],
        )


@dataclass(frozen=True)
class SceneSpec:
    name: str
    description: str
    image_ref: str = ""

    def __post_init__(self):
        if not self.name.strip() or not self.description.strip():
            raise ValueError("scene name and description must be non-empty")

    def to_dict(self) -> dict:
        return {"name": self.name, "description": self.description, "image_ref": self.image_ref}

    @classmethod
    def from_dict(cls, payload: dict) -> "SceneSpec":
        return cls(
            name=payload["name"],
            description=payload["description"],
            image_ref=payload.get("image_ref", ""),
        )


@dataclass
class DialogueRound:
    round_index: int
    npc_prompt: str
    player_input: str
    turn: ReconciledTurn
    score_awarded: float
    minigame_bonus: float = 0.0


@dataclass(frozen=True)
class ActiveMiniGame:
    """Descriptor of the scheduled mini-game; the evolving per-game state
    lives with whoever drives the interaction (service or CLI)."""

    game: str
    seed: int
    trigger_round: int

    def to_dict(self) -> dict:
        return {"game": self.game, "seed": self.seed, "trigger_round": self.trigger_round}


@dataclass(frozen=True)
class MiniGameResult:
    game: str
    completed: bool
    performance_points: float = 0.0

    def __post_init__(self):
        if not self.completed and self.performance_points != 0:
            raise ValueError("an uncompleted mini-game awards no performance points")
        if self.performance_points < 0:
            raise ValueError("performance points must be non-negative")

    def to_dict(self) -> dict:
        return {
            "game": self.game,
            "completed": self.completed,
            "performance_points": self.performance_points,
        }

    @classmethod
    def from_dict(cls, payload: dict) -> "MiniGameResult":
        return cls(
            game=payload["game"],
            completed=payload["completed"],
            performance_points=payload["performance_points"],
        )


@dataclass
class SessionState:
    session_id: str
    profile: PlayerProfile
    rng_seed: int
    pass_threshold: float
    cooldown_rounds: int
    lexicon: RiskLexicon
    phase: Phase = Phase.PREPARATION
    scene: Optional[SceneSpec] = None
    round_index: int = 0
    cumulative_score: float = 0.0
    last_minigame_round: Optional[int] = None
    active_minigame: Optional[ActiveMiniGame] = None
    pending_npc_prompt: str = ""
    latest_suggested_replies: tuple = ()
    transcript: list = field(default_factory=list)
    suppressed_calls: list = field(default_factory=list)


@dataclass(frozen=True)
class TurnOutcome:
    state: SessionState
    score_awarded: float
    safe_mode_triggered: bool = False
    risk_phrase: Optional[str] = None
    minigame_started: Optional[str] = None
    suppressed_call: Optional[str] = None
    completed: bool = False


_OPENING_PROMPT = (
    "Close your eyes for a moment and imagine: {description} "
    "Welcome to {name}. Settle in at your own pace. When you are ready, "
    "tell me what has been weighing on you lately."
)


def derive_session_id(seed: int, profile: PlayerProfile) -> str:
    digest = hashlib.sha256(
        json.dumps([seed, profile.to_dict()], sort_keys=True).encode("utf-8")
    ).hexdigest()
    return f"s{digest[:16]}"


def derive_minigame_seed(rng_seed: int, round_index: int) -> int:
    digest = hashlib.sha256(f"{rng_seed}:{round_index}".encode("ascii")).digest()
    return int.from_bytes(digest[:8], "big")


def create_session(
    profile: PlayerProfile,
    *,
    pass_threshold: float = 100.0,
    cooldown_rounds: int = 6,
    lexicon: Optional[RiskLexicon] = None,
    seed: int = 0,
    session_id: Optional[str] = None,
) -> SessionState:
    """Start a session in the preparation phase.

    The session id defaults to a deterministic digest of (seed, profile) so
    that equal seeds and transcripts reproduce identical state sequences;
    callers that need global uniqueness pass their own id.
    """
    if not profile.stressor_text.strip():
        raise InvalidProfile("stressor_text must be non-empty")
    if not profile.gender.strip() or not profile.identity.strip():
        raise InvalidProfile("profile fields must be present")
    if pass_threshold <= 0:
        raise ValueError("pass_threshold must be positive")
    return SessionState(
        session_id=session_id or derive_session_id(seed, profile),
        profile=profile,
        rng_seed=seed,
        pass_threshold=float(pass_threshold),
        cooldown_rounds=int(cooldown_rounds),
        lexicon=lexicon or RiskLexicon.bundled(),
    )


def enter_scene(state: SessionState, scene: SceneSpec) -> SessionState:
    """Attach the generated scene and open the dialogue."""
    if state.phase not in (Phase.PREPARATION, Phase.SCENE_INIT):
        raise WrongPhase("preparation", state.phase)
    state.scene = scene
    state.phase = Phase.DIALOGUE
    state.pending_npc_prompt = _OPENING_PROMPT.format(
        description=scene.description, name=scene.name
    )
    return state


def can_invoke_minigame(state: SessionState) -> bool:
    """True when no game ran yet or at least five full rounds intervened."""
    if state.last_minigame_round is None:
        return True
    return state.round_index - state.last_minigame_round >= state.cooldown_rounds


def _enter_safe_mode(state: SessionState) -> SessionState:
    state.phase = Phase.SAFE_MODE_TERMINATED
    state.active_minigame = None
    return state


def trigger_safe_mode(state: SessionState) -> SessionState:
    """Force safety termination from outside the normal turn path (e.g. a
    risk phrase inside a grounding answer)."""
    if state.phase in TERMINAL_PHASES:
        raise WrongPhase("an active phase", state.phase)
    return _enter_safe_mode(state)


def submit_player_input(
    state: SessionState, text: str, turn: ReconciledTurn
) -> TurnOutcome:
    """Apply one completed dialogue round to the session.

    Decision order: local risk screen, provider safety verdict, score
    accumulation, mini-game scheduling (cooldown permitting), and finally
    the pass-threshold check, which wins over a just-scheduled game.
    """
    if state.phase != Phase.DIALOGUE:
        raise WrongPhase(Phase.DIALOGUE.value, state.phase)
    if not text.strip():
        raise EmptyInput("player input is empty")

    risk_phrase = state.lexicon.match(text)
    if risk_phrase is not None:
        _enter_safe_mode(state)
        return TurnOutcome(
            state=state, score_awarded=0.0, safe_mode_triggered=True, risk_phrase=risk_phrase
        )

    if turn.safe_mode or turn.turn.safety_gate == 0:
        _enter_safe_mode(state)
        return TurnOutcome(state=state, score_awarded=0.0, safe_mode_triggered=True)

    state.round_index += 1
    state.transcript.append(
        DialogueRound(
            round_index=state.round_index,
            npc_prompt=state.pending_npc_prompt,
            player_input=text,
            turn=turn,
            score_awarded=turn.round_score,
        )
    )
    state.cumulative_score += turn.round_score
    state.pending_npc_prompt = turn.npc_reply
    state.latest_suggested_replies = turn.suggested_replies

    minigame_started = None
    suppressed_call = None
    call = turn.mini_game_call
    if call != "none":
        if can_invoke_minigame(state):
            state.active_minigame = ActiveMiniGame(
                game=call,
                seed=derive_minigame_seed(state.rng_seed, state.round_index),
                trigger_round=state.round_index,
            )
            state.phase = Phase.MINI_GAME_ACTIVE
            minigame_started = call
        else:
            # Suppressed, never retried automatically; the provider may ask
            # again on a later round.
            state.suppressed_calls.append([state.round_index, call])
            suppressed_call = call

    completed = False
    if state.cumulative_score >= state.pass_threshold:
        state.phase = Phase.COMPLETED
        state.active_minigame = None
        minigame_started = None
        completed = True

    return TurnOutcome(
        state=state,
        score_awarded=turn.round_score,
        minigame_started=minigame_started,
        suppressed_call=suppressed_call,
        completed=completed,
    )


def apply_minigame_result(state: SessionState, result: MiniGameResult) -> SessionState:
    """Bank a finished mini-game: bonus points, cooldown stamp, phase return."""
    if state.phase != Phase.MINI_GAME_ACTIVE:
        raise WrongPhase(Phase.MINI_GAME_ACTIVE.value, state.phase)
    assert state.active_minigame is not None
    if result.game != state.active_minigame.game:
        raise GameMismatch(
            f"result for {result.game!r} but active game is {state.active_minigame.game!r}"
        )

    bonus = MINIGAME_COMPLETION_BONUS + result.performance_points if result.completed else 0.0
    state.cumulative_score += bonus
    if state.transcript:
        state.transcript[-1].minigame_bonus += bonus
    state.last_minigame_round = state.round_index
    state.active_minigame = None
    state.phase = (
        Phase.COMPLETED
        if state.cumulative_score >= state.pass_threshold
        else Phase.DIALOGUE
    )
    return state


def exit_session(state: SessionState) -> SessionState:
    """Player-initiated exit; allowed from any non-terminal phase."""
    if state.phase in TERMINAL_PHASES:
        raise WrongPhase("a non-terminal phase", state.phase)
    state.phase = Phase.EXITED
    state.active_minigame = None
    return state


def progress_fraction(state: SessionState) -> float:
    """Progress toward the pass threshold, clamped to [0, 1].

    The UI renders this as the progress bar fill and as cloud fade
    (cloud opacity = 1 - fraction).
    """
    return min(1.0, state.cumulative_score / state.pass_threshold)


def snapshot(state: SessionState) -> dict:
    """Canonical JSON-able view of the full session state.

    Replay equality is defined over this snapshot: two states are the same
    iff their snapshots serialize identically.
    """
    return {
        "session_id": state.session_id,
        "phase": state.phase.value,
        "profile": state.profile.to_dict(),
        "scene": state.scene.to_dict() if state.scene else None,
        "round_index": state.round_index,
        "cumulative_score": state.cumulative_score,
        "pass_threshold": state.pass_threshold,
        "cooldown_rounds": state.cooldown_rounds,
        "rng_seed": state.rng_seed,
        "last_minigame_round": state.last_minigame_round,
        "active_minigame": state.active_minigame.to_dict() if state.active_minigame else None,
        "pending_npc_prompt": state.pending_npc_prompt,
        "latest_suggested_replies": list(state.latest_suggested_replies),
        "suppressed_calls": [list(item) for item in state.suppressed_calls],
        "lexicon_digest": hashlib.sha256(
            "\n".join(state.lexicon.phrases).encode("utf-8")
        ).hexdigest(),
        "transcript": [
            {
                "round_index": r.round_index,
                "npc_prompt": r.npc_prompt,
                "player_input": r.player_input,
                "turn": turn_to_dict(r.turn),
                "score_awarded": r.score_awarded,
                "minigame_bonus": r.minigame_bonus,
            }
            for r in state.transcript
        ],
    }


def state_digest(state: SessionState) -> str:
    blob = json.dumps(snapshot(state), sort_keys=True, ensure_ascii=False)
    return hashlib.sha256(blob.encode("utf-8")).hexdigest()
