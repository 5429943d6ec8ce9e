"""Session runtime: glues provider, engine, mini-games, and the event log.

The HTTP service, the interactive CLI, and the batch simulator all drive
sessions through this one layer so that the recorded event stream, the
scoring path, and the mini-game handling are identical everywhere.
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

from .agents.gateway import generate_scene, request_npc_turn, request_scene_image
from .agents.prompts import build_npc_system_prompt, grounding_image_prompt
from .config import EngineConfig
from .contract import reconcile_turn
from .minigames import (
    BreathingEvent,
    BreathingState,
    GroundingForm,
    Match3Board,
    breathing_performance,
    breathing_step,
    grounding_evaluate,
    match3_apply_chain,
    match3_completed,
    match3_generate,
    match3_performance,
)
from .session import (
    EmptyInput,
    GameMismatch,
    MiniGameResult,
    Phase,
    PlayerProfile,
    SessionState,
    WrongPhase,
    apply_minigame_result,
    create_session,
    enter_scene,
    exit_session,
    progress_fraction,
    submit_player_input,
    trigger_safe_mode,
)
from .store import SessionEventLog, make_event


@dataclass
class MiniGamePlay:
    """Evolving interaction state of the currently active mini-game."""

    game: str
    breathing: Optional[BreathingState] = None
    board: Optional[Match3Board] = None
    grounding_image: str = ""
    last_eliminated: int = 0

    def describe(self) -> dict:
        view: dict = {"game": self.game}
        if self.game == "breathing":
            view.update(self.breathing.to_dict())
        elif self.game == "match3":
            view.update(self.board.to_dict())
            view["target_tiles"] = 10
            view["last_eliminated"] = self.last_eliminated
        elif self.game == "five_senses":
            view["image_ref"] = self.grounding_image
            view["slots"] = {"see": 5, "touch": 4, "hear": 3, "smell": 2, "taste": 1}
        return view


@dataclass(frozen=True)
class TurnReport:
    state: SessionState
    safe_mode: bool
    repaired: bool = False
    score_corrected: bool = False
    score_awarded: float = 0.0
    minigame_started: Optional[str] = None
    suppressed_call: Optional[str] = None


class SessionRuntime:
    """Single-writer driver for one live session."""

    def __init__(self, state: SessionState, config: EngineConfig, provider, log=None):
        self.state = state
        self.config = config
        self.provider = provider
        self.log = log
        self.play: Optional[MiniGamePlay] = None

    @classmethod
    def create(
        cls,
        profile: PlayerProfile,
        config: EngineConfig,
        provider,
        seed: int,
        session_id: Optional[str] = None,
        log: Optional[SessionEventLog] = None,
    ) -> "SessionRuntime":
        lexicon = config.load_lexicon()
        state = create_session(
            profile,
            pass_threshold=config.pass_threshold,
            cooldown_rounds=config.cooldown_rounds,
            lexicon=lexicon,
            seed=seed,
            session_id=session_id,
        )
        runtime = cls(state, config, provider, log)
        runtime._record(
            "created",
            {
                "profile": profile.to_dict(),
                "seed": seed,
                "pass_threshold": state.pass_threshold,
                "cooldown_rounds": state.cooldown_rounds,
                "lexicon": list(lexicon.phrases),
            },
        )
        return runtime

    @classmethod
    def resume(
        cls, state: SessionState, config: EngineConfig, provider, log=None
    ) -> "SessionRuntime":
        """Adopt a replayed state. An interrupted mini-game restarts from its
        seeded initial position; banked results were already applied."""
        runtime = cls(state, config, provider, log)
        if state.phase == Phase.MINI_GAME_ACTIVE and state.active_minigame:
            runtime._start_minigame(record=False)
        return runtime

    def _record(self, kind: str, payload: dict) -> None:
        if self.log is not None:
            self.log.append(make_event(self.state.session_id, kind, payload))

    # -- setup ------------------------------------------------------------

    def open_scene(self) -> SessionState:
        scene = generate_scene(self.provider, self.state.profile)
        image_ref = request_scene_image(self.provider, scene.description)
        scene = dataclasses.replace(scene, image_ref=image_ref)
        enter_scene(self.state, scene)
        self._record("scene", scene.to_dict())
        return self.state

    # -- dialogue ---------------------------------------------------------

    def submit_text(self, text: str) -> TurnReport:
        """One full dialogue round: screen, provider call, engine update."""
        if self.state.phase != Phase.DIALOGUE:
            raise WrongPhase(Phase.DIALOGUE.value, self.state.phase)
        if not text.strip():
            raise EmptyInput("player input is empty")
        risk_phrase = self.state.lexicon.match(text)
        if risk_phrase is not None:
            # Risky text never leaves the machine; terminate before any
            # provider round trip.
            trigger_safe_mode(self.state)
            self._record("safe_mode", {"reason": "risk_screen"})
            return TurnReport(state=self.state, safe_mode=True)

        history = [
            (entry.player_input, entry.turn.npc_reply)
            for entry in self.state.transcript
        ]
        bundle = build_npc_system_prompt(
            self.state.profile,
            self.state.scene,
            self.state.round_index,
            history=history,
            player_input=text,
        )
        result = request_npc_turn(self.provider, bundle)
        reconciled = reconcile_turn(result.turn)
        outcome = submit_player_input(self.state, text, reconciled)

        if outcome.safe_mode_triggered:
            self._record("player_input", {"text": text})
            self._record(
                "npc_turn",
                {"raw": result.raw_text, "repaired": result.repaired},
            )
            self._record("safe_mode", {"reason": "provider_gate"})
            return TurnReport(
                state=self.state, safe_mode=True, repaired=result.repaired
            )

        self._record("player_input", {"text": text})
        self._record(
            "npc_turn",
            {
                "raw": result.raw_text,
                "repaired": result.repaired,
                "score_corrected": reconciled.score_corrected,
                "score_awarded": outcome.score_awarded,
            },
        )
        if outcome.minigame_started:
            self._start_minigame()
        if outcome.completed:
            self._record("completed", {"score": self.state.cumulative_score})
        return TurnReport(
            state=self.state,
            safe_mode=False,
            repaired=result.repaired,
            score_corrected=reconciled.score_corrected,
            score_awarded=outcome.score_awarded,
            minigame_started=outcome.minigame_started,
            suppressed_call=outcome.suppressed_call,
        )

    # -- mini-games ---------------------------------------------------------

    def _start_minigame(self, record: bool = True) -> None:
        descriptor = self.state.active_minigame
        play = MiniGamePlay(game=descriptor.game)
        if descriptor.game == "breathing":
            play.breathing = BreathingState()
        elif descriptor.game == "match3":
            play.board = match3_generate(descriptor.seed)
        elif descriptor.game == "five_senses":
            play.grounding_image = self.provider.image(grounding_image_prompt())
        self.play = play
        if record:
            self._record(
                "minigame_start", {"game": descriptor.game, "seed": descriptor.seed}
            )

    def _finish_minigame(self, result: MiniGameResult) -> None:
        apply_minigame_result(self.state, result)
        self.play = None
        self._record("minigame_result", result.to_dict())
        if self.state.phase == Phase.COMPLETED:
            self._record("completed", {"score": self.state.cumulative_score})

    def minigame_event(self, payload: dict) -> dict:
        """Apply one mini-game interaction event; returns the fresh view."""
        if self.state.phase != Phase.MINI_GAME_ACTIVE or self.play is None:
            raise WrongPhase(Phase.MINI_GAME_ACTIVE.value, self.state.phase)
        play = self.play
        game = payload.get("game")
        if game != play.game:
            raise GameMismatch(f"event for {game!r} but active game is {play.game!r}")
        event_kind = payload.get("event_kind")

        if event_kind == "abandon":
            self._finish_minigame(MiniGameResult(game=play.game, completed=False))
            return {"finished": True, "completed": False}

        if play.game == "breathing":
            if event_kind not in ("press", "release", "tick"):
                raise ValueError(f"unknown breathing event {event_kind!r}")
            play.breathing = breathing_step(
                play.breathing,
                BreathingEvent(kind=event_kind, t=float(payload["timestamp"])),
            )
            if play.breathing.completed:
                performance = breathing_performance(play.breathing)
                self._finish_minigame(
                    MiniGameResult("breathing", True, performance_points=performance)
                )
                return {"finished": True, "completed": True, "points": performance}
            return {"finished": False, "state": play.breathing.to_dict()}

        if play.game == "match3":
            if event_kind != "chain":
                raise ValueError(f"unknown match3 event {event_kind!r}")
            path = [tuple(cell) for cell in payload["path"]]
            play.last_eliminated = match3_apply_chain(play.board, path)
            if match3_completed(play.board):
                performance = match3_performance(play.board)
                self._finish_minigame(
                    MiniGameResult("match3", True, performance_points=performance)
                )
                return {"finished": True, "completed": True, "points": performance}
            return {
                "finished": False,
                "eliminated": play.last_eliminated,
                "board": play.board.to_dict(),
            }

        # five_senses
        if event_kind != "submit":
            raise ValueError(f"unknown grounding event {event_kind!r}")
        form = GroundingForm.from_dict(payload["form"])
        evaluation = grounding_evaluate(form, lexicon=self.state.lexicon)
        if evaluation.risk_phrase is not None:
            trigger_safe_mode(self.state)
            self.play = None
            self._record("safe_mode", {"reason": "risk_screen_minigame"})
            return {"finished": True, "completed": False, "safe_mode": True}
        self._finish_minigame(
            MiniGameResult(
                "five_senses", True, performance_points=evaluation.performance_points
            )
        )
        return {
            "finished": True,
            "completed": True,
            "points": evaluation.performance_points,
        }

    # -- lifecycle ----------------------------------------------------------

    def exit(self) -> SessionState:
        exit_session(self.state)
        self.play = None
        self._record("exited", {})
        return self.state

    # -- views ---------------------------------------------------------------

    def view(self) -> dict:
        """Client-facing session view; never includes prompts or credentials."""
        state = self.state
        return {
            "session_id": state.session_id,
            "phase": state.phase.value,
            "progress_fraction": progress_fraction(state),
            "npc_reply": state.pending_npc_prompt,
            "suggested_replies": list(state.latest_suggested_replies),
            "active_minigame": self.play.describe() if self.play else None,
            "safe_mode": state.phase == Phase.SAFE_MODE_TERMINATED,
        }
