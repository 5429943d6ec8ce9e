"""Paced-breathing mini-game: inhale 4 s, hold 7 s, exhale 8 s.

The only observable inputs are spacebar press/release plus optional clock
ticks, so the inhale and breath-hold form one continuous press: a valid
press lasts the combined 11 s and the exhale window runs from release.
Every phase tolerates +/-1.0 s of human motor timing. A violated phase
resets to idle without penalty.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

INHALE_S = 4.0
HOLD_S = 7.0
EXHALE_S = 8.0
PHASE_TOLERANCE_S = 1.0

# Press spans inhale + hold; exhale must run at least its target minus
# tolerance before the next event is allowed to bank the cycle.
MIN_PRESS_S = INHALE_S + HOLD_S - PHASE_TOLERANCE_S  # 10.0
MAX_PRESS_S = INHALE_S + HOLD_S + PHASE_TOLERANCE_S  # 12.0
MIN_EXHALE_S = EXHALE_S - PHASE_TOLERANCE_S  # 7.0

# Timestamps arrive as floats; durations like 17.4 - 10.4 fall a few ulps
# short of their decimal value, so boundary checks take a tiny slack.
_EPS = 1e-9

POINTS_PER_CYCLE = 2.0

EVENT_KINDS = ("press", "release", "tick")


class OutOfOrderEvent(ValueError):
    pass


@dataclass(frozen=True)
class BreathingEvent:
    kind: str
    t: float


@dataclass(frozen=True)
class BreathingState:
    phase: str = "idle"  # idle | inhale | hold | exhale | cycle_done
    phase_started_at: float = 0.0
    completed_cycles: int = 0
    target_cycles: int = 3
    press_started_at: float | None = None
    release_at: float | None = None
    last_event_at: float = float("-inf")

    @property
    def completed(self) -> bool:
        return self.completed_cycles >= self.target_cycles

    def to_dict(self) -> dict:
        return {
            "phase": self.phase,
            "completed_cycles": self.completed_cycles,
            "target_cycles": self.target_cycles,
        }


def _start_inhale(state: BreathingState, t: float) -> BreathingState:
    return replace(
        state,
        phase="inhale",
        phase_started_at=t,
        press_started_at=t,
        release_at=None,
        last_event_at=t,
    )


def _reset(state: BreathingState, t: float) -> BreathingState:
    return replace(
        state,
        phase="idle",
        phase_started_at=t,
        press_started_at=None,
        release_at=None,
        last_event_at=t,
    )


def _bank_cycle(state: BreathingState, t: float) -> BreathingState:
    cycles = state.completed_cycles + 1
    state = replace(state, completed_cycles=cycles)
    if cycles >= state.target_cycles:
        return replace(
            state,
            phase="cycle_done",
            phase_started_at=t,
            press_started_at=None,
            release_at=None,
            last_event_at=t,
        )
    return _reset(state, t)


def breathing_step(state: BreathingState, event: BreathingEvent) -> BreathingState:
    """Advance the breathing state machine by one timestamped event."""
    if event.kind not in EVENT_KINDS:
        raise ValueError(f"unknown breathing event kind {event.kind!r}")
    if event.t < state.last_event_at:
        raise OutOfOrderEvent(
            f"event at {event.t} precedes last event at {state.last_event_at}"
        )
    t = event.t

    if state.phase == "cycle_done":
        return replace(state, last_event_at=t)

    if state.phase == "idle":
        if event.kind == "press":
            return _start_inhale(state, t)
        return replace(state, last_event_at=t)

    if state.phase in ("inhale", "hold"):
        assert state.press_started_at is not None
        held = t - state.press_started_at
        if event.kind == "press":
            # Spurious second press: restart the attempt from this press.
            return _start_inhale(state, t)
        if event.kind == "tick":
            if state.phase == "inhale" and held >= INHALE_S - _EPS:
                return replace(
                    state,
                    phase="hold",
                    phase_started_at=state.press_started_at + INHALE_S,
                    last_event_at=t,
                )
            return replace(state, last_event_at=t)
        # release
        if MIN_PRESS_S - _EPS <= held <= MAX_PRESS_S + _EPS:
            return replace(
                state, phase="exhale", phase_started_at=t, release_at=t, last_event_at=t
            )
        return _reset(state, t)

    # exhale
    assert state.release_at is not None
    exhaled = t - state.release_at
    if exhaled >= MIN_EXHALE_S - _EPS:
        state = _bank_cycle(state, t)
        if event.kind == "press" and state.phase == "idle":
            return _start_inhale(state, t)
        return state
    if event.kind == "press":
        # Exhale cut short: discard the pending cycle, start over.
        return _start_inhale(state, t)
    return replace(state, last_event_at=t)


def breathing_performance(state: BreathingState) -> float:
    if not state.completed:
        return 0.0
    return POINTS_PER_CYCLE * state.completed_cycles
