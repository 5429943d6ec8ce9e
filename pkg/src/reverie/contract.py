"""NPC turn contract: parsing, validation, and the round-score model.

Every provider response must arrive as a single JSON object using the wire
field names below. Parsing is strict: any missing field, bad type, or
out-of-domain value is a contract error, never silently repaired. The round
score is always recomputed locally; the provider's reported number is
advisory only.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, replace

MINI_GAME_CALLS = ("none", "breathing", "match3", "five_senses")
DIFFICULTY_FACTORS = (0.8, 1.0, 1.2)

EVALUATION_CAP = 10.0
BASE_SCORE = 1.0
CEP_MAX = 5

MAX_SUGGESTED_REPLIES = 3
MAX_SUGGESTED_REPLY_CHARS = 200

# Wire field name -> NpcTurn attribute.
_WIRE_FIELDS = {
    "npc_reply": "npc_reply",
    "safety_gate": "safety_gate",
    "difficulty_factor": "difficulty_factor",
    "penalty_score": "penalty_score",
    "Ct": "ct",
    "Et": "et",
    "Pt": "pt",
    "round_score": "round_score",
    "mini_game_call": "mini_game_call",
    "safe_mode": "safe_mode",
}

# Anchored: only a fence wrapping the whole document is stripped, so a
# reply body that merely contains backticks is left alone.
_FENCE_RE = re.compile(r"^```[a-zA-Z0-9_-]*\s*\n(.*?)\n?```\s*$", re.DOTALL)


class ContractError(ValueError):
    """A provider response violated the turn contract."""

    def __init__(self, message: str, fragment: str = ""):
        super().__init__(message)
        # Offending raw fragment, kept for provider-fault logging.
        self.fragment = fragment[:500]


class MalformedDocument(ContractError):
    """Response is not parseable as a single structured record."""


class MissingField(ContractError):
    def __init__(self, name: str, fragment: str = ""):
        super().__init__(f"missing required field {name!r}", fragment)
        self.name = name


class OutOfDomain(ContractError):
    def __init__(self, name: str, value, fragment: str = ""):
        super().__init__(f"field {name!r} out of domain: {value!r}", fragment)
        self.name = name
        self.value = value


@dataclass(frozen=True)
class NpcTurn:
    """One validated structured NPC output."""

    npc_reply: str
    safety_gate: int
    difficulty_factor: float
    penalty_score: int
    ct: int
    et: int
    pt: int
    round_score: float
    mini_game_call: str
    safe_mode: bool
    suggested_replies: tuple[str, ...] = ()


@dataclass(frozen=True)
class ScoreComponents:
    """Inputs of the round-score model, all in their contract domains."""

    safety_gate: int
    difficulty_factor: float
    penalty_score: int
    ct: int
    et: int
    pt: int

    def __post_init__(self):
        if self.safety_gate not in (0, 1):
            raise OutOfDomain("safety_gate", self.safety_gate)
        if self.difficulty_factor not in DIFFICULTY_FACTORS:
            raise OutOfDomain("difficulty_factor", self.difficulty_factor)
        if self.penalty_score not in (0, 1):
            raise OutOfDomain("penalty_score", self.penalty_score)
        for name, v in (("Ct", self.ct), ("Et", self.et), ("Pt", self.pt)):
            if not isinstance(v, int) or not 0 <= v <= CEP_MAX:
                raise OutOfDomain(name, v)

    @classmethod
    def from_turn(cls, turn: NpcTurn) -> "ScoreComponents":
        return cls(
            safety_gate=turn.safety_gate,
            difficulty_factor=turn.difficulty_factor,
            penalty_score=turn.penalty_score,
            ct=turn.ct,
            et=turn.et,
            pt=turn.pt,
        )


@dataclass(frozen=True)
class ReconciledTurn:
    """An NpcTurn with the locally recomputed, authoritative round score."""

    turn: NpcTurn
    round_score: float
    score_corrected: bool
    safe_mode: bool

    @property
    def npc_reply(self) -> str:
        return self.turn.npc_reply

    @property
    def mini_game_call(self) -> str:
        return self.turn.mini_game_call

    @property
    def suggested_replies(self) -> tuple[str, ...]:
        return self.turn.suggested_replies


def evaluation_score(components: ScoreComponents) -> float:
    """Per-round evaluation: base score plus the penalty-gated C+E+P sum.

    Range [1, 16]; the base point keeps every non-safety round worth
    something so participation is never zero-rewarded.
    """
    return BASE_SCORE + components.penalty_score * (
        components.ct + components.et + components.pt
    )


def compute_round_score(components: ScoreComponents) -> float:
    """Authoritative round score: gate x difficulty x capped evaluation.

    A closed safety gate zeroes the round regardless of the other
    components; otherwise the evaluation is capped at 10 before the
    difficulty multiplier is applied, giving a range of {0} union [0.8, 12].
    """
    capped = min(evaluation_score(components), EVALUATION_CAP)
    return components.safety_gate * components.difficulty_factor * capped


def reconcile_turn(turn: NpcTurn) -> ReconciledTurn:
    """Recompute the round score locally and override the reported one.

    The turn is flagged ``score_corrected`` when the provider's number
    disagrees beyond 1e-9. ``safe_mode`` is forced to track the safety
    gate even on hand-built turns.
    """
    recomputed = compute_round_score(ScoreComponents.from_turn(turn))
    corrected = abs(turn.round_score - recomputed) > 1e-9
    return ReconciledTurn(
        turn=turn,
        round_score=recomputed,
        score_corrected=corrected,
        safe_mode=turn.safety_gate == 0,
    )


def _strip_fences(raw: str) -> str:
    match = _FENCE_RE.search(raw)
    if match:
        return match.group(1)
    return raw


def _extract_object(raw: str) -> str:
    start = raw.find("{")
    end = raw.rfind("}")
    if start == -1 or end == -1 or end <= start:
        raise MalformedDocument("no JSON object found in response", raw)
    return raw[start : end + 1]


def _require_int(record: dict, wire_name: str, allowed, raw: str) -> int:
    value = record[wire_name]
    # bool is an int subclass; the contract wants true integers here.
    if isinstance(value, bool) or not isinstance(value, int) or value not in allowed:
        raise OutOfDomain(wire_name, value, raw)
    return value


def parse_npc_turn(raw: str) -> NpcTurn:
    """Parse and validate one raw provider response into an NpcTurn.

    One level of markdown code fencing and any surrounding prose are
    stripped before JSON parsing. Unknown extra fields are ignored.

    Raises MalformedDocument, MissingField, or OutOfDomain; each carries
    the offending fragment for logging.
    """
    if not isinstance(raw, str):
        raise MalformedDocument(f"expected text, got {type(raw).__name__}", repr(raw))
    text = _extract_object(_strip_fences(raw.strip()))
    try:
        record = json.loads(text)
    except (json.JSONDecodeError, UnicodeDecodeError) as exc:
        raise MalformedDocument(f"invalid JSON: {exc}", text) from exc
    if not isinstance(record, dict):
        raise MalformedDocument("top-level JSON value is not an object", text)

    for wire_name in _WIRE_FIELDS:
        if wire_name not in record:
            raise MissingField(wire_name, text)

    npc_reply = record["npc_reply"]
    if not isinstance(npc_reply, str) or not npc_reply.strip():
        raise OutOfDomain("npc_reply", npc_reply, text)

    safety_gate = _require_int(record, "safety_gate", (0, 1), text)
    penalty_score = _require_int(record, "penalty_score", (0, 1), text)
    ct = _require_int(record, "Ct", range(CEP_MAX + 1), text)
    et = _require_int(record, "Et", range(CEP_MAX + 1), text)
    pt = _require_int(record, "Pt", range(CEP_MAX + 1), text)

    difficulty = record["difficulty_factor"]
    if isinstance(difficulty, bool) or not isinstance(difficulty, (int, float)):
        raise OutOfDomain("difficulty_factor", difficulty, text)
    difficulty = float(difficulty)
    if difficulty not in DIFFICULTY_FACTORS:
        raise OutOfDomain("difficulty_factor", difficulty, text)

    round_score = record["round_score"]
    if (
        isinstance(round_score, bool)
        or not isinstance(round_score, (int, float))
        or round_score < 0
    ):
        raise OutOfDomain("round_score", round_score, text)

    mini_game_call = record["mini_game_call"]
    if mini_game_call not in MINI_GAME_CALLS:
        raise OutOfDomain("mini_game_call", mini_game_call, text)

    safe_mode = record["safe_mode"]
    if not isinstance(safe_mode, bool):
        raise OutOfDomain("safe_mode", safe_mode, text)

    # Cross-field invariants: safe mode tracks the gate, and a closed gate
    # never schedules a mini-game.
    if safe_mode != (safety_gate == 0):
        raise OutOfDomain("safe_mode", safe_mode, text)
    if safety_gate == 0 and mini_game_call != "none":
        raise OutOfDomain("mini_game_call", mini_game_call, text)

    suggested = record.get("suggested_replies", [])
    if not isinstance(suggested, list) or len(suggested) > MAX_SUGGESTED_REPLIES:
        raise OutOfDomain("suggested_replies", suggested, text)
    for item in suggested:
        if (
            not isinstance(item, str)
            or not item.strip()
            or len(item) > MAX_SUGGESTED_REPLY_CHARS
        ):
            raise OutOfDomain("suggested_replies", item, text)

    return NpcTurn(
        npc_reply=npc_reply,
        safety_gate=safety_gate,
        difficulty_factor=difficulty,
        penalty_score=penalty_score,
        ct=ct,
        et=et,
        pt=pt,
        round_score=float(round_score),
        mini_game_call=mini_game_call,
        safe_mode=safe_mode,
        suggested_replies=tuple(suggested),
    )


def serialize_turn(turn: NpcTurn) -> str:
    """Serialize an NpcTurn back to its wire format (UTF-8 JSON object)."""
    record = {wire: getattr(turn, attr) for wire, attr in _WIRE_FIELDS.items()}
    if turn.suggested_replies:
        record["suggested_replies"] = list(turn.suggested_replies)
    return json.dumps(record, ensure_ascii=False)


def turn_to_dict(turn: ReconciledTurn) -> dict:
    """Flat JSON-friendly view of a reconciled turn, for logs and replay."""
    return {
        "raw": serialize_turn(turn.turn),
        "round_score": turn.round_score,
        "score_corrected": turn.score_corrected,
        "safe_mode": turn.safe_mode,
    }


def reconciled_from_dict(payload: dict) -> ReconciledTurn:
    return reconcile_turn(parse_npc_turn(payload["raw"]))


def with_reported_score(turn: NpcTurn, reported: float) -> NpcTurn:
    return replace(turn, round_score=reported)
