"""Micro-intervention mini-games: paced breathing, chain match-3, and
five-senses grounding."""

from .breathing import (
    BreathingEvent,
    BreathingState,
    OutOfOrderEvent,
    breathing_performance,
    breathing_step,
)
from .grounding import (
    GroundingEvaluation,
    GroundingForm,
    IncompleteForm,
    grounding_evaluate,
)
from .match3 import (
    BadDimensions,
    Match3Board,
    chain_is_valid,
    match3_apply_chain,
    match3_completed,
    match3_find_chain,
    match3_generate,
    match3_has_moves,
    match3_performance,
)

__all__ = [
    "BreathingEvent",
    "BreathingState",
    "OutOfOrderEvent",
    "breathing_performance",
    "breathing_step",
    "GroundingEvaluation",
    "GroundingForm",
    "IncompleteForm",
    "grounding_evaluate",
    "BadDimensions",
    "Match3Board",
    "chain_is_valid",
    "match3_apply_chain",
    "match3_completed",
    "match3_find_chain",
    "match3_generate",
    "match3_has_moves",
    "match3_performance",
]
