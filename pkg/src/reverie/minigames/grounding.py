"""Five-senses grounding exercise: name 5 seen, 4 touched, 3 heard,
2 smelled, and 1 tasted thing from an illustration."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional

from ..safety import RiskLexicon

SLOT_COUNTS = (("see", 5), ("touch", 4), ("hear", 3), ("smell", 2), ("taste", 1))
TOTAL_ITEMS = 15
MAX_QUALITY = 5.0


class IncompleteForm(ValueError):
    pass


@dataclass(frozen=True)
class GroundingForm:
    see_items: tuple
    touch_items: tuple
    hear_items: tuple
    smell_items: tuple
    taste_items: tuple
    image_ref: str = ""

    def slots(self):
        return (
            ("see", self.see_items),
            ("touch", self.touch_items),
            ("hear", self.hear_items),
            ("smell", self.smell_items),
            ("taste", self.taste_items),
        )

    def all_items(self) -> list:
        return [item for _, items in self.slots() for item in items]

    @classmethod
    def from_dict(cls, payload: dict) -> "GroundingForm":
        kwargs = {}
        for name, _ in SLOT_COUNTS:
            raw = payload.get(name, [])
            if not isinstance(raw, (list, tuple)):
                raise IncompleteForm(f"slot {name!r} must be a list of answers")
            kwargs[f"{name}_items"] = tuple(str(item) for item in raw)
        return cls(image_ref=payload.get("image_ref", ""), **kwargs)


@dataclass(frozen=True)
class GroundingEvaluation:
    completed: bool
    performance_points: float
    risk_phrase: Optional[str] = None


def _validate(form: GroundingForm) -> None:
    for (name, expected), (_, items) in zip(SLOT_COUNTS, form.slots()):
        if len(items) != expected:
            raise IncompleteForm(
                f"slot {name!r} needs exactly {expected} answers, got {len(items)}"
            )
        for item in items:
            if not item.strip():
                raise IncompleteForm(f"slot {name!r} contains an empty answer")


def grounding_evaluate(
    form: GroundingForm,
    evaluator: Optional[Callable[[list], float]] = None,
    lexicon: Optional[RiskLexicon] = None,
) -> GroundingEvaluation:
    """Score a submitted grounding form.

    Answers are screened against the risk lexicon first; a hit is an
    escalation signal, not a score. With no live evaluator the offline
    heuristic pays 5/15 point per distinct non-empty answer, so fifteen
    distinct answers earn the full 5 points.
    """
    _validate(form)
    answers = form.all_items()
    if lexicon is not None:
        for answer in answers:
            phrase = lexicon.match(answer)
            if phrase is not None:
                return GroundingEvaluation(
                    completed=False, performance_points=0.0, risk_phrase=phrase
                )
    if evaluator is not None:
        quality = float(evaluator(answers))
        points = min(max(quality, 0.0), MAX_QUALITY)
    else:
        distinct = {answer.strip().casefold() for answer in answers}
        points = len(distinct) * MAX_QUALITY / TOTAL_ITEMS
    return GroundingEvaluation(completed=True, performance_points=points)
