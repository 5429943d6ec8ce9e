"""Psychometric scale scoring and internal-consistency reliability.

Implements the five instruments the trial pipeline ingests: the 10-item
perceived-stress scale, the 36-item cognitive emotion regulation
questionnaire, the 33-item game experience core module, the system
usability scale, and the 5-item perceived AI emotional-support scale.
"""

from __future__ import annotations

import numpy as np


class WrongItemCount(ValueError):
    pass


class OutOfRange(ValueError):
    pass


class DegenerateData(ValueError):
    pass


def _check_items(items, count: int, lo: int, hi: int, instrument: str) -> list:
    items = list(items)
    if len(items) != count:
        raise WrongItemCount(
            f"{instrument} needs exactly {count} items, got {len(items)}"
        )
    cleaned = []
    for position, value in enumerate(items, start=1):
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise OutOfRange(f"{instrument} item {position}: {value!r} is not numeric")
        if float(value) != int(value):
            raise OutOfRange(f"{instrument} item {position}: {value!r} is not integral")
        value = int(value)
        if not lo <= value <= hi:
            raise OutOfRange(
                f"{instrument} item {position}: {value} outside [{lo}, {hi}]"
            )
        cleaned.append(value)
    return cleaned


# --- Perceived stress (10 items, 0-4, total 0-40) -------------------------

PSS10_REVERSED_ITEMS = (4, 5, 7, 8)  # 1-based positions, reversed as 4 - raw


def score_pss10(items) -> int:
    items = _check_items(items, 10, 0, 4, "PSS10")
    total = 0
    for position, value in enumerate(items, start=1):
        total += 4 - value if position in PSS10_REVERSED_ITEMS else value
    return total


# --- Cognitive emotion regulation (36 items, 1-5, nine 4-item subscales) ---

CERQ_SUBSCALES = (
    "self_blame",
    "acceptance",
    "rumination",
    "positive_refocusing",
    "refocus_on_planning",
    "positive_reappraisal",
    "putting_into_perspective",
    "catastrophizing",
    "blaming_others",
)

CERQ_ADAPTIVE = (
    "acceptance",
    "positive_refocusing",
    "refocus_on_planning",
    "positive_reappraisal",
    "putting_into_perspective",
)

CERQ_MALADAPTIVE = ("self_blame", "rumination", "catastrophizing", "blaming_others")


def score_cerq(items) -> dict:
    """Sum each consecutive 4-item block into its subscale (range 4-20)."""
    items = _check_items(items, 36, 1, 5, "CERQ")
    return {
        name: sum(items[block * 4 : block * 4 + 4])
        for block, name in enumerate(CERQ_SUBSCALES)
    }


# --- Game experience core module (33 items, 0-4, seven dimension means) ----

GEQ_CORE_KEY = {
    "competence": (2, 10, 15, 17, 21),
    "sensory_and_imaginative_immersion": (3, 12, 18, 19, 27, 30),
    "flow": (5, 13, 25, 28, 31),
    "tension_annoyance": (22, 24, 29),
    "challenge": (11, 23, 26, 32, 33),
    "negative_affect": (7, 8, 9, 16),
    "positive_affect": (1, 4, 6, 14, 20),
}

GEQ_ITEM_COUNT = 33


def score_geq(items) -> dict:
    items = _check_items(items, GEQ_ITEM_COUNT, 0, 4, "GEQ")
    return {
        dimension: sum(items[i - 1] for i in key) / len(key)
        for dimension, key in GEQ_CORE_KEY.items()
    }


# --- System usability scale (10 items, 1-5) --------------------------------

def sus_contributions(items) -> list:
    """Per-item 0-4 contributions: odd items raw-1, even items 5-raw."""
    items = _check_items(items, 10, 1, 5, "SUS")
    return [
        value - 1 if position % 2 == 1 else 5 - value
        for position, value in enumerate(items, start=1)
    ]


def sus_scores_from_contributions(contributions) -> dict:
    """Total and the usability/learnability subscales from contributions.

    Learnability is items 4 and 10 rescaled to 0-100; usability is the
    other eight. Accepts fractional contributions so group-mean vectors
    score directly.
    """
    contributions = [float(c) for c in contributions]
    if len(contributions) != 10:
        raise WrongItemCount(
            f"SUS needs exactly 10 contributions, got {len(contributions)}"
        )
    for position, value in enumerate(contributions, start=1):
        if not 0 <= value <= 4:
            raise OutOfRange(f"SUS contribution {position}: {value} outside [0, 4]")
    learn = contributions[3] + contributions[9]
    total = sum(contributions)
    return {
        "total": total * 2.5,
        "usability": (total - learn) / 32 * 100,
        "learnability": learn / 8 * 100,
    }


def score_sus(items) -> dict:
    return sus_scores_from_contributions(sus_contributions(items))


# --- Perceived AI emotional support (5 items, 1-5, total 5-25) --------------

PAESIS_ITEM_COUNT = 5


def score_paesis(items) -> int:
    return sum(_check_items(items, PAESIS_ITEM_COUNT, 1, 5, "PAESIS"))


# --- Reliability -------------------------------------------------------------

def cronbach_alpha(matrix) -> float:
    """Internal consistency: k/(k-1) * (1 - sum of item variances over the
    variance of the total score), with sample (n-1) variances throughout.

    The (n-1) divisor is what makes a matrix of k identical items come out
    at exactly 1.0.
    """
    matrix = np.asarray(matrix, dtype=float)
    if matrix.ndim != 2 or matrix.shape[0] < 2 or matrix.shape[1] < 2:
        raise DegenerateData("need at least 2 persons and 2 items")
    k = matrix.shape[1]
    item_variances = np.var(matrix, axis=0, ddof=1)
    total_variance = float(np.var(matrix.sum(axis=1), ddof=1))
    if total_variance == 0:
        raise DegenerateData("total score has zero variance")
    return float(k / (k - 1) * (1.0 - item_variances.sum() / total_variance))


# --- Instrument registry (shared by ingestion and the CLI) ------------------

INSTRUMENTS = {
    "PSS10": {"items": 10, "min": 0, "max": 4, "score": score_pss10},
    "CERQ": {"items": 36, "min": 1, "max": 5, "score": score_cerq},
    "GEQ": {"items": GEQ_ITEM_COUNT, "min": 0, "max": 4, "score": score_geq},
    "SUS": {"items": 10, "min": 1, "max": 5, "score": score_sus},
    "PAESIS": {"items": PAESIS_ITEM_COUNT, "min": 1, "max": 5, "score": score_paesis},
}
