"""Calibrated synthetic trial data.

Raw trial records are private, so demos, power checks, and the bundled
sample dataset are generated here instead, calibrated to the reported
group trajectories: perceived stress falling 28.9 -> 25.8 under the
intervention versus 29.2 -> 28.6 without it, and daily stress ratings
starting near 8.3 and ending near 5.1 versus 6.5 over two weeks.
"""

from __future__ import annotations

import math
import random

import numpy as np

from .dataset import Participant, ScaleResponse, TrialDataset, VasRecord
from .scales import (
    CERQ_ADAPTIVE,
    CERQ_SUBSCALES,
    GEQ_CORE_KEY,
    GEQ_ITEM_COUNT,
    PSS10_REVERSED_ITEMS,
)

# Perceived-stress calibration: (T0 mean, T0 sd, T2 mean, T2 sd).
PSS_CALIBRATION = {
    "intervention": (28.9, 3.25, 25.8, 2.44),
    "control": (29.2, 3.97, 28.6, 3.24),
}
PSS_BASELINE_CORRELATION = 0.6

# Daily-stress calibration: linear day-1 -> day-14 trajectories.
VAS_START = 8.3
VAS_END = {"intervention": 5.1, "control": 6.5}
VAS_SIGMA_U = 0.5
VAS_SIGMA_E = 0.4

TRIAL_DAYS = 14


def vas_line(group: str, days: int = TRIAL_DAYS):
    """Intercept and slope of the group's mean trajectory over day 1..days."""
    slope = (VAS_END[group] - VAS_START) / (days - 1)
    intercept = VAS_START - slope
    return intercept, slope


def simulate_pss_arrays(rng: np.random.Generator, n_per_group: int = 10):
    """Draw (t0, t2, group) arrays matching the calibrated means and SDs,
    with baseline correlation so the covariate carries real signal."""
    t0_parts, t2_parts, group_parts = [], [], []
    for indicator, group in ((1, "intervention"), (0, "control")):
        mu0, sd0, mu2, sd2 = PSS_CALIBRATION[group]
        z0 = rng.standard_normal(n_per_group)
        z2 = (
            PSS_BASELINE_CORRELATION * z0
            + math.sqrt(1 - PSS_BASELINE_CORRELATION**2)
            * rng.standard_normal(n_per_group)
        )
        t0_parts.append(mu0 + sd0 * z0)
        t2_parts.append(mu2 + sd2 * z2)
        group_parts.append(np.full(n_per_group, indicator, dtype=float))
    return (
        np.concatenate(t0_parts),
        np.concatenate(t2_parts),
        np.concatenate(group_parts),
    )


def simulate_vas_arrays(
    rng: np.random.Generator,
    n_per_group: int = 10,
    days: int = TRIAL_DAYS,
    betas=None,
    sigma_u: float = VAS_SIGMA_U,
    sigma_e: float = VAS_SIGMA_E,
):
    """Tidy (subjects, group, day, value) arrays from the interaction model.

    ``betas`` is (intercept, group, day, group-by-day); the default is the
    calibrated trajectory pair.
    """
    if betas is None:
        b0, b2 = vas_line("control", days)
        a0, a2 = vas_line("intervention", days)
        betas = (b0, a0 - b0, b2, a2 - b2)
    b_intercept, b_group, b_day, b_interaction = betas
    subjects, group_out, day_out, values = [], [], [], []
    day_grid = np.arange(1, days + 1, dtype=float)
    for index in range(2 * n_per_group):
        indicator = 1.0 if index < n_per_group else 0.0
        u = sigma_u * rng.standard_normal()
        noise = sigma_e * rng.standard_normal(days)
        mean = (
            b_intercept
            + b_group * indicator
            + b_day * day_grid
            + b_interaction * indicator * day_grid
        )
        series = mean + u + noise
        subjects.extend([index] * days)
        group_out.extend([indicator] * days)
        day_out.extend(day_grid)
        values.extend(series)
    return (
        subjects,
        np.asarray(group_out),
        np.asarray(day_out),
        np.asarray(values),
    )


# --- Item-level generation for the bundled sample dataset -------------------


def _distribute(total: int, slots: int, low: int, high: int, rng: random.Random):
    """Integer item vector in [low, high] summing to total, mildly shuffled."""
    span = high - low
    total = max(slots * low, min(slots * high, total))
    remainder = total - slots * low
    values = []
    for position in range(slots):
        slots_left = slots - position - 1
        lo = max(0, remainder - slots_left * span)
        hi = min(span, remainder)
        pick = rng.randint(lo, hi)
        values.append(low + pick)
        remainder -= pick
    rng.shuffle(values)
    return values


def _pss_items_for_total(total: int, rng: random.Random):
    contributions = _distribute(total, 10, 0, 4, rng)
    return [
        4 - c if position in PSS10_REVERSED_ITEMS else c
        for position, c in enumerate(contributions, start=1)
    ]


def _cerq_items(subscale_totals: dict, rng: random.Random):
    items = []
    for name in CERQ_SUBSCALES:
        items.extend(_distribute(subscale_totals[name], 4, 1, 5, rng))
    return items


_GEQ_TARGETS = {
    "competence": 3.0,
    "sensory_and_imaginative_immersion": 3.1,
    "flow": 3.1,
    "tension_annoyance": 1.1,
    "challenge": 2.6,
    "negative_affect": 1.0,
    "positive_affect": 3.3,
}

_SUS_CONTRIBUTION_TARGETS = (3.8, 2.2, 3.7, 1.6, 3.6, 1.9, 3.0, 1.5, 3.3, 1.6)
_PAESIS_TARGETS = (4.0, 3.5, 4.4, 3.7, 2.9)


def _clamp(value: float, lo: int, hi: int) -> int:
    return int(max(lo, min(hi, round(value))))


def make_trial_dataset(seed: int, n_per_group: int = 10, days: int = TRIAL_DAYS) -> TrialDataset:
    """Full item-level synthetic dataset in the trial's shape."""
    np_rng = np.random.default_rng(seed)
    rng = random.Random(seed)

    participants = []
    responses = []
    vas_records = []

    t0, t2, group = simulate_pss_arrays(np_rng, n_per_group)
    subjects, vgroup, vday, vvalue = simulate_vas_arrays(np_rng, n_per_group, days)

    ids = [f"i{k + 1:02d}" for k in range(n_per_group)] + [
        f"c{k + 1:02d}" for k in range(n_per_group)
    ]
    groups = ["intervention"] * n_per_group + ["control"] * n_per_group

    for index, (pid, group_name) in enumerate(zip(ids, groups)):
        participants.append(
            Participant(
                id=pid,
                group=group_name,
                age=_clamp(np_rng.normal(21.9, 1.9), 18, 25),
                gender="male" if index % 2 == 0 else "female",
            )
        )
        for timepoint, value in (("T0", t0[index]), ("T2", t2[index])):
            responses.append(
                ScaleResponse(
                    id=pid,
                    timepoint=timepoint,
                    instrument="PSS10",
                    items=tuple(_pss_items_for_total(_clamp(value, 0, 40), rng)),
                )
            )

        # Cognitive-regulation subscales: adaptive strategies drift up under
        # the intervention, maladaptive ones drift mildly down.
        base = {name: rng.randint(9, 13) for name in CERQ_SUBSCALES}
        shifted = {}
        for name in CERQ_SUBSCALES:
            if group_name == "intervention":
                drift = rng.randint(1, 3) if name in CERQ_ADAPTIVE else -rng.randint(0, 1)
            else:
                drift = rng.randint(-1, 1)
            shifted[name] = max(4, min(20, base[name] + drift))
        responses.append(
            ScaleResponse(pid, "T0", "CERQ", tuple(_cerq_items(base, rng)))
        )
        responses.append(
            ScaleResponse(pid, "T2", "CERQ", tuple(_cerq_items(shifted, rng)))
        )

        if group_name == "intervention":
            geq_items = [0] * GEQ_ITEM_COUNT
            for dimension, key in GEQ_CORE_KEY.items():
                for item in key:
                    geq_items[item - 1] = _clamp(
                        np_rng.normal(_GEQ_TARGETS[dimension], 0.5), 0, 4
                    )
            responses.append(ScaleResponse(pid, "T2", "GEQ", tuple(geq_items)))

            sus_items = []
            for position, target in enumerate(_SUS_CONTRIBUTION_TARGETS, start=1):
                contribution = _clamp(np_rng.normal(target, 0.7), 0, 4)
                sus_items.append(
                    contribution + 1 if position % 2 == 1 else 5 - contribution
                )
            responses.append(ScaleResponse(pid, "T2", "SUS", tuple(sus_items)))

            person_effect = np_rng.normal(0, 0.6)
            paesis_items = tuple(
                _clamp(np_rng.normal(target + person_effect, 0.5), 1, 5)
                for target in _PAESIS_TARGETS
            )
            responses.append(ScaleResponse(pid, "T2", "PAESIS", paesis_items))

    for subject, g, d, value in zip(subjects, vgroup, vday, vvalue):
        vas_records.append(
            VasRecord(
                id=ids[int(subject)],
                day=int(d),
                vas=float(round(min(10.0, max(0.0, value)), 2)),
            )
        )

    return TrialDataset(
        participants=tuple(participants),
        scale_responses=tuple(responses),
        vas_records=tuple(vas_records),
    )
