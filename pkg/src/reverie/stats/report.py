"""Whole-trial analysis: descriptives, baseline-adjusted group effect,
daily-trajectory mixed model, subscale change comparisons, reliability,
and usability descriptives, emitted as JSON plus a markdown rendering.

All tests are two-tailed at alpha = 0.05.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .dataset import TrialDataset
from .linmod import ancova
from .lmm import fit_lmm_random_intercept
from .scales import (
    CERQ_SUBSCALES,
    GEQ_CORE_KEY,
    cronbach_alpha,
    score_cerq,
    score_geq,
    score_paesis,
    score_pss10,
    sus_contributions,
    sus_scores_from_contributions,
)
from .ttests import DegenerateData, two_sample_t_test

ALPHA = 0.05


@dataclass(frozen=True)
class AnalysisReport:
    sections: dict

    def to_json_dict(self) -> dict:
        return json.loads(json.dumps(self.sections))

    def to_json(self, indent: int = 2) -> str:
        return json.dumps(self.sections, indent=indent, sort_keys=True)

    def render_markdown(self) -> str:
        return render_markdown(self)


def _mean_sd(values) -> dict:
    values = np.asarray(values, dtype=float)
    if values.size == 0:
        return {"n": 0, "mean": None, "sd": None}
    return {
        "n": int(values.size),
        "mean": float(np.mean(values)),
        "sd": float(np.std(values, ddof=1)) if values.size > 1 else None,
    }


def _safe_welch(a, b):
    try:
        return two_sample_t_test(a, b).to_dict()
    except DegenerateData as exc:
        return {"skipped": True, "reason": str(exc)}


def _paired_scores(dataset: TrialDataset, instrument: str, scorer, group: str):
    """Participants of a group with both timepoints, scored: (ids, t0, t2)."""
    t0_map = {r.id: scorer(r.items) for r in dataset.responses(instrument, "T0", group)}
    t2_map = {r.id: scorer(r.items) for r in dataset.responses(instrument, "T2", group)}
    ids = sorted(set(t0_map) & set(t2_map))
    return ids, [t0_map[i] for i in ids], [t2_map[i] for i in ids]


def analyze_trial(dataset: TrialDataset) -> AnalysisReport:
    sections: dict = {
        "meta": {"alpha": ALPHA, "two_tailed": True},
        "demographics": _demographics(dataset),
        "pss10": _pss10_section(dataset),
        "ancova_pss10": _ancova_section(dataset),
        "lmm_vas": _lmm_section(dataset),
        "cerq_levels": _cerq_levels_section(dataset),
        "cerq_changes": _cerq_section(dataset),
        "geq": _geq_section(dataset),
        "paesis": _paesis_section(dataset),
        "sus": _sus_section(dataset),
    }
    return AnalysisReport(sections=sections)


def _demographics(dataset: TrialDataset) -> dict:
    out = {}
    ages = {}
    for group in ("intervention", "control"):
        members = [p for p in dataset.participants if p.group == group]
        ages[group] = [p.age for p in members]
        genders: dict = {}
        for p in members:
            genders[p.gender] = genders.get(p.gender, 0) + 1
        out[group] = {
            "n": len(members),
            "age": _mean_sd(ages[group]),
            "gender_counts": genders,
        }
    if min(len(v) for v in ages.values()) >= 2:
        out["age_comparison"] = _safe_welch(ages["intervention"], ages["control"])
    return out


def _pss10_section(dataset: TrialDataset) -> dict:
    out = {}
    baselines = {}
    for group in ("intervention", "control"):
        entry = {}
        for timepoint in ("T0", "T2"):
            scores = [
                score_pss10(r.items)
                for r in dataset.responses("PSS10", timepoint, group)
            ]
            entry[timepoint] = _mean_sd(scores)
            if timepoint == "T0":
                baselines[group] = scores
        out[group] = entry
    if min(len(v) for v in baselines.values()) >= 2:
        out["baseline_comparison"] = _safe_welch(
            baselines["intervention"], baselines["control"]
        )
    return out


def _ancova_section(dataset: TrialDataset) -> dict:
    ids_i, t0_i, t2_i = _paired_scores(dataset, "PSS10", score_pss10, "intervention")
    ids_c, t0_c, t2_c = _paired_scores(dataset, "PSS10", score_pss10, "control")
    if len(ids_i) + len(ids_c) < 4 or not ids_i or not ids_c:
        return {"skipped": True, "reason": "not enough paired PSS10 scores"}
    fit = ancova(
        t2=t2_i + t2_c,
        group=[1] * len(ids_i) + [0] * len(ids_c),
        t0=t0_i + t0_c,
    )
    return {
        "fit": fit.to_dict(),
        "adjusted_group_effect": fit.coef("group"),
        "p_value": fit.p_value("group"),
        "significant": fit.p_value("group") < ALPHA,
    }


def _lmm_section(dataset: TrialDataset) -> dict:
    if not dataset.vas_records:
        return {"skipped": True, "reason": "no daily stress records"}
    subjects, group, day, value = [], [], [], []
    for record in dataset.vas_records:
        subjects.append(record.id)
        group.append(1.0 if dataset.group_of(record.id) == "intervention" else 0.0)
        day.append(float(record.day))
        value.append(record.vas)
    if len(set(subjects)) < 2 or len(set(group)) < 2:
        return {"skipped": True, "reason": "need both groups with daily records"}
    fit = fit_lmm_random_intercept(subjects, group, day, value)
    return {
        "fit": fit.to_dict(),
        "interaction_effect": fit.coef("group_x_day"),
        "p_value": fit.p_value("group_x_day"),
        "significant": fit.p_value("group_x_day") < ALPHA,
    }


def _cerq_levels_section(dataset: TrialDataset) -> dict:
    """Per-subscale group means at both timepoints."""
    out: dict = {}
    for group in ("intervention", "control"):
        out[group] = {}
        for timepoint in ("T0", "T2"):
            scored = [
                score_cerq(r.items)
                for r in dataset.responses("CERQ", timepoint, group)
            ]
            out[group][timepoint] = {
                name: _mean_sd([s[name] for s in scored]) for name in CERQ_SUBSCALES
            }
    return out


def _geq_section(dataset: TrialDataset) -> dict:
    """Game-experience dimension means for whoever filled the core module."""
    responses = dataset.responses("GEQ", "T2")
    if not responses:
        return {"skipped": True, "reason": "no GEQ responses"}
    scored = [score_geq(r.items) for r in responses]
    return {
        "n": len(responses),
        "dimensions": {
            dimension: _mean_sd([s[dimension] for s in scored])
            for dimension in GEQ_CORE_KEY
        },
    }


def _cerq_section(dataset: TrialDataset) -> dict:
    changes: dict = {}
    for group in ("intervention", "control"):
        ids, t0_subscales, t2_subscales = [], [], []
        t0_map = {r.id: score_cerq(r.items) for r in dataset.responses("CERQ", "T0", group)}
        t2_map = {r.id: score_cerq(r.items) for r in dataset.responses("CERQ", "T2", group)}
        for pid in sorted(set(t0_map) & set(t2_map)):
            ids.append(pid)
            t0_subscales.append(t0_map[pid])
            t2_subscales.append(t2_map[pid])
        changes[group] = {
            name: [t2[name] - t0[name] for t0, t2 in zip(t0_subscales, t2_subscales)]
            for name in CERQ_SUBSCALES
        }
    out = {}
    for name in CERQ_SUBSCALES:
        i_changes = changes["intervention"][name]
        c_changes = changes["control"][name]
        entry = {
            "intervention_change": _mean_sd(i_changes),
            "control_change": _mean_sd(c_changes),
        }
        if len(i_changes) >= 2 and len(c_changes) >= 2:
            test = _safe_welch(i_changes, c_changes)
            entry["welch"] = test
            if "p" in test:
                entry["significant"] = test["p"] < ALPHA
        out[name] = entry
    return out


def _paesis_section(dataset: TrialDataset) -> dict:
    responses = dataset.responses("PAESIS", "T2")
    if not responses:
        return {"skipped": True, "reason": "no PAESIS responses"}
    matrix = np.asarray([r.items for r in responses], dtype=float)
    totals = [score_paesis(r.items) for r in responses]
    out = {
        "n": len(responses),
        "item_means": [float(v) for v in matrix.mean(axis=0)],
        "item_sds": [
            float(v) for v in matrix.std(axis=0, ddof=1)
        ] if len(responses) > 1 else None,
        "total": _mean_sd(totals),
    }
    try:
        out["cronbach_alpha"] = cronbach_alpha(matrix)
        out["acceptable_consistency"] = out["cronbach_alpha"] > 0.7
    except DegenerateData as exc:
        out["cronbach_alpha"] = None
        out["alpha_note"] = str(exc)
    return out


def _sus_section(dataset: TrialDataset) -> dict:
    responses = dataset.responses("SUS", "T2")
    if not responses:
        return {"skipped": True, "reason": "no SUS responses"}
    contribution_matrix = np.asarray(
        [sus_contributions(r.items) for r in responses], dtype=float
    )
    totals = [float(row.sum() * 2.5) for row in contribution_matrix]
    mean_contributions = contribution_matrix.mean(axis=0)
    subscales = sus_scores_from_contributions(mean_contributions)
    return {
        "n": len(responses),
        "contribution_means": [float(v) for v in mean_contributions],
        "contribution_sds": [
            float(v) for v in contribution_matrix.std(axis=0, ddof=1)
        ] if len(responses) > 1 else None,
        "total": {
            "mean": float(np.mean(totals)),
            "sd": float(np.std(totals, ddof=1)) if len(totals) > 1 else None,
            "min": float(np.min(totals)),
            "max": float(np.max(totals)),
            "median": float(np.median(totals)),
        },
        "usability": subscales["usability"],
        "learnability": subscales["learnability"],
    }


# --- Markdown rendering -------------------------------------------------------


def _fmt(value, digits=2) -> str:
    if value is None:
        return "-"
    if isinstance(value, bool):
        return "yes" if value else "no"
    if isinstance(value, float):
        return f"{value:.{digits}f}"
    return str(value)


def _fmt_p(p) -> str:
    if p is None:
        return "-"
    if p < 0.001:
        return "<0.001"
    return f"{p:.3f}"


def render_markdown(report: AnalysisReport) -> str:
    s = report.sections
    lines = ["# Trial analysis report", ""]

    demo = s["demographics"]
    lines += [
        "## Participants",
        "",
        "| Variable | Intervention | Control | p |",
        "| --- | --- | --- | --- |",
    ]
    age_p = demo.get("age_comparison", {}).get("p")
    for label, key in (("N", "n"),):
        lines.append(
            f"| {label} | {demo['intervention'][key]} | {demo['control'][key]} | - |"
        )
    gender = [
        "/".join(f"{k}:{v}" for k, v in sorted(demo[g]["gender_counts"].items()))
        for g in ("intervention", "control")
    ]
    lines.append(f"| Gender | {gender[0]} | {gender[1]} | - |")
    lines.append(
        "| Age (M±SD) | "
        f"{_fmt(demo['intervention']['age']['mean'])}±{_fmt(demo['intervention']['age']['sd'])} | "
        f"{_fmt(demo['control']['age']['mean'])}±{_fmt(demo['control']['age']['sd'])} | "
        f"{_fmt_p(age_p)} |"
    )
    pss = s["pss10"]
    baseline_p = pss.get("baseline_comparison", {}).get("p")
    lines.append(
        "| Stress baseline (M±SD) | "
        f"{_fmt(pss['intervention']['T0']['mean'])}±{_fmt(pss['intervention']['T0']['sd'])} | "
        f"{_fmt(pss['control']['T0']['mean'])}±{_fmt(pss['control']['T0']['sd'])} | "
        f"{_fmt_p(baseline_p)} |"
    )
    lines.append("")

    lines += [
        "## Perceived stress (pre/post)",
        "",
        "| Group | T0 M±SD | T2 M±SD |",
        "| --- | --- | --- |",
    ]
    for group in ("intervention", "control"):
        entry = pss[group]
        lines.append(
            f"| {group} | {_fmt(entry['T0']['mean'])}±{_fmt(entry['T0']['sd'])} | "
            f"{_fmt(entry['T2']['mean'])}±{_fmt(entry['T2']['sd'])} |"
        )
    lines.append("")

    anc = s["ancova_pss10"]
    lines.append("## Baseline-adjusted group effect on perceived stress")
    lines.append("")
    if anc.get("skipped"):
        lines.append(f"Skipped: {anc['reason']}.")
    else:
        lines.append(
            f"Adjusted group effect {_fmt(anc['adjusted_group_effect'])} "
            f"(p={_fmt_p(anc['p_value'])}, significant: {_fmt(anc['significant'])})."
        )
    lines.append("")

    lmm = s["lmm_vas"]
    lines.append("## Daily stress trajectory (mixed model)")
    lines.append("")
    if lmm.get("skipped"):
        lines.append(f"Skipped: {lmm['reason']}.")
    else:
        fit = lmm["fit"]
        lines += [
            "| Effect | Estimate | SE | z | p |",
            "| --- | --- | --- | --- | --- |",
        ]
        for name, coefficient, se, stat, p in zip(
            fit["names"],
            fit["coefficients"],
            fit["standard_errors"],
            fit["test_statistics"],
            fit["p_values"],
        ):
            lines.append(
                f"| {name} | {_fmt(coefficient, 4)} | {_fmt(se, 4)} | "
                f"{_fmt(stat)} | {_fmt_p(p)} |"
            )
        vc = fit["variance_components"]
        lines.append("")
        lines.append(
            f"Variance components: subject {_fmt(vc['sigma2_u'], 4)}, "
            f"residual {_fmt(vc['sigma2_e'], 4)}; inference: {fit['dof_method']}."
        )
    lines.append("")

    lines += [
        "## Cognitive emotion regulation changes (T2 - T0)",
        "",
        "| Subscale | Intervention Δ M±SD | Control Δ M±SD | p |",
        "| --- | --- | --- | --- |",
    ]
    for name in CERQ_SUBSCALES:
        entry = s["cerq_changes"].get(name)
        if entry is None:
            continue
        ic, cc = entry["intervention_change"], entry["control_change"]
        p = entry.get("welch", {}).get("p")
        lines.append(
            f"| {name} | {_fmt(ic['mean'])}±{_fmt(ic['sd'])} | "
            f"{_fmt(cc['mean'])}±{_fmt(cc['sd'])} | {_fmt_p(p)} |"
        )
    lines.append("")

    geq = s["geq"]
    lines.append("## Game experience dimensions")
    lines.append("")
    if geq.get("skipped"):
        lines.append(f"Skipped: {geq['reason']}.")
    else:
        lines += ["| Dimension | M±SD |", "| --- | --- |"]
        for dimension, stats in geq["dimensions"].items():
            lines.append(
                f"| {dimension} | {_fmt(stats['mean'])}±{_fmt(stats['sd'])} |"
            )
    lines.append("")

    sus = s["sus"]
    lines.append("## System usability")
    lines.append("")
    if sus.get("skipped"):
        lines.append(f"Skipped: {sus['reason']}.")
    else:
        header = " | ".join(f"Q{i}" for i in range(1, 11))
        lines += [
            f"| | {header} |",
            "| --- |" + " --- |" * 10,
            "| Mean | "
            + " | ".join(_fmt(v) for v in sus["contribution_means"])
            + " |",
        ]
        if sus["contribution_sds"]:
            lines.append(
                "| SD | " + " | ".join(_fmt(v) for v in sus["contribution_sds"]) + " |"
            )
        total = sus["total"]
        lines += [
            "",
            "| Mean | SD | Min | Max | Median | Usability | Learnability |",
            "| --- | --- | --- | --- | --- | --- | --- |",
            f"| {_fmt(total['mean'])} | {_fmt(total['sd'])} | {_fmt(total['min'])} | "
            f"{_fmt(total['max'])} | {_fmt(total['median'])} | "
            f"{_fmt(sus['usability'], 3)} | {_fmt(sus['learnability'], 1)} |",
        ]
    lines.append("")

    paesis = s["paesis"]
    lines.append("## Perceived AI emotional support")
    lines.append("")
    if paesis.get("skipped"):
        lines.append(f"Skipped: {paesis['reason']}.")
    else:
        header = " | ".join(f"Q{i}" for i in range(1, 6))
        lines += [
            f"| | {header} | Total |",
            "| --- |" + " --- |" * 6,
            "| Mean | "
            + " | ".join(_fmt(v) for v in paesis["item_means"])
            + f" | {_fmt(paesis['total']['mean'])} |",
        ]
        if paesis["item_sds"]:
            lines.append(
                "| SD | "
                + " | ".join(_fmt(v) for v in paesis["item_sds"])
                + f" | {_fmt(paesis['total']['sd'])} |"
            )
        alpha = paesis.get("cronbach_alpha")
        lines.append("")
        lines.append(f"Internal consistency: alpha = {_fmt(alpha)}.")
    lines.append("")
    lines.append(
        f"All tests two-tailed at alpha = {s['meta']['alpha']}."
    )
    return "\n".join(lines) + "\n"
