import json

import pytest

from reverie.stats import (
    DatasetError,
    TrialDataset,
    analyze_trial,
    load_trial_dataset,
    make_trial_dataset,
    write_trial_csvs,
)


@pytest.fixture(scope="module")
def dataset():
    return make_trial_dataset(seed=2026)


def write_and_load(dataset, directory):
    write_trial_csvs(dataset, directory)
    return load_trial_dataset(directory)


class TestIngestion:
    def test_round_trip_through_csv(self, dataset, tmp_path):
        loaded = write_and_load(dataset, tmp_path)
        assert loaded.participants == dataset.participants
        # The loader groups long-format rows and orders them canonically;
        # contents must survive exactly.
        assert set(loaded.scale_responses) == set(dataset.scale_responses)
        assert loaded.vas_records == dataset.vas_records

    def test_missing_participants_file(self, tmp_path):
        with pytest.raises(DatasetError, match="participants.csv"):
            load_trial_dataset(tmp_path)

    def test_unknown_instrument_aborts_with_coordinates(self, dataset, tmp_path):
        write_trial_csvs(dataset, tmp_path)
        scales = tmp_path / "scales.csv"
        with scales.open("a") as handle:
            handle.write("i01,T0,MOOD99,1,3\n")
        with pytest.raises(DatasetError) as excinfo:
            load_trial_dataset(tmp_path)
        message = str(excinfo.value)
        assert "MOOD99" in message and "scales.csv" in message
        # Row coordinate present (some line number is cited).
        assert any(part.isdigit() for part in message.split(":"))

    def test_item_count_mismatch_aborts(self, dataset, tmp_path):
        write_trial_csvs(dataset, tmp_path)
        scales = tmp_path / "scales.csv"
        lines = scales.read_text().strip().split("\n")
        # Drop one PSS10 item row for participant i01 at T0.
        victim = next(
            i for i, line in enumerate(lines) if line.startswith("i01,T0,PSS10,10,")
        )
        scales.write_text("\n".join(lines[:victim] + lines[victim + 1 :]) + "\n")
        with pytest.raises(DatasetError, match="9 of 10 items"):
            load_trial_dataset(tmp_path)

    def test_unknown_participant_in_vas(self, dataset, tmp_path):
        write_trial_csvs(dataset, tmp_path)
        with (tmp_path / "vas.csv").open("a") as handle:
            handle.write("ghost,3,5.0\n")
        with pytest.raises(DatasetError, match="ghost"):
            load_trial_dataset(tmp_path)

    def test_out_of_range_value_aborts(self, dataset, tmp_path):
        write_trial_csvs(dataset, tmp_path)
        with (tmp_path / "scales.csv").open("a") as handle:
            handle.write("i01,T0,CERQ,1,9\n")
        with pytest.raises(DatasetError, match="outside"):
            load_trial_dataset(tmp_path)

    def test_bad_group_label(self, dataset, tmp_path):
        write_trial_csvs(dataset, tmp_path)
        participants = tmp_path / "participants.csv"
        text = participants.read_text().replace("intervention", "treated", 1)
        participants.write_text(text)
        with pytest.raises(DatasetError, match="group"):
            load_trial_dataset(tmp_path)


class TestAnalysis:
    def test_report_shows_larger_intervention_decline(self, dataset):
        report = analyze_trial(dataset)
        pss = report.sections["pss10"]
        decline_i = pss["intervention"]["T0"]["mean"] - pss["intervention"]["T2"]["mean"]
        decline_c = pss["control"]["T0"]["mean"] - pss["control"]["T2"]["mean"]
        assert decline_i > decline_c
        assert report.sections["ancova_pss10"]["adjusted_group_effect"] < 0
        assert report.sections["lmm_vas"]["interaction_effect"] < 0

    def test_report_serialization_round_trips(self, dataset):
        report = analyze_trial(dataset)
        blob = report.to_json()
        assert json.loads(blob) == report.to_json_dict()

    def test_empty_vas_marks_lmm_skipped(self, dataset):
        trimmed = TrialDataset(
            participants=dataset.participants,
            scale_responses=dataset.scale_responses,
            vas_records=(),
        )
        report = analyze_trial(trimmed)
        assert report.sections["lmm_vas"]["skipped"] is True

    def test_cerq_changes_cover_all_subscales(self, dataset):
        report = analyze_trial(dataset)
        assert len(report.sections["cerq_changes"]) == 9
        for entry in report.sections["cerq_changes"].values():
            assert "welch" in entry

    def test_geq_and_cerq_level_descriptives(self, dataset):
        report = analyze_trial(dataset)
        geq = report.sections["geq"]
        assert geq["n"] == 10
        assert set(geq["dimensions"]) == {
            "competence",
            "sensory_and_imaginative_immersion",
            "flow",
            "tension_annoyance",
            "challenge",
            "negative_affect",
            "positive_affect",
        }
        assert all(0 <= d["mean"] <= 4 for d in geq["dimensions"].values())
        levels = report.sections["cerq_levels"]
        assert levels["intervention"]["T0"]["rumination"]["n"] == 10
        assert 4 <= levels["control"]["T2"]["acceptance"]["mean"] <= 20

    def test_usability_sections_present(self, dataset):
        report = analyze_trial(dataset)
        sus = report.sections["sus"]
        assert sus["n"] == 10
        assert 0 <= sus["usability"] <= 100
        assert 0 <= sus["learnability"] <= 100
        paesis = report.sections["paesis"]
        assert paesis["total"]["mean"] > 0
        assert paesis["cronbach_alpha"] is not None

    def test_markdown_renders_all_sections(self, dataset):
        text = analyze_trial(dataset).render_markdown()
        for heading in (
            "## Participants",
            "## Perceived stress (pre/post)",
            "## Baseline-adjusted group effect",
            "## Daily stress trajectory",
            "## Cognitive emotion regulation changes",
            "## Game experience dimensions",
            "## System usability",
            "## Perceived AI emotional support",
        ):
            assert heading in text

    def test_markdown_handles_skipped_sections(self, dataset):
        trimmed = TrialDataset(
            participants=dataset.participants,
            scale_responses=tuple(
                r for r in dataset.scale_responses if r.instrument == "PSS10"
            ),
            vas_records=(),
        )
        text = analyze_trial(trimmed).render_markdown()
        assert "Skipped" in text


class TestSyntheticCalibration:
    def test_group_means_land_near_targets(self):
        # Average over many draws: the generator is calibrated, not exact.
        import numpy as np

        totals = {"intervention": [[], []], "control": [[], []]}
        for seed in range(30):
            ds = make_trial_dataset(seed=seed, n_per_group=10)
            report = analyze_trial(ds)
            for group in totals:
                section = report.sections["pss10"][group]
                totals[group][0].append(section["T0"]["mean"])
                totals[group][1].append(section["T2"]["mean"])
        assert np.mean(totals["intervention"][0]) == pytest.approx(28.9, abs=0.8)
        assert np.mean(totals["intervention"][1]) == pytest.approx(25.8, abs=0.8)
        assert np.mean(totals["control"][0]) == pytest.approx(29.2, abs=0.8)
        assert np.mean(totals["control"][1]) == pytest.approx(28.6, abs=0.8)
