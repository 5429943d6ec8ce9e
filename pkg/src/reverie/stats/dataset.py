"""Strict ingestion of trial data files.

Three UTF-8 CSVs with header rows: participants.csv (id,group,age,gender),
scales.csv (id,timepoint,instrument,item_index,value) in long format, and
vas.csv (id,day,vas). Anything unexpected aborts with the file, row, and
column it came from; silent repair would poison the analysis downstream.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field
from pathlib import Path

from .scales import INSTRUMENTS

GROUPS = ("intervention", "control")
TIMEPOINTS = ("T0", "T2")
VAS_MAX_DAY = 14


class DatasetError(ValueError):
    pass


@dataclass(frozen=True)
class Participant:
    id: str
    group: str
    age: int
    gender: str


@dataclass(frozen=True)
class ScaleResponse:
    id: str
    timepoint: str
    instrument: str
    items: tuple


@dataclass(frozen=True)
class VasRecord:
    id: str
    day: int
    vas: float


@dataclass(frozen=True)
class TrialDataset:
    participants: tuple
    scale_responses: tuple
    vas_records: tuple

    def group_of(self, participant_id: str) -> str:
        for participant in self.participants:
            if participant.id == participant_id:
                return participant.group
        raise KeyError(participant_id)

    def ids_in_group(self, group: str) -> list:
        return [p.id for p in self.participants if p.group == group]

    def responses(self, instrument: str, timepoint: str, group=None) -> list:
        wanted = None if group is None else set(self.ids_in_group(group))
        return [
            r
            for r in self.scale_responses
            if r.instrument == instrument
            and r.timepoint == timepoint
            and (wanted is None or r.id in wanted)
        ]

    def vas_for(self, participant_id: str) -> list:
        return sorted(
            (r for r in self.vas_records if r.id == participant_id),
            key=lambda r: r.day,
        )


def _require_columns(fieldnames, required, path):
    missing = [c for c in required if c not in (fieldnames or [])]
    if missing:
        raise DatasetError(f"{path}: missing required columns {missing}")


def _load_participants(path: Path) -> tuple:
    participants = []
    seen = set()
    with path.open(newline="", encoding="utf-8") as handle:
        reader = csv.DictReader(handle)
        _require_columns(reader.fieldnames, ("id", "group", "age", "gender"), path)
        for row_number, row in enumerate(reader, start=2):
            pid = (row["id"] or "").strip()
            if not pid:
                raise DatasetError(f"{path}:{row_number}: empty id")
            if pid in seen:
                raise DatasetError(f"{path}:{row_number}: duplicate id {pid!r}")
            seen.add(pid)
            group = (row["group"] or "").strip()
            if group not in GROUPS:
                raise DatasetError(
                    f"{path}:{row_number}: column 'group': {group!r} not in {GROUPS}"
                )
            try:
                age = int(row["age"])
            except (TypeError, ValueError):
                raise DatasetError(
                    f"{path}:{row_number}: column 'age': {row['age']!r} is not an integer"
                )
            participants.append(
                Participant(id=pid, group=group, age=age, gender=(row["gender"] or "").strip())
            )
    return tuple(participants)


def _load_scales(path: Path, known_ids: set) -> tuple:
    cells: dict = {}
    with path.open(newline="", encoding="utf-8") as handle:
        reader = csv.DictReader(handle)
        _require_columns(
            reader.fieldnames,
            ("id", "timepoint", "instrument", "item_index", "value"),
            path,
        )
        for row_number, row in enumerate(reader, start=2):
            pid = (row["id"] or "").strip()
            if pid not in known_ids:
                raise DatasetError(
                    f"{path}:{row_number}: column 'id': unknown participant {pid!r}"
                )
            timepoint = (row["timepoint"] or "").strip()
            if timepoint not in TIMEPOINTS:
                raise DatasetError(
                    f"{path}:{row_number}: column 'timepoint': {timepoint!r} not in {TIMEPOINTS}"
                )
            instrument = (row["instrument"] or "").strip()
            if instrument not in INSTRUMENTS:
                raise DatasetError(
                    f"{path}:{row_number}: column 'instrument': unknown instrument "
                    f"{instrument!r}; known: {sorted(INSTRUMENTS)}"
                )
            spec = INSTRUMENTS[instrument]
            try:
                index = int(row["item_index"])
            except (TypeError, ValueError):
                raise DatasetError(
                    f"{path}:{row_number}: column 'item_index': {row['item_index']!r}"
                    " is not an integer"
                )
            if not 1 <= index <= spec["items"]:
                raise DatasetError(
                    f"{path}:{row_number}: column 'item_index': {index} outside "
                    f"1..{spec['items']} for {instrument}"
                )
            try:
                value = int(row["value"])
            except (TypeError, ValueError):
                raise DatasetError(
                    f"{path}:{row_number}: column 'value': {row['value']!r} is not an integer"
                )
            if not spec["min"] <= value <= spec["max"]:
                raise DatasetError(
                    f"{path}:{row_number}: column 'value': {value} outside "
                    f"[{spec['min']}, {spec['max']}] for {instrument}"
                )
            key = (pid, timepoint, instrument)
            slot = cells.setdefault(key, {})
            if index in slot:
                raise DatasetError(
                    f"{path}:{row_number}: duplicate item {index} for {key}"
                )
            slot[index] = value

    responses = []
    for (pid, timepoint, instrument), slot in sorted(cells.items()):
        expected = INSTRUMENTS[instrument]["items"]
        if len(slot) != expected:
            missing = sorted(set(range(1, expected + 1)) - set(slot))
            shown = missing if len(missing) <= 5 else missing[:5] + ["..."]
            raise DatasetError(
                f"{path}: participant {pid!r} {instrument}@{timepoint} has "
                f"{len(slot)} of {expected} items (missing {shown})"
            )
        responses.append(
            ScaleResponse(
                id=pid,
                timepoint=timepoint,
                instrument=instrument,
                items=tuple(slot[i] for i in range(1, expected + 1)),
            )
        )
    return tuple(responses)


def _load_vas(path: Path, known_ids: set) -> tuple:
    records = []
    with path.open(newline="", encoding="utf-8") as handle:
        reader = csv.DictReader(handle)
        _require_columns(reader.fieldnames, ("id", "day", "vas"), path)
        for row_number, row in enumerate(reader, start=2):
            pid = (row["id"] or "").strip()
            if pid not in known_ids:
                raise DatasetError(
                    f"{path}:{row_number}: column 'id': unknown participant {pid!r}"
                )
            try:
                day = int(row["day"])
            except (TypeError, ValueError):
                raise DatasetError(
                    f"{path}:{row_number}: column 'day': {row['day']!r} is not an integer"
                )
            if not 1 <= day <= VAS_MAX_DAY:
                raise DatasetError(
                    f"{path}:{row_number}: column 'day': {day} outside 1..{VAS_MAX_DAY}"
                )
            try:
                vas = float(row["vas"])
            except (TypeError, ValueError):
                raise DatasetError(
                    f"{path}:{row_number}: column 'vas': {row['vas']!r} is not numeric"
                )
            if not 0 <= vas <= 10:
                raise DatasetError(
                    f"{path}:{row_number}: column 'vas': {vas} outside [0, 10]"
                )
            records.append(VasRecord(id=pid, day=day, vas=vas))
    return tuple(records)


def load_trial_dataset(directory) -> TrialDataset:
    directory = Path(directory)
    participants_path = directory / "participants.csv"
    if not participants_path.is_file():
        raise DatasetError(f"{participants_path}: file not found")
    participants = _load_participants(participants_path)
    known_ids = {p.id for p in participants}

    scales_path = directory / "scales.csv"
    responses = _load_scales(scales_path, known_ids) if scales_path.is_file() else ()
    vas_path = directory / "vas.csv"
    vas_records = _load_vas(vas_path, known_ids) if vas_path.is_file() else ()
    return TrialDataset(
        participants=participants,
        scale_responses=responses,
        vas_records=vas_records,
    )


def write_trial_csvs(dataset: TrialDataset, directory) -> None:
    """Emit a dataset back to the three-file CSV layout."""
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    with (directory / "participants.csv").open("w", newline="", encoding="utf-8") as f:
        writer = csv.writer(f)
        writer.writerow(["id", "group", "age", "gender"])
        for p in dataset.participants:
            writer.writerow([p.id, p.group, p.age, p.gender])
    with (directory / "scales.csv").open("w", newline="", encoding="utf-8") as f:
        writer = csv.writer(f)
        writer.writerow(["id", "timepoint", "instrument", "item_index", "value"])
        for r in dataset.scale_responses:
            for index, value in enumerate(r.items, start=1):
                writer.writerow([r.id, r.timepoint, r.instrument, index, value])
    with (directory / "vas.csv").open("w", newline="", encoding="utf-8") as f:
        writer = csv.writer(f)
        writer.writerow(["id", "day", "vas"])
        for record in dataset.vas_records:
            writer.writerow([record.id, record.day, record.vas])
