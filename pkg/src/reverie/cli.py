"""Command-line interface: interactive play, batch simulation, trial
analysis, the HTTP service, and standalone scale scoring."""

from __future__ import annotations

import csv
import json
import sys
import tempfile
from pathlib import Path

import click

from .agents.providers import HttpProvider, ProviderError, ScriptedProvider
from .config import EngineConfig, load_config
from .contract import ContractError
from .runtime import SessionRuntime
from .session import Phase, PlayerProfile
from .simulate import (
    GROUNDING_FORM,
    BREATHING_TIMELINE,
    load_personas,
    simulate_sessions,
    summary_to_json,
    verify_logs_replay,
)
from .stats import (
    INSTRUMENTS,
    DatasetError,
    analyze_trial,
    load_trial_dataset,
)
from .store import SessionEventLog


def _load_engine_config(config_path) -> EngineConfig:
    if config_path is None:
        return EngineConfig()
    return load_config(config_path)


@click.group()
@click.version_option(package_name="reverie")
def main():
    """Stress-relief dialogue game engine and trial statistics toolkit."""


# --- play ---------------------------------------------------------------------


def _load_fixtures(path: str) -> list:
    text = Path(path).read_text(encoding="utf-8").strip()
    if text.startswith("["):
        entries = json.loads(text)
        return [e if isinstance(e, str) else json.dumps(e) for e in entries]
    return [line for line in text.split("\n") if line.strip()]


def _run_minigame_in_terminal(runtime: SessionRuntime) -> None:
    game = runtime.play.game
    click.echo(f"\n*** mini-game: {game} ***")
    choice = click.prompt(
        "press Enter to do the exercise, or type 'skip'",
        default="",
        show_default=False,
    )
    if choice.strip().lower() == "skip":
        runtime.minigame_event({"game": game, "event_kind": "abandon"})
        click.echo("exercise skipped.\n")
        return
    if game == "breathing":
        for kind, t in BREATHING_TIMELINE:
            runtime.minigame_event(
                {"game": "breathing", "event_kind": kind, "timestamp": t}
            )
        click.echo("three slow 4-7-8 cycles completed.\n")
    elif game == "match3":
        from .minigames import match3_find_chain

        while runtime.state.phase == Phase.MINI_GAME_ACTIVE:
            chain = match3_find_chain(runtime.play.board)
            if chain is None:
                runtime.minigame_event({"game": "match3", "event_kind": "abandon"})
                break
            runtime.minigame_event(
                {
                    "game": "match3",
                    "event_kind": "chain",
                    "path": [list(c) for c in chain],
                }
            )
        click.echo("tiles cleared.\n")
    else:
        click.echo("name what you notice in the illustration:")
        form = {}
        for sense, count in (("see", 5), ("touch", 4), ("hear", 3), ("smell", 2), ("taste", 1)):
            default = ", ".join(GROUNDING_FORM[sense])
            raw = click.prompt(f"{count} things you {sense}", default=default)
            form[sense] = [part.strip() for part in raw.split(",") if part.strip()]
        runtime.minigame_event(
            {"game": "five_senses", "event_kind": "submit", "form": form}
        )
        click.echo("grounding exercise submitted.\n")


@main.command()
@click.option("--config", "config_path", type=click.Path(exists=True), default=None)
@click.option(
    "--scripted",
    "scripted_path",
    type=click.Path(exists=True),
    default=None,
    help="Play offline against fixture turns (JSON array or one document per line).",
)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--data-dir", "data_dir", type=click.Path(), default=None)
def play(config_path, scripted_path, seed, data_dir):
    """Interactive terminal session against the live or scripted provider."""
    config = _load_engine_config(config_path)
    if scripted_path is not None:
        provider = ScriptedProvider(_load_fixtures(scripted_path))
    else:
        provider = HttpProvider(config.provider)

    click.echo("Before we start, a few questions.")
    profile = PlayerProfile(
        age=click.prompt("age", type=int),
        gender=click.prompt("gender"),
        identity=click.prompt("identity (e.g. student)"),
        stressor_text=click.prompt("what has been stressing you lately?"),
    )
    log = None
    if data_dir is not None:
        log = SessionEventLog(Path(data_dir) / "sessions" / "play.jsonl")
    try:
        runtime = SessionRuntime.create(profile, config, provider, seed=seed, log=log)
        runtime.open_scene()
    except (ProviderError, ContractError) as exc:
        raise click.ClickException(str(exc))

    click.echo(f"\n[scene] {runtime.state.scene.name}")
    click.echo(runtime.state.pending_npc_prompt + "\n")
    while runtime.state.phase in (Phase.DIALOGUE, Phase.MINI_GAME_ACTIVE):
        if runtime.state.phase == Phase.MINI_GAME_ACTIVE:
            _run_minigame_in_terminal(runtime)
            continue
        text = click.prompt("you", default="", show_default=False)
        if not text.strip():
            continue
        if text.strip() == "/exit":
            runtime.exit()
            break
        try:
            report = runtime.submit_text(text)
        except (ProviderError, ContractError) as exc:
            raise click.ClickException(str(exc))
        view = runtime.view()
        if report.safe_mode:
            click.echo(
                "\n*** The session has been paused for your safety. Please "
                "consider reaching out to a local hospital or mental health "
                "service. ***"
            )
            break
        click.echo(f"\nnpc: {view['npc_reply']}")
        if view["suggested_replies"]:
            click.echo("   (you could say: " + " | ".join(view["suggested_replies"]) + ")")
        click.echo(f"   [progress {view['progress_fraction']:.0%}]\n")
    if runtime.state.phase == Phase.COMPLETED:
        click.echo("\nThe clouds have cleared. Level complete!")
    click.echo(f"final score: {runtime.state.cumulative_score:.1f}")


# --- simulate -----------------------------------------------------------------


@main.command()
@click.option("--personas", "personas_path", type=click.Path(exists=True), default=None)
@click.option("--sessions", type=int, default=10, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option(
    "--data-dir",
    "data_dir",
    type=click.Path(),
    default=None,
    help="Directory for session logs (a temp dir is used when omitted).",
)
@click.option("--out", "out_path", type=click.Path(), default=None)
@click.option("--config", "config_path", type=click.Path(exists=True), default=None)
def simulate(personas_path, sessions, seed, data_dir, out_path, config_path):
    """Run seeded scripted sessions and print the batch summary as JSON."""
    config = _load_engine_config(config_path)
    personas = load_personas(personas_path)
    cleanup = None
    if data_dir is None:
        cleanup = tempfile.TemporaryDirectory(prefix="reverie-sim-")
        data_dir = cleanup.name
    try:
        summary = simulate_sessions(
            sessions, seed, config=config, personas=personas, data_dir=data_dir
        )
        if not verify_logs_replay(summary, data_dir):
            raise click.ClickException("log replay does not reproduce live states")
        blob = summary_to_json(summary)
        if out_path is not None:
            Path(out_path).write_text(blob + "\n", encoding="utf-8")
        click.echo(blob)
    finally:
        if cleanup is not None:
            cleanup.cleanup()


# --- analyze -------------------------------------------------------------------


@main.command()
@click.option(
    "--data",
    "data_dir",
    required=True,
    type=click.Path(exists=True, file_okay=False),
    help="Directory containing participants.csv, scales.csv, vas.csv.",
)
@click.option("--out", "out_dir", required=True, type=click.Path(file_okay=False))
def analyze(data_dir, out_dir):
    """Run the full trial analysis; writes report.json and report.md."""
    try:
        dataset = load_trial_dataset(data_dir)
        report = analyze_trial(dataset)
    except DatasetError as exc:
        raise click.ClickException(str(exc))
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    (out / "report.json").write_text(report.to_json() + "\n", encoding="utf-8")
    (out / "report.md").write_text(report.render_markdown(), encoding="utf-8")
    click.echo(f"wrote {out / 'report.json'}")
    click.echo(f"wrote {out / 'report.md'}")


# --- serve ---------------------------------------------------------------------


@main.command()
@click.option("--config", "config_path", type=click.Path(exists=True), default=None)
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", type=int, default=8000, show_default=True)
def serve(config_path, host, port):
    """Serve the HTTP API."""
    import uvicorn

    from .service import create_app

    config = _load_engine_config(config_path)
    uvicorn.run(create_app(config), host=host, port=port)


# --- score-scales ----------------------------------------------------------------


def _flatten_score(instrument: str, value) -> dict:
    if isinstance(value, dict):
        return {k: v for k, v in value.items()}
    return {"total": value}


@main.command("score-scales")
@click.option(
    "--instrument",
    required=True,
    type=click.Choice(sorted(INSTRUMENTS), case_sensitive=False),
)
@click.option("--csv", "csv_path", required=True, type=click.Path(exists=True))
def score_scales(instrument, csv_path):
    """Score a wide CSV (one respondent per row, items in order).

    An optional leading 'id' column is carried through; every other column
    is an item answer. Scores print as CSV on stdout.
    """
    instrument = instrument.upper()
    spec = INSTRUMENTS[instrument]
    writer = None
    with open(csv_path, newline="", encoding="utf-8") as handle:
        reader = csv.reader(handle)
        header = next(reader, None)
        if header is None:
            raise click.ClickException(f"{csv_path}: empty file")
        has_id = header[0].strip().lower() == "id"
        out = csv.writer(sys.stdout)
        for row_number, row in enumerate(reader, start=2):
            if not row:
                continue
            row_id = row[0] if has_id else str(row_number - 1)
            raw_items = row[1:] if has_id else row
            try:
                items = [int(cell) for cell in raw_items]
                score = spec["score"](items)
            except (ValueError, TypeError) as exc:
                raise click.ClickException(f"{csv_path}:{row_number}: {exc}")
            record = _flatten_score(instrument, score)
            if writer is None:
                writer = out
                writer.writerow(["id"] + list(record))
            writer.writerow([row_id] + [record[k] for k in record])
    if writer is None:
        raise click.ClickException(f"{csv_path}: no data rows")


if __name__ == "__main__":
    main()
