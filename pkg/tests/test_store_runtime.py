import json

import pytest

from reverie.agents import ScriptedProvider
from reverie.config import EngineConfig
from reverie.minigames import match3_find_chain
from reverie.runtime import SessionRuntime
from reverie.session import Phase, PlayerProfile, WrongPhase, state_digest
from reverie.store import (
    SessionEventLog,
    StorageError,
    make_event,
    read_events,
    rebuild_session,
    rebuild_session_with_digests,
)
from turnfx import scoring_turn_raw, turn_raw

PROFILE = PlayerProfile(
    age=21, gender="female", identity="student", stressor_text="too many deadlines at once"
)


def make_runtime(script, tmp_path=None, threshold=100.0, seed=11, session_id=None):
    config = EngineConfig(pass_threshold=threshold)
    provider = ScriptedProvider(script)
    log = None
    if tmp_path is not None:
        log = SessionEventLog(tmp_path / "session.jsonl")
    runtime = SessionRuntime.create(
        PROFILE, config, provider, seed=seed, session_id=session_id, log=log
    )
    runtime.open_scene()
    return runtime, provider, log


class TestEventLog:
    def test_n_events_n_lines(self, tmp_path):
        log = SessionEventLog(tmp_path / "log.jsonl")
        for i in range(5):
            log.append(make_event("s1", "player_input", {"text": f"msg {i}"}))
        lines = (tmp_path / "log.jsonl").read_text().strip().split("\n")
        assert len(lines) == 5
        assert all(json.loads(line)["kind"] == "player_input" for line in lines)

    def test_unknown_kind_rejected(self, tmp_path):
        with pytest.raises(StorageError):
            make_event("s1", "telemetry", {})

    def test_truncated_final_line_dropped_with_warning(self, tmp_path):
        path = tmp_path / "log.jsonl"
        log = SessionEventLog(path)
        log.append(make_event("s1", "player_input", {"text": "whole"}))
        with path.open("a") as handle:
            handle.write('{"ts": "2026-08-01T00:00:00", "kind": "npc_tu')
        with pytest.warns(UserWarning):
            events = read_events(path)
        assert len(events) == 1

    def test_corruption_before_later_events_raises(self, tmp_path):
        path = tmp_path / "log.jsonl"
        log = SessionEventLog(path)
        log.append(make_event("s1", "player_input", {"text": "one"}))
        with path.open("a") as handle:
            handle.write("garbage\n")
        log.append(make_event("s1", "player_input", {"text": "two"}))
        with pytest.raises(StorageError):
            read_events(path)


class TestRuntimeFlow:
    def test_full_session_to_completion(self, tmp_path):
        script = [scoring_turn_raw(ct=5, et=5, pt=5, mult=1.2) for _ in range(9)]
        runtime, provider, log = make_runtime(script, tmp_path, threshold=100.0)
        while runtime.state.phase == Phase.DIALOGUE:
            runtime.submit_text("working through it")
        assert runtime.state.phase == Phase.COMPLETED
        assert runtime.state.cumulative_score >= 100.0
        view = runtime.view()
        assert view["phase"] == "completed"
        assert view["progress_fraction"] == 1.0

    def test_replay_matches_live_state(self, tmp_path):
        script = [
            scoring_turn_raw(ct=4, et=3, pt=3),
            scoring_turn_raw(ct=5, et=4, pt=4, mini_game_call="breathing"),
            scoring_turn_raw(ct=5, et=5, pt=4, mult=1.2),
        ]
        runtime, provider, log = make_runtime(script, tmp_path, threshold=1000.0)
        runtime.submit_text("everything is a mess")
        runtime.submit_text("I guess the mess is mostly this one deadline")
        for kind, t in (
            ("press", 0.0),
            ("release", 11.0),
            ("press", 19.0),
            ("release", 30.0),
            ("press", 38.0),
            ("release", 49.0),
            ("tick", 57.0),
        ):
            runtime.minigame_event(
                {"game": "breathing", "event_kind": kind, "timestamp": t}
            )
        assert runtime.state.phase == Phase.DIALOGUE
        runtime.submit_text("that exercise actually helped")
        runtime.exit()

        events = log.read()
        replayed, digests = rebuild_session_with_digests(events)
        assert state_digest(replayed) == state_digest(runtime.state)
        assert replayed.cumulative_score == runtime.state.cumulative_score
        # A second replay is byte-identical to the first at every step.
        _, digests_again = rebuild_session_with_digests(events)
        assert digests == digests_again
        # Any prefix of the log is still a consistent, replayable state.
        for k in range(1, len(events) + 1):
            rebuild_session(events[:k])

    def test_risk_screen_skips_provider_entirely(self, tmp_path):
        runtime, provider, log = make_runtime([turn_raw()], tmp_path)
        calls_before = len(provider.requests)
        report = runtime.submit_text("I have been thinking about suicide")
        assert report.safe_mode
        assert runtime.state.phase == Phase.SAFE_MODE_TERMINATED
        assert len(provider.requests) == calls_before
        replayed = rebuild_session(log.read())
        assert state_digest(replayed) == state_digest(runtime.state)

    def test_provider_gate_terminates_with_zero_score(self, tmp_path):
        runtime, provider, log = make_runtime(
            [scoring_turn_raw(ct=3), scoring_turn_raw(gate=0)], tmp_path
        )
        runtime.submit_text("an ordinary round")
        score_before = runtime.state.cumulative_score
        report = runtime.submit_text("a message the provider flags")
        assert report.safe_mode
        assert runtime.state.cumulative_score == score_before
        assert runtime.state.phase == Phase.SAFE_MODE_TERMINATED
        replayed = rebuild_session(log.read())
        assert state_digest(replayed) == state_digest(runtime.state)

    def test_match3_runtime_play(self, tmp_path):
        script = [scoring_turn_raw(ct=2, et=2, pt=2, mini_game_call="match3")]
        runtime, provider, log = make_runtime(script, tmp_path, threshold=1000.0)
        runtime.submit_text("feeling gloomy")
        assert runtime.state.phase == Phase.MINI_GAME_ACTIVE
        while runtime.state.phase == Phase.MINI_GAME_ACTIVE:
            chain = match3_find_chain(runtime.play.board)
            assert chain is not None
            runtime.minigame_event(
                {"game": "match3", "event_kind": "chain", "path": [list(c) for c in chain]}
            )
        assert runtime.state.phase == Phase.DIALOGUE
        last = runtime.state.transcript[-1]
        assert last.minigame_bonus > 5.0
        replayed = rebuild_session(log.read())
        assert state_digest(replayed) == state_digest(runtime.state)

    def test_grounding_runtime_play_and_risk_escalation(self, tmp_path):
        script = [
            scoring_turn_raw(mini_game_call="five_senses"),
            scoring_turn_raw(mini_game_call="five_senses"),
        ]
        form = {
            "see": ["window", "mug", "plant", "notebook", "lamp"],
            "touch": ["desk", "sweater", "keys", "paper"],
            "hear": ["birds", "traffic", "fan"],
            "smell": ["coffee", "rain"],
            "taste": ["mint"],
        }
        runtime, provider, log = make_runtime(script, tmp_path, threshold=1000.0)
        runtime.submit_text("spiralling a bit")
        assert runtime.play.grounding_image.startswith("placeholder:")
        result = runtime.minigame_event(
            {"game": "five_senses", "event_kind": "submit", "form": form}
        )
        assert result["completed"]
        assert runtime.state.transcript[-1].minigame_bonus == 10.0  # 5 + 15 distinct

        # Second session: a risky grounding answer escalates to safe mode.
        runtime2, _, log2 = make_runtime(
            [scoring_turn_raw(mini_game_call="five_senses")], tmp_path, threshold=1000.0,
            session_id="risky"
        )
        runtime2.submit_text("spiralling a bit")
        bad_form = dict(form, taste=["I want to hurt myself"])
        outcome = runtime2.minigame_event(
            {"game": "five_senses", "event_kind": "submit", "form": bad_form}
        )
        assert outcome["safe_mode"]
        assert runtime2.state.phase == Phase.SAFE_MODE_TERMINATED

    def test_abandon_awards_nothing(self, tmp_path):
        script = [scoring_turn_raw(mini_game_call="breathing")]
        runtime, provider, log = make_runtime(script, tmp_path, threshold=1000.0)
        runtime.submit_text("panicking")
        before = runtime.state.cumulative_score
        runtime.minigame_event({"game": "breathing", "event_kind": "abandon"})
        assert runtime.state.cumulative_score == before
        assert runtime.state.phase == Phase.DIALOGUE

    def test_turn_rejected_while_game_active(self, tmp_path):
        script = [scoring_turn_raw(mini_game_call="breathing")]
        runtime, provider, log = make_runtime(script, tmp_path)
        runtime.submit_text("panicking")
        with pytest.raises(WrongPhase):
            runtime.submit_text("can I keep talking?")

    def test_repaired_turn_flows_through(self, tmp_path):
        script = ["oops not json", scoring_turn_raw(ct=4)]
        runtime, provider, log = make_runtime(script, tmp_path)
        report = runtime.submit_text("first message")
        assert report.repaired
        assert runtime.state.round_index == 1

    def test_view_never_leaks_prompts_or_keys(self, tmp_path):
        runtime, provider, log = make_runtime([scoring_turn_raw()], tmp_path)
        runtime.submit_text("hello")
        blob = json.dumps(runtime.view())
        assert "system" not in blob
        assert "rubric" not in blob.lower()
        assert "REVERIE_API_KEY" not in blob
