import random

import pytest

from reverie.contract import parse_npc_turn, reconcile_turn
from reverie.safety import RiskLexicon
from reverie.session import (
    EmptyInput,
    GameMismatch,
    InvalidProfile,
    MiniGameResult,
    Phase,
    PlayerProfile,
    SceneSpec,
    WrongPhase,
    apply_minigame_result,
    can_invoke_minigame,
    create_session,
    enter_scene,
    exit_session,
    progress_fraction,
    state_digest,
    submit_player_input,
    trigger_safe_mode,
)
from turnfx import scoring_turn_raw

PROFILE = PlayerProfile(
    age=22, gender="female", identity="student", stressor_text="exams are piling up"
)
SCENE = SceneSpec(name="Quiet Pine Overlook", description="A still ridge above a calm valley.")


def reconciled(gate=1, mult=1.0, f=1, ct=3, et=3, pt=2, **extra):
    return reconcile_turn(
        parse_npc_turn(scoring_turn_raw(gate=gate, mult=mult, f=f, ct=ct, et=et, pt=pt, **extra))
    )


def fresh_session(threshold=100.0, seed=7, cooldown=6):
    state = create_session(
        PROFILE, pass_threshold=threshold, cooldown_rounds=cooldown, seed=seed
    )
    return enter_scene(state, SCENE)


class TestLifecycle:
    def test_initial_state(self):
        state = create_session(PROFILE, seed=1)
        assert state.phase == Phase.PREPARATION
        assert state.round_index == 0
        assert state.cumulative_score == 0.0

    def test_empty_stressor_rejected(self):
        with pytest.raises(InvalidProfile):
            create_session(
                PlayerProfile(age=20, gender="male", identity="student", stressor_text="  ")
            )

    def test_equal_seeds_and_turns_give_identical_states(self):
        turns = [reconciled(ct=4, et=4, pt=3) for _ in range(3)]
        digests = []
        for _ in range(2):
            state = fresh_session(seed=42)
            run = [state_digest(state)]
            for i, turn in enumerate(turns):
                submit_player_input(state, f"thinking about round {i}", turn)
                run.append(state_digest(state))
            digests.append(run)
        assert digests[0] == digests[1]

    def test_enter_scene_opens_dialogue(self):
        state = create_session(PROFILE, seed=1)
        state = enter_scene(state, SCENE)
        assert state.phase == Phase.DIALOGUE
        assert SCENE.name in state.pending_npc_prompt

    def test_enter_scene_twice_is_wrong_phase(self):
        state = fresh_session()
        with pytest.raises(WrongPhase):
            enter_scene(state, SCENE)

    def test_scene_invariants_enforced(self):
        with pytest.raises(ValueError):
            SceneSpec(name="Somewhere", description="   ")


class TestTurns:
    def test_score_accumulates_and_threshold_completes(self):
        state = fresh_session(threshold=100.0)
        state.cumulative_score = 92.0
        outcome = submit_player_input(state, "I see the thought was extreme", reconciled(ct=5, et=4, pt=4))
        assert outcome.score_awarded == 10.0
        assert state.cumulative_score == 102.0
        assert state.phase == Phase.COMPLETED
        assert outcome.completed

    def test_gate_zero_terminates_without_score(self):
        state = fresh_session()
        before = state.cumulative_score
        outcome = submit_player_input(state, "a normal message", reconciled(gate=0))
        assert state.phase == Phase.SAFE_MODE_TERMINATED
        assert state.cumulative_score == before
        assert outcome.safe_mode_triggered
        assert outcome.score_awarded == 0.0

    def test_risk_screen_fires_before_provider_verdict(self):
        state = fresh_session()
        outcome = submit_player_input(state, "sometimes I want to end it all", reconciled())
        assert state.phase == Phase.SAFE_MODE_TERMINATED
        assert outcome.risk_phrase == "end it all"
        assert state.round_index == 0

    def test_empty_input_rejected(self):
        state = fresh_session()
        with pytest.raises(EmptyInput):
            submit_player_input(state, "   ", reconciled())

    def test_wrong_phase_rejected(self):
        state = create_session(PROFILE, seed=3)
        with pytest.raises(WrongPhase):
            submit_player_input(state, "hello", reconciled())

    def test_transcript_records_prompts_and_replies(self):
        state = fresh_session()
        opening = state.pending_npc_prompt
        turn = reconciled()
        submit_player_input(state, "it all feels like too much", turn)
        round_ = state.transcript[0]
        assert round_.npc_prompt == opening
        assert round_.player_input == "it all feels like too much"
        assert state.pending_npc_prompt == turn.npc_reply


class TestMiniGameScheduling:
    def test_call_accepted_when_no_game_ran(self):
        state = fresh_session()
        outcome = submit_player_input(
            state, "everything is ruined", reconciled(mini_game_call="breathing")
        )
        assert outcome.minigame_started == "breathing"
        assert state.phase == Phase.MINI_GAME_ACTIVE
        assert state.active_minigame.game == "breathing"

    def test_call_suppressed_inside_cooldown(self):
        state = fresh_session()
        state.round_index = 6
        state.last_minigame_round = 3
        outcome = submit_player_input(
            state, "still spiralling", reconciled(mini_game_call="breathing")
        )
        # This call lands on round 7 with the last game on round 3: 4 < 6.
        assert state.round_index == 7
        assert outcome.minigame_started is None
        assert outcome.suppressed_call == "breathing"
        assert state.phase == Phase.DIALOGUE
        assert state.suppressed_calls == [[7, "breathing"]]

    def test_cooldown_window(self):
        state = fresh_session()
        assert can_invoke_minigame(state)
        state.last_minigame_round = 3
        state.round_index = 8
        assert not can_invoke_minigame(state)
        state.round_index = 9
        assert can_invoke_minigame(state)

    def test_completed_breathing_awards_completion_plus_cycles(self):
        state = fresh_session()
        submit_player_input(state, "I cannot stop worrying", reconciled(mini_game_call="breathing"))
        before = state.cumulative_score
        apply_minigame_result(
            state, MiniGameResult(game="breathing", completed=True, performance_points=6.0)
        )
        assert state.cumulative_score == before + 11.0
        assert state.phase == Phase.DIALOGUE
        assert state.last_minigame_round == state.round_index
        assert state.transcript[-1].minigame_bonus == 11.0

    def test_abandoned_game_awards_nothing(self):
        state = fresh_session()
        submit_player_input(state, "I keep panicking", reconciled(mini_game_call="match3"))
        before = state.cumulative_score
        apply_minigame_result(state, MiniGameResult(game="match3", completed=False))
        assert state.cumulative_score == before
        assert state.phase == Phase.DIALOGUE
        assert state.last_minigame_round == state.round_index

    def test_bonus_can_cross_threshold(self):
        state = fresh_session(threshold=20.0)
        submit_player_input(state, "worried again", reconciled(ct=4, et=4, pt=4, mini_game_call="breathing"))
        state.cumulative_score = 15.0
        apply_minigame_result(
            state, MiniGameResult(game="breathing", completed=True, performance_points=6.0)
        )
        assert state.phase == Phase.COMPLETED

    def test_result_for_wrong_game_rejected(self):
        state = fresh_session()
        submit_player_input(state, "worried", reconciled(mini_game_call="five_senses"))
        with pytest.raises(GameMismatch):
            apply_minigame_result(state, MiniGameResult(game="match3", completed=False))

    def test_result_outside_game_phase_rejected(self):
        state = fresh_session()
        with pytest.raises(WrongPhase):
            apply_minigame_result(state, MiniGameResult(game="match3", completed=False))

    def test_random_sequences_never_break_cooldown(self):
        rng = random.Random(2024)
        for _ in range(300):
            state = fresh_session(threshold=1e9, seed=rng.randrange(1 << 32))
            accepted = []
            for _ in range(40):
                call = rng.choice(["none", "none", "breathing", "match3", "five_senses"])
                outcome = submit_player_input(
                    state, "more worries", reconciled(mini_game_call=call)
                )
                if outcome.minigame_started:
                    accepted.append(state.round_index)
                    apply_minigame_result(
                        state,
                        MiniGameResult(game=call, completed=rng.random() < 0.5,
                                       performance_points=0.0),
                    )
            gaps = [b - a for a, b in zip(accepted, accepted[1:])]
            assert all(gap >= 6 for gap in gaps)

    def test_ledger_consistency(self):
        rng = random.Random(5)
        state = fresh_session(threshold=1e9)
        for i in range(25):
            call = rng.choice(["none", "breathing"])
            outcome = submit_player_input(state, f"round {i}", reconciled(ct=rng.randrange(6), mini_game_call=call))
            if outcome.minigame_started:
                apply_minigame_result(
                    state,
                    MiniGameResult(game=call, completed=True, performance_points=4.0),
                )
        total = sum(r.score_awarded + r.minigame_bonus for r in state.transcript)
        assert state.cumulative_score == pytest.approx(total, abs=1e-12)


class TestTermination:
    def test_exit_during_dialogue(self):
        state = fresh_session()
        exit_session(state)
        assert state.phase == Phase.EXITED

    def test_exit_after_completed_rejected(self):
        state = fresh_session(threshold=5.0)
        submit_player_input(state, "a solid reflection", reconciled(ct=4, et=4, pt=4))
        assert state.phase == Phase.COMPLETED
        with pytest.raises(WrongPhase):
            exit_session(state)

    def test_exit_during_minigame_discards_game(self):
        state = fresh_session()
        submit_player_input(state, "panicking", reconciled(mini_game_call="breathing"))
        exit_session(state)
        assert state.phase == Phase.EXITED
        assert state.active_minigame is None

    def test_trigger_safe_mode_from_minigame(self):
        state = fresh_session()
        submit_player_input(state, "panicking", reconciled(mini_game_call="five_senses"))
        trigger_safe_mode(state)
        assert state.phase == Phase.SAFE_MODE_TERMINATED

    def test_terminal_states_refuse_mutation(self):
        state = fresh_session()
        submit_player_input(state, "bad thoughts", reconciled(gate=0))
        for op in (
            lambda: submit_player_input(state, "hello", reconciled()),
            lambda: exit_session(state),
            lambda: trigger_safe_mode(state),
            lambda: apply_minigame_result(state, MiniGameResult("match3", False)),
            lambda: enter_scene(state, SCENE),
        ):
            with pytest.raises(WrongPhase):
                op()


class TestProgress:
    def test_progress_fraction(self):
        state = fresh_session(threshold=100.0)
        assert progress_fraction(state) == 0.0
        state.cumulative_score = 50.0
        assert progress_fraction(state) == 0.5
        state.cumulative_score = 120.0
        assert progress_fraction(state) == 1.0

    def test_cumulative_score_never_decreases(self):
        rng = random.Random(9)
        state = fresh_session(threshold=1e9)
        last = 0.0
        for i in range(30):
            submit_player_input(
                state, f"message {i}",
                reconciled(f=rng.randrange(2), ct=rng.randrange(6), et=rng.randrange(6), pt=rng.randrange(6)),
            )
            assert state.cumulative_score >= last
            last = state.cumulative_score
