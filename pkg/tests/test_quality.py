import pytest

from copan.cop import compute_series, synthetic_series
from copan.fixtures import generate_record
from copan.mocks import MockModel, NegamaxEngine
from copan.quality import (
    EmptySeries,
    NoMovesForColor,
    game_summary,
    handicap_value,
    mean_effect,
    player_performance,
)
from copan.sgf import Color, GameRecord, Move


def black_stones_white_passes(n: int) -> GameRecord:
    moves = []
    for i in range(n):
        if i % 2 == 0:
            moves.append(Move(Color.BLACK, (1 + i % 19, 1 + i // 19)))
        else:
            moves.append(Move(Color.WHITE, None))
    return GameRecord(moves=moves)


class TestGameSummary:
    def test_single_point(self):
        summary = game_summary(synthetic_series([5.0]))
        assert summary.total_cost == 5.0
        assert summary.mean_cost == 5.0
        assert summary.move_count == 1

    def test_mean_is_total_over_count(self):
        series = synthetic_series([2516.0 / 216] * 216)
        summary = game_summary(series)
        assert summary.total_cost == pytest.approx(2516.0)
        assert summary.mean_cost == pytest.approx(2516.0 / 216)

    def test_fig2_caption_arithmetic(self):
        series = synthetic_series([3937.93 / 307] * 307)
        summary = game_summary(series)
        assert summary.total_cost == pytest.approx(3937.93)
        assert round(summary.mean_cost, 2) == 12.83

    def test_empty_series(self):
        with pytest.raises(EmptySeries):
            game_summary(synthetic_series([]))

    def test_terminal_point_not_counted_as_move(self, negamax_engine):
        record = generate_record(seed=21, move_count=12)
        series = compute_series(record, negamax_engine, visits=4,
                                include_terminal=True)
        summary = game_summary(series)
        assert summary.move_count == 12
        assert summary.total_cost == pytest.approx(
            sum(p.cost for p in series.points[:12]))

    def test_decomposition_total_equals_player_costs(self, negamax_engine):
        record = generate_record(seed=22, move_count=30, pass_prob=0.1)
        series = compute_series(record, negamax_engine, visits=4,
                                include_terminal=True)
        summary = game_summary(series)
        black, white = summary.per_player
        assert black.cumulative_cost + white.cumulative_cost == \
            pytest.approx(summary.total_cost)


class TestPlayerPerformance:
    def test_95_percent_worked_example(self):
        # 20 black moves, 50 points each (1000 total), each realizing 47.5.
        costs = []
        effects = []
        for i in range(40):
            if i % 2 == 0:
                costs.append(50.0)
                effects.append(-2.5)
            else:
                costs.append(10.0)
                effects.append(0.0)
        black, white = player_performance(
            synthetic_series(costs, effects=effects))
        assert black.cumulative_cost == pytest.approx(1000.0)
        assert black.cumulative_realized == pytest.approx(950.0)
        assert black.performance_pct == pytest.approx(95.0)
        assert white.performance_pct == pytest.approx(100.0)

    def test_optimal_play_is_100_percent(self, negamax_engine):
        record = generate_record(seed=23, move_count=80)
        series = compute_series(record, negamax_engine, visits=4,
                                include_terminal=True)
        black, white = player_performance(series)
        assert black.performance_pct == pytest.approx(100.0, abs=1e-9)
        assert white.performance_pct == pytest.approx(100.0, abs=1e-9)

    def test_all_pass_player_is_0_percent(self, negamax_engine):
        record = black_stones_white_passes(60)
        series = compute_series(record, negamax_engine, visits=4,
                                include_terminal=True)
        black, white = player_performance(series)
        assert white.performance_pct == pytest.approx(0.0, abs=1e-9)
        assert black.performance_pct == pytest.approx(100.0, abs=1e-9)

    def test_zero_cost_denominator_is_undefined_not_error(self):
        series = synthetic_series([0.0, 0.0], effects=[0.0, 0.0])
        black, white = player_performance(series)
        assert black.performance_pct is None
        assert white.performance_pct is None

    def test_clamping_bounds_percentage(self):
        # One move worse than passing (realizes negative value).
        costs = [10.0] * 10
        effects = [-13.0] + [0.0] * 9
        black, _ = player_performance(synthetic_series(costs, effects=effects))
        assert black.performance_pct < 100.0
        clamped_black, _ = player_performance(
            synthetic_series(costs, effects=effects), clamp_realized=True)
        assert 0.0 <= clamped_black.performance_pct <= 100.0

    def test_nonpositive_effects_bound_performance(self):
        costs = [8.0] * 20
        effects = [-0.5] * 20
        for perf in player_performance(synthetic_series(costs,
                                                        effects=effects)):
            assert perf.performance_pct <= 100.0

    def test_moves_counted(self):
        series = synthetic_series([5.0] * 7)
        black, white = player_performance(series)
        assert black.moves_counted == 4
        assert white.moves_counted == 3


class TestMeanEffect:
    def test_arithmetic_mean(self):
        series = synthetic_series([5.0] * 6, effects=[-1.0, 0.0, 0.0, 0.0,
                                                      -0.2, 0.0])
        assert mean_effect(series, Color.BLACK) == pytest.approx(-0.4)

    def test_all_zero(self):
        series = synthetic_series([5.0] * 6)
        assert mean_effect(series, Color.WHITE) == 0.0

    def test_single_blunder_over_ten_moves(self):
        effects = [0.0] * 20
        effects[6] = -3.0
        series = synthetic_series([5.0] * 20, effects=effects)
        assert mean_effect(series, Color.BLACK) == pytest.approx(-0.3)

    def test_passes_excluded_by_default(self):
        effects = [-2.0, 0.0, -4.0, 0.0]
        flags = [True, False, False, False]
        series = synthetic_series([5.0] * 4, effects=effects,
                                  pass_flags=flags)
        assert mean_effect(series, Color.BLACK) == pytest.approx(-4.0)
        assert mean_effect(series, Color.BLACK,
                           include_passes=True) == pytest.approx(-3.0)

    def test_no_moves_for_color(self):
        series = synthetic_series([5.0], effects=[0.0])
        with pytest.raises(NoMovesForColor):
            mean_effect(series, Color.WHITE)


class TestHandicapValue:
    def test_mock_defaults_give_12(self, negamax_engine):
        assert handicap_value(negamax_engine) == pytest.approx(12.0, abs=1e-9)

    def test_base_value_passthrough(self):
        engine = NegamaxEngine(MockModel(base_value=10.0))
        assert handicap_value(engine) == pytest.approx(10.0, abs=1e-9)

    def test_matches_series_c0(self, negamax_engine):
        record = generate_record(seed=24, move_count=11)
        series = compute_series(record, negamax_engine, visits=4)
        assert handicap_value(negamax_engine) == pytest.approx(
            series.points[0].cost, abs=1e-9)
