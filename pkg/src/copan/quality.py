"""Per-game and per-player quality aggregation.

The headline metric is the performance percentage: how much of a player's
cumulative cost of passing their moves actually realized. It is fairer
than raw move effects because the denominator adjusts for how demanding
the game was.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .cop import CopSeries, realized_value
from .engine import evaluate, evaluate_with_pass
from .sgf import Color

from .cop import cost_of_passing


class QualityError(Exception):
    pass


class EmptySeries(QualityError):
    pass


class NoMovesForColor(QualityError):
    pass


@dataclass(frozen=True)
class PlayerPerformance:
    color: Color
    cumulative_cost: float
    cumulative_realized: float
    performance_pct: Optional[float]  # None when the cost sum is zero
    mean_effect: Optional[float]
    moves_counted: int


@dataclass(frozen=True)
class GameSummary:
    total_cost: float
    move_count: int
    mean_cost: float
    per_player: tuple[PlayerPerformance, PlayerPerformance]


def _move_points(series: CopSeries):
    """Points at which a move was actually played (terminal excluded)."""
    n = series.move_count
    return [p for p in series.points if p.index < n]


def game_summary(series: CopSeries) -> GameSummary:
    """Totals and means over the analyzed moves, at full precision."""
    points = _move_points(series)
    if not points:
        raise EmptySeries("series has no analyzed positions")
    total = sum(p.cost for p in points)
    count = len(points)
    return GameSummary(
        total_cost=total,
        move_count=count,
        mean_cost=total / count,
        per_player=player_performance(series),
    )


def player_performance(series: CopSeries, clamp_realized: bool = False
                       ) -> tuple[PlayerPerformance, PlayerPerformance]:
    """Black's and white's cumulative cost, realized value, and percentage.

    A turn enters the sums only when its move effect is known (the final
    move of a terminal-less analysis has none), keeping the percentage's
    numerator and denominator over the same turns. Passes count: a pass
    realizes exactly zero of its cost.
    """
    if not series.points:
        raise EmptySeries("series has no analyzed positions")
    out = []
    for color in (Color.BLACK, Color.WHITE):
        cost_sum = 0.0
        realized_sum = 0.0
        counted = 0
        for p in _move_points(series):
            if p.side_to_move is not color:
                continue
            e = series.effects[p.index]
            if e is None:
                continue
            realized = realized_value(p.cost, e)
            if clamp_realized:
                realized = min(max(realized, 0.0), max(p.cost, 0.0))
            cost_sum += p.cost
            realized_sum += realized
            counted += 1
        pct = 100.0 * realized_sum / cost_sum if cost_sum > 0 else None
        try:
            avg_effect = mean_effect(series, color)
        except NoMovesForColor:
            avg_effect = None
        out.append(PlayerPerformance(
            color=color,
            cumulative_cost=cost_sum,
            cumulative_realized=realized_sum,
            performance_pct=pct,
            mean_effect=avg_effect,
            moves_counted=counted,
        ))
    return (out[0], out[1])


def mean_effect(series: CopSeries, color: Color,
                include_passes: bool = False) -> float:
    """Arithmetic mean of one color's move effects.

    Pass moves are excluded by default: a deliberate terminal pass says
    nothing about move quality.
    """
    values = []
    for p in _move_points(series):
        if p.side_to_move is not color:
            continue
        if series.pass_flags[p.index] and not include_passes:
            continue
        e = series.effects[p.index]
        if e is not None:
            values.append(e)
    if not values:
        raise NoMovesForColor(
            f"no countable moves for {color.value} "
            f"(include_passes={include_passes})")
    return sum(values) / len(values)


def handicap_value(engine, board_size: int = 19, komi: float = 6.5,
                   visits: Optional[int] = None) -> float:
    """Empty-board cost of passing: the measured value of one extra stone.

    An extra handicap stone for black is the same thing as white passing
    once more, so the pass-injection trick prices it directly.
    """
    before = evaluate(engine, [], komi=komi, board_size=board_size,
                      visits=visits)
    after = evaluate_with_pass(engine, [], komi=komi, board_size=board_size,
                               visits=visits)
    return cost_of_passing(before.score_mean, after.score_mean,
                           before.side_to_move)
