"""Feature extraction from a cost-of-passing series.

Everything downstream of the raw series is relative to the baseline linear
descent: robustly fitted here by iterative upper-side trimming (spikes only
ever deviate upward), then used to classify elevated stretches as fights or
one-sided forcing sequences, label per-position sente/gote, segment the
game into stages, and rank points of interest.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Optional, Sequence

import numpy as np

from .cop import CopSeries
from .sgf import Color

# Exact-arithmetic guard: on a noiseless series the trimming threshold
# would otherwise collapse to ~1e-15 and evict half the points.
_TRIM_FLOOR = 1e-9


class FeatureError(Exception):
    pass


class TooFewPoints(FeatureError):
    pass


class DegenerateFit(FeatureError):
    pass


@dataclass(frozen=True)
class BaselineFit:
    slope: float
    intercept: float
    residual_scale: float
    inlier_count: int
    inlier_indices: tuple[int, ...]

    def predict(self, index: float) -> float:
        return self.intercept + self.slope * index

    def residual(self, index: float, cost: float) -> float:
        return cost - self.predict(index)

    def default_tau(self) -> float:
        return max(3.0, 2.0 * self.residual_scale)


def _mad(values: np.ndarray) -> float:
    return float(np.median(np.abs(values - np.median(values))))


def fit_baseline(series: CopSeries, max_iterations: int = 10) -> BaselineFit:
    """Least-squares line with iterative upper-side outlier trimming.

    Points whose residual exceeds twice the MAD of the current inlier
    residuals are dropped (upper side only) and the line refitted until the
    inlier set is stable or `max_iterations` passes.
    """
    x = np.array([p.index for p in series.points], dtype=float)
    y = np.array([p.cost for p in series.points], dtype=float)
    if len(x) < 10:
        raise TooFewPoints(f"need >= 10 points, got {len(x)}")
    if np.ptp(x) == 0:
        raise DegenerateFit("all points share one index")

    inliers = np.ones(len(x), dtype=bool)
    for _ in range(max_iterations):
        slope, intercept = np.polyfit(x[inliers], y[inliers], 1)
        residuals = y - (intercept + slope * x)
        threshold = max(2.0 * _mad(residuals[inliers]), _TRIM_FLOOR)
        candidate = residuals <= threshold
        if candidate.sum() < 2 or np.ptp(x[candidate]) == 0:
            break
        if np.array_equal(candidate, inliers):
            break
        inliers = candidate

    slope, intercept = np.polyfit(x[inliers], y[inliers], 1)
    residuals = y - (intercept + slope * x)
    return BaselineFit(
        slope=float(slope),
        intercept=float(intercept),
        residual_scale=_mad(residuals[inliers]),
        inlier_count=int(inliers.sum()),
        inlier_indices=tuple(int(i) for i in x[inliers]),
    )


# ---------------------------------------------------------------------------
# Elevated segments

class SegmentKind(Enum):
    FORCING_SPIKE = "forcingSpike"
    TWO_SIDED_FIGHT = "twoSidedFight"
    ONE_SIDED_FORCING = "oneSidedForcing"


@dataclass(frozen=True)
class Segment:
    start: int
    end: int
    kind: SegmentKind
    peak: float
    defender: Optional[Color] = None


def detect_segments(series: CopSeries, fit: BaselineFit,
                    tau: Optional[float] = None,
                    one_sided_frac: float = 0.8,
                    max_gap: int = 1) -> list[Segment]:
    """Group elevated positions (residual > tau) into classified segments.

    Elevated indices closer than `max_gap + 1` apart merge into one
    segment; the gap tolerance is what joins a one-sided forcing sequence,
    whose elevation by nature hits only the defender's alternating turns.
    Segment endpoints are always elevated indices.
    """
    if tau is None:
        tau = fit.default_tau()
    if tau <= 0:
        raise ValueError("tau must be positive")

    elevated = [(p.index, fit.residual(p.index, p.cost), p.side_to_move)
                for p in series.points
                if fit.residual(p.index, p.cost) > tau]
    segments: list[Segment] = []
    group: list[tuple[int, float, Color]] = []

    def close_group() -> None:
        if not group:
            return
        start, end = group[0][0], group[-1][0]
        peak = max(r for _, r, _ in group)
        by_color = {Color.BLACK: 0, Color.WHITE: 0}
        for _, _, side in group:
            by_color[side] += 1
        if len(group) == 1:
            kind, defender = SegmentKind.FORCING_SPIKE, None
        elif by_color[Color.BLACK] >= 2 and by_color[Color.WHITE] >= 2:
            kind, defender = SegmentKind.TWO_SIDED_FIGHT, None
        else:
            dominant = max(by_color, key=lambda c: by_color[c])
            if by_color[dominant] / len(group) >= one_sided_frac:
                kind, defender = SegmentKind.ONE_SIDED_FORCING, dominant
            else:
                kind, defender = SegmentKind.TWO_SIDED_FIGHT, None
        segments.append(Segment(start=start, end=end, kind=kind,
                                peak=peak, defender=defender))

    for entry in elevated:
        if group and entry[0] - group[-1][0] > max_gap + 1:
            close_group()
            group = []
        group.append(entry)
    close_group()
    return segments


# ---------------------------------------------------------------------------
# Sente / gote

class SenteKind(Enum):
    SENTE = "sente"
    GOTE = "gote"


@dataclass(frozen=True)
class SenteState:
    index: int
    state: SenteKind
    residual: float


def sente_states(series: CopSeries, fit: BaselineFit,
                 tau: Optional[float] = None) -> list[SenteState]:
    """Per position: gote while the cost is elevated above the baseline.

    An elevated cost means something on the board must be answered; at the
    baseline the mover is free to choose, i.e. has sente. The first
    position after an elevated run therefore comes out sente for its
    side to move.
    """
    if tau is None:
        tau = fit.default_tau()
    if tau <= 0:
        raise ValueError("tau must be positive")
    states = []
    for p in series.points:
        r = fit.residual(p.index, p.cost)
        kind = SenteKind.GOTE if r > tau else SenteKind.SENTE
        states.append(SenteState(index=p.index, state=kind, residual=r))
    return states


def sente_value(cost: float) -> float:
    """Value of holding the initiative: half the cost of passing.

    Passing hands the initiative across, so the swing is twice what the
    initiative is worth.
    """
    return cost / 2.0


def estimate_lead(secure_black: float, secure_white: float, komi: float,
                  cost: float, side_to_move: Color) -> float:
    """Black-perspective lead from secure territory plus the sente term."""
    if secure_black < 0 or secure_white < 0:
        raise ValueError("secure territory counts must be >= 0")
    return (secure_black - secure_white - komi
            + side_to_move.sign * sente_value(cost))


# ---------------------------------------------------------------------------
# Game stages

class Stage(Enum):
    OPENING = "opening"
    MIDDLE = "middle"
    ENDGAME = "endgame"


@dataclass(frozen=True)
class StageSpan:
    stage: Stage
    start: int
    end: int


def smoothed_baseline(series: CopSeries, fit: BaselineFit,
                      window: int = 11) -> list[float]:
    """Median of inlier costs over a centered window, edge-truncated."""
    half = window // 2
    inlier_set = set(fit.inlier_indices)
    costs = [p.cost for p in series.points]
    indices = [p.index for p in series.points]
    out = []
    for pos in range(len(costs)):
        lo, hi = max(0, pos - half), min(len(costs), pos + half + 1)
        vals = [costs[j] for j in range(lo, hi) if indices[j] in inlier_set]
        if vals:
            out.append(float(np.median(vals)))
        else:
            out.append(fit.predict(indices[pos]))
    return out


def classify_stages(series: CopSeries, fit: BaselineFit,
                    opening_floor: float = 10.0,
                    endgame_ceiling: float = 7.0,
                    hysteresis: float = 0.5,
                    window: int = 11) -> list[StageSpan]:
    """Partition the game into opening / middle game / endgame.

    Works on the smoothed inlier baseline: opening while it stays above
    `opening_floor`, endgame once it reaches `endgame_ceiling`, middle game
    between. Transitions never revert; a crossing only counts if the
    smoothed value never again climbs more than `hysteresis` above the
    threshold it crossed.
    """
    b = smoothed_baseline(series, fit, window=window)
    if not b:
        return []
    indices = [p.index for p in series.points]
    n = len(b)
    suffix_max = [0.0] * n
    running = -np.inf
    for pos in range(n - 1, -1, -1):
        running = max(running, b[pos])
        suffix_max[pos] = running

    def first_crossing(threshold: float, from_pos: int) -> int:
        for pos in range(from_pos, n):
            if b[pos] <= threshold and suffix_max[pos] <= threshold + hysteresis:
                return pos
        return n

    middle_start = first_crossing(opening_floor, 0)
    endgame_start = first_crossing(endgame_ceiling, middle_start)

    spans = []
    if middle_start > 0:
        spans.append(StageSpan(Stage.OPENING, indices[0],
                               indices[middle_start - 1]))
    if endgame_start > middle_start:
        spans.append(StageSpan(Stage.MIDDLE, indices[middle_start],
                               indices[endgame_start - 1]))
    if endgame_start < n:
        spans.append(StageSpan(Stage.ENDGAME, indices[endgame_start],
                               indices[-1]))
    return spans


# ---------------------------------------------------------------------------
# Points of interest

@dataclass(frozen=True)
class PointOfInterest:
    start: int
    end: int
    kind: str
    magnitude: float


def select_points_of_interest(segments: Sequence[Segment],
                              series: CopSeries,
                              k: int = 5) -> list[PointOfInterest]:
    """Segments plus the k costliest single moves, ranked by magnitude.

    Move entries use the position index at which the move was played and
    the (positive) size of its loss; ties rank the earlier index first.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    entries = [PointOfInterest(s.start, s.end, s.kind.value, s.peak)
               for s in segments]
    losses = [(-e, i) for i, e in enumerate(series.effects)
              if e is not None and e < 0]
    losses.sort(key=lambda item: (-item[0], item[1]))
    for loss, index in losses[:k]:
        entries.append(PointOfInterest(index, index, "blunder", loss))
    entries.sort(key=lambda p: (-p.magnitude, p.start))
    return entries
