"""copan: cost-of-passing analysis for Go games.

Computes, for every position of a game, the score-lead price of a
hypothetical pass by querying a KataGo-compatible analysis engine twice
per position (once as-is, once with an explicit pass injected), then
derives the baseline linear descent, fights and forcing sequences,
sente/gote states, game stages, danger levels, and per-player
performance percentages from the resulting series.
"""

from .cop import (
    CopPoint,
    CopSeries,
    EvalCache,
    compute_series,
    cost_of_passing,
    effect,
    realized_value,
    synthetic_series,
)
from .engine import (
    AnalysisEngineClient,
    EngineConfig,
    EngineCrashed,
    EngineError,
    EngineRejectedQuery,
    MissingFixture,
    Perspective,
    PositionEval,
    ProtocolError,
    QueryTimeout,
    evaluate,
    evaluate_with_pass,
    normalize_to_black,
)
from .features import (
    BaselineFit,
    PointOfInterest,
    Segment,
    SegmentKind,
    SenteKind,
    SenteState,
    Stage,
    StageSpan,
    classify_stages,
    detect_segments,
    estimate_lead,
    fit_baseline,
    select_points_of_interest,
    sente_states,
    sente_value,
)
from .mocks import MockModel, NegamaxEngine, ScriptedEngine, negamax_mock_score
from .quality import (
    GameSummary,
    PlayerPerformance,
    game_summary,
    handicap_value,
    mean_effect,
    player_performance,
)
from .report import DangerLevel, danger_level, export_analysis, render_chart
from .sgf import (
    Color,
    GameRecord,
    MalformedSgf,
    Move,
    OccupiedPoint,
    OffBoardMove,
    UnsupportedSize,
    parse_sgf,
    position_prefix,
    serialize_sgf,
)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
