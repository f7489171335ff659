"""Serialization, danger levels, and chart emission.

File schemas: the analysis document carries `game`, `engine`, `visits`,
and `points` (fields `index`, `sideToMove`, `scoreMeanBefore`,
`scoreMeanAfterPass`, `cost`, `winRate`, `effect`); the same columns back
the CSV export. Feature and quality documents mirror their dataclasses
with camelCase keys. Charts are standalone Vega-Lite v5 documents.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass
from typing import Optional, Sequence

from .cop import CopPoint, CopSeries
from .features import (
    BaselineFit,
    PointOfInterest,
    Segment,
    SegmentKind,
    SenteState,
    StageSpan,
)
from .quality import GameSummary
from .sgf import Color


class IoError(Exception):
    pass


# ---------------------------------------------------------------------------
# Danger level

@dataclass(frozen=True)
class DangerLevel:
    level: int
    residual_in_mads: float
    cost: float


_ABSOLUTE_BUCKETS = (3.0, 7.0, 12.0)


def danger_level(cost: float, fit: BaselineFit, index: int,
                 absolute: bool = False) -> DangerLevel:
    """Bucket the urgency of a position into levels 0..3.

    Danger is measured relative to the fitted descent: a 9-point cost is
    routine at move 20 and alarming at move 180. The output deliberately
    carries no board location. `absolute` switches to raw-cost buckets.
    """
    residual = fit.residual(index, cost)
    mads = residual / max(fit.residual_scale, 1e-12)
    if absolute:
        for level, bound in enumerate(_ABSOLUTE_BUCKETS):
            if cost <= bound:
                break
        else:
            level = 3
    else:
        if mads <= 1.0:
            level = 0
        elif mads <= 2.0:
            level = 1
        elif mads <= 4.0:
            level = 2
        else:
            level = 3
    return DangerLevel(level=level, residual_in_mads=mads, cost=cost)


# ---------------------------------------------------------------------------
# Dict/JSON forms

def _color_name(color: Color) -> str:
    return "black" if color is Color.BLACK else "white"


def _color_from_name(name: str) -> Color:
    if name.lower() in ("black", "b"):
        return Color.BLACK
    if name.lower() in ("white", "w"):
        return Color.WHITE
    raise ValueError(f"bad color {name!r}")


def point_to_dict(point: CopPoint, effect: Optional[float]) -> dict:
    return {
        "index": point.index,
        "sideToMove": _color_name(point.side_to_move),
        "scoreMeanBefore": point.score_mean_before,
        "scoreMeanAfterPass": point.score_mean_after_pass,
        "cost": point.cost,
        "winRate": point.win_rate,
        "effect": effect,
    }


def series_to_dict(series: CopSeries) -> dict:
    def effect_for(index: int) -> Optional[float]:
        if index < len(series.effects):
            return series.effects[index]
        return None

    return {
        "game": series.game_ref,
        "engine": series.engine_ref,
        "visits": series.engine_ref.get("visits", 1),
        "passMoves": [i for i, is_pass in enumerate(series.pass_flags)
                      if is_pass],
        "points": [point_to_dict(p, effect_for(p.index))
                   for p in series.points],
    }


def series_from_dict(doc: dict) -> CopSeries:
    points = []
    effects_by_index: dict[int, Optional[float]] = {}
    for row in doc["points"]:
        points.append(CopPoint(
            index=int(row["index"]),
            side_to_move=_color_from_name(row["sideToMove"]),
            score_mean_before=float(row["scoreMeanBefore"]),
            score_mean_after_pass=float(row["scoreMeanAfterPass"]),
            cost=float(row["cost"]),
            win_rate=float(row["winRate"]),
        ))
        effects_by_index[int(row["index"])] = (
            None if row.get("effect") is None else float(row["effect"]))
    game = doc.get("game", {})
    move_count = game.get("moveCount")
    if move_count is None:
        move_count = len(points)
    effects = [effects_by_index.get(i) for i in range(move_count)]
    pass_set = set(doc.get("passMoves", []))
    return CopSeries(
        points=points,
        effects=effects,
        pass_flags=[i in pass_set for i in range(move_count)],
        game_ref=game,
        engine_ref=doc.get("engine", {}),
    )


def baseline_to_dict(fit: BaselineFit) -> dict:
    return {
        "slope": fit.slope,
        "intercept": fit.intercept,
        "residualScale": fit.residual_scale,
        "inlierCount": fit.inlier_count,
        "inlierIndices": list(fit.inlier_indices),
    }


def baseline_from_dict(doc: dict) -> BaselineFit:
    return BaselineFit(
        slope=float(doc["slope"]),
        intercept=float(doc["intercept"]),
        residual_scale=float(doc["residualScale"]),
        inlier_count=int(doc["inlierCount"]),
        inlier_indices=tuple(int(i) for i in doc.get("inlierIndices", [])),
    )


def segments_from_dict(doc: dict) -> list[Segment]:
    return [Segment(
        start=int(s["start"]),
        end=int(s["end"]),
        kind=SegmentKind(s["kind"]),
        peak=float(s["peak"]),
        defender=(None if s.get("defender") is None
                  else _color_from_name(s["defender"])),
    ) for s in doc.get("segments", [])]


def stages_from_dict(doc: dict) -> list[StageSpan]:
    from .features import Stage

    return [StageSpan(stage=Stage(s["stage"]), start=int(s["start"]),
                      end=int(s["end"]))
            for s in doc.get("stages", [])]


def features_to_dict(fit: BaselineFit, segments: Sequence[Segment],
                     stages: Sequence[StageSpan],
                     sente: Sequence[SenteState],
                     points_of_interest: Sequence[PointOfInterest],
                     tau: float) -> dict:
    return {
        "baseline": baseline_to_dict(fit),
        "tau": tau,
        "segments": [{
            "start": s.start,
            "end": s.end,
            "kind": s.kind.value,
            "defender": None if s.defender is None else _color_name(s.defender),
            "peak": s.peak,
        } for s in segments],
        "stages": [{"stage": s.stage.value, "start": s.start, "end": s.end}
                   for s in stages],
        "sente": [{"index": s.index, "state": s.state.value,
                   "residual": s.residual} for s in sente],
        "pointsOfInterest": [{
            "start": p.start, "end": p.end, "kind": p.kind,
            "magnitude": p.magnitude,
        } for p in points_of_interest],
    }


def _round2(value: float) -> float:
    return round(value, 2)


def quality_to_dict(summary: GameSummary) -> dict:
    """Two-decimal report; zero-cost percentages come out "undefined"."""
    players = []
    for perf in summary.per_player:
        players.append({
            "color": _color_name(perf.color),
            "cumulativeCost": _round2(perf.cumulative_cost),
            "cumulativeRealized": _round2(perf.cumulative_realized),
            "performancePct": ("undefined" if perf.performance_pct is None
                               else _round2(perf.performance_pct)),
            "meanEffect": (None if perf.mean_effect is None
                           else _round2(perf.mean_effect)),
            "movesCounted": perf.moves_counted,
        })
    return {
        "totalCost": _round2(summary.total_cost),
        "meanCost": _round2(summary.mean_cost),
        "moveCount": summary.move_count,
        "players": players,
    }


# ---------------------------------------------------------------------------
# Chart document

_STAGE_COLORS = {"opening": "#dbeafe", "middle": "#fde68a",
                 "endgame": "#dcfce7"}
_SEGMENT_COLORS = {
    SegmentKind.FORCING_SPIKE.value: "#f97316",
    SegmentKind.TWO_SIDED_FIGHT.value: "#dc2626",
    SegmentKind.ONE_SIDED_FORCING.value: "#7c3aed",
}


def render_chart(series: CopSeries, fit: BaselineFit,
                 segments: Sequence[Segment],
                 stages: Sequence[StageSpan]) -> dict:
    """Self-contained Vega-Lite document: one bar per analyzed move,
    colored by side to move, with the fitted descent overlaid and stage
    and segment bands behind. Deterministic for identical inputs."""
    layers: list[dict] = []
    if stages:
        layers.append({
            "data": {"values": [
                {"start": s.start, "end": s.end + 1, "stage": s.stage.value}
                for s in stages
            ]},
            "mark": {"type": "rect", "opacity": 0.35},
            "encoding": {
                "x": {"field": "start", "type": "quantitative"},
                "x2": {"field": "end"},
                "color": {
                    "field": "stage", "type": "nominal",
                    "scale": {
                        "domain": list(_STAGE_COLORS),
                        "range": list(_STAGE_COLORS.values()),
                    },
                    "legend": {"title": "stage"},
                },
            },
        })
    if segments:
        layers.append({
            "data": {"values": [
                {"start": s.start, "end": s.end + 1, "kind": s.kind.value}
                for s in segments
            ]},
            "mark": {"type": "rect", "opacity": 0.18},
            "encoding": {
                "x": {"field": "start", "type": "quantitative"},
                "x2": {"field": "end"},
                "color": {
                    "field": "kind", "type": "nominal",
                    "scale": {
                        "domain": list(_SEGMENT_COLORS),
                        "range": list(_SEGMENT_COLORS.values()),
                    },
                    "legend": {"title": "segment"},
                },
            },
        })
    layers.append({
        "name": "cost-marks",
        "data": {"values": [
            {"index": p.index, "cost": p.cost,
             "sideToMove": _color_name(p.side_to_move)}
            for p in series.points
        ]},
        "mark": {"type": "bar", "width": 2},
        "encoding": {
            "x": {"field": "index", "type": "quantitative",
                  "title": "move"},
            "y": {"field": "cost", "type": "quantitative",
                  "title": "cost of passing"},
            "color": {
                "field": "sideToMove", "type": "nominal",
                "scale": {"domain": ["black", "white"],
                          "range": ["#1f2937", "#9ca3af"]},
                "legend": {"title": "to move"},
            },
        },
    })
    if series.points:
        first = series.points[0].index
        last = series.points[-1].index
        layers.append({
            "name": "baseline",
            "data": {"values": [
                {"index": first, "baseline": fit.predict(first)},
                {"index": last, "baseline": fit.predict(last)},
            ]},
            "mark": {"type": "line", "color": "#ef4444", "strokeDash": [6, 4]},
            "encoding": {
                "x": {"field": "index", "type": "quantitative"},
                "y": {"field": "baseline", "type": "quantitative"},
            },
        })
    return {
        "$schema": "https://vega.github.io/schema/vega-lite/v5.json",
        "description": "Cost of passing per move with fitted linear descent",
        "width": 700,
        "height": 260,
        "layer": layers,
    }


def chart_to_json(chart: dict) -> str:
    return json.dumps(chart, indent=2)


# ---------------------------------------------------------------------------
# File export / import

_CSV_COLUMNS = ("index", "sideToMove", "scoreMeanBefore",
                "scoreMeanAfterPass", "cost", "winRate", "effect")


def series_to_csv(series: CopSeries) -> str:
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(_CSV_COLUMNS)
    for p in series.points:
        e = (series.effects[p.index]
             if p.index < len(series.effects) else None)
        writer.writerow([
            p.index,
            _color_name(p.side_to_move),
            f"{p.score_mean_before:.6f}",
            f"{p.score_mean_after_pass:.6f}",
            f"{p.cost:.6f}",
            f"{p.win_rate:.6f}",
            "" if e is None else f"{e:.6f}",
        ])
    return out.getvalue()


def series_from_csv(text: str) -> CopSeries:
    """Rebuild a series from the tabular export (metadata is not carried)."""
    reader = csv.DictReader(io.StringIO(text))
    points = []
    effects = []
    for row in reader:
        points.append(CopPoint(
            index=int(row["index"]),
            side_to_move=_color_from_name(row["sideToMove"]),
            score_mean_before=float(row["scoreMeanBefore"]),
            score_mean_after_pass=float(row["scoreMeanAfterPass"]),
            cost=float(row["cost"]),
            win_rate=float(row["winRate"]),
        ))
        effects.append(float(row["effect"]) if row["effect"] != "" else None)
    return CopSeries(points=points, effects=effects,
                     game_ref={"moveCount": len(points)})


def export_analysis(destination: str, series: CopSeries,
                    features: Optional[dict] = None,
                    quality: Optional[dict] = None,
                    fmt: str = "json") -> None:
    """Write the analysis document (plus optional sections) to a file."""
    if fmt == "json":
        doc = series_to_dict(series)
        if features is not None:
            doc["features"] = features
        if quality is not None:
            doc["quality"] = quality
        payload = json.dumps(doc, indent=2)
    elif fmt == "csv":
        if features is not None or quality is not None:
            raise ValueError("CSV export carries only the point table")
        payload = series_to_csv(series)
    else:
        raise ValueError(f"unknown format {fmt!r}")
    try:
        with open(destination, "w", encoding="utf-8") as f:
            f.write(payload)
    except OSError as exc:
        raise IoError(f"cannot write {destination}: {exc}") from exc


def load_analysis(path: str) -> CopSeries:
    try:
        with open(path, "r", encoding="utf-8") as f:
            text = f.read()
    except OSError as exc:
        raise IoError(f"cannot read {path}: {exc}") from exc
    if path.endswith(".csv"):
        return series_from_csv(text)
    return series_from_dict(json.loads(text))
