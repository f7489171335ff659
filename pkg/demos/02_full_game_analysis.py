"""Analyze a bundled game end to end and write the standard output files.

Produces demos/output/{analysis.json, analysis.csv, features.json,
quality.json, chart.json} using the in-process mock engine, which is
instant; point the CLI at a real KataGo for the same flow on real values:

    copan analyze game.sgf --engine-cmd "katago analysis -config ... " \
        --visits 500 --out analysis.json
"""

import json
import pathlib

from copan import (
    EvalCache,
    MockModel,
    NegamaxEngine,
    classify_stages,
    compute_series,
    detect_segments,
    fit_baseline,
    game_summary,
    render_chart,
    select_points_of_interest,
    sente_states,
)
from copan.fixtures import fixture_record
from copan.report import (
    chart_to_json,
    export_analysis,
    features_to_dict,
    quality_to_dict,
    series_to_csv,
)

out_dir = pathlib.Path(__file__).parent / "output"
out_dir.mkdir(exist_ok=True)

record = fixture_record("game1")
print(f"game: {record.metadata.get('PB')} vs {record.metadata.get('PW')}, "
      f"{len(record.moves)} moves, komi {record.komi}")

engine = NegamaxEngine(MockModel(spikes={60: 6.0, 61: 5.5, 62: 6.0, 63: 5.0,
                                         140: 9.0}))
series = compute_series(record, engine, visits=50, cache=EvalCache())
print(f"evaluated {engine.query_count} positions "
      f"(two per move: the position and its pass-injected twin)")

fit = fit_baseline(series)
print(f"baseline: cost ~= {fit.intercept:.2f} {fit.slope:+.3f} * move "
      f"(residual scale {fit.residual_scale:.3f})")

segments = detect_segments(series, fit)
stages = classify_stages(series, fit)
sente = sente_states(series, fit)
pois = select_points_of_interest(segments, series)
summary = game_summary(series)

print(f"stages: " + ", ".join(
    f"{s.stage.value} [{s.start}..{s.end}]" for s in stages))
print(f"segments: {len(segments)}, points of interest: {len(pois)}")
print(f"total cost {summary.total_cost:.2f} over {summary.move_count} moves "
      f"(mean {summary.mean_cost:.2f})")
for player in summary.per_player:
    print(f"  {player.color.value}: realized "
          f"{player.cumulative_realized:.2f} of "
          f"{player.cumulative_cost:.2f} -> {player.performance_pct:.1f}%")

features_doc = features_to_dict(fit, segments, stages, sente, pois,
                                tau=fit.default_tau())
quality_doc = quality_to_dict(summary)
export_analysis(str(out_dir / "analysis.json"), series)
(out_dir / "analysis.csv").write_text(series_to_csv(series))
(out_dir / "features.json").write_text(json.dumps(features_doc, indent=2))
(out_dir / "quality.json").write_text(json.dumps(quality_doc, indent=2))
chart = render_chart(series, fit, segments, stages)
(out_dir / "chart.json").write_text(chart_to_json(chart))
print(f"wrote {len(list(out_dir.iterdir()))} files to {out_dir}/")
print("view chart.json in any Vega-Lite viewer (vega.github.io/editor)")
