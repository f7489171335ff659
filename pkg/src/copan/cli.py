"""Command line front end.

Exit codes: 0 success, 1 input error (bad SGF, bad files, bad flags),
2 engine error (crash, timeout, rejected query).
"""

from __future__ import annotations

import argparse
import json
import sys

from . import report
from .cop import EvalCache, compute_series
from .engine import AnalysisEngineClient, EngineConfig, EngineError, Perspective
from .features import (
    classify_stages,
    detect_segments,
    fit_baseline,
    select_points_of_interest,
    sente_states,
)
from .mocks import MockModel, serve_stdio
from .quality import game_summary, player_performance
from .sgf import SgfError, parse_sgf


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="copan",
        description="Cost-of-passing analysis for Go games")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", help="run a game through an engine")
    p.add_argument("game", help="SGF file")
    p.add_argument("--engine-cmd", required=True,
                   help="engine command line (analysis protocol on stdio)")
    p.add_argument("--visits", type=int, default=100)
    p.add_argument("--perspective", default="side-to-move",
                   choices=["black", "white", "side-to-move"],
                   help="how the engine reports score leads")
    p.add_argument("--include-terminal", action="store_true",
                   help="also evaluate the position after the last move")
    p.add_argument("--rules", default=None,
                   help="override the ruleset sent to the engine")
    p.add_argument("--timeout", type=float, default=60.0)
    p.add_argument("--max-in-flight", type=int, default=8)
    p.add_argument("--lenient", action="store_true",
                   help="accept consecutive same-color moves")
    p.add_argument("--out", required=True)

    p = sub.add_parser("features", help="derive features from an analysis")
    p.add_argument("analysis", help="analysis JSON file")
    p.add_argument("--tau", type=float, default=None,
                   help="elevation threshold in points")
    p.add_argument("--one-sided-frac", type=float, default=0.8)
    p.add_argument("--poi-count", type=int, default=5)
    p.add_argument("--out", required=True)

    p = sub.add_parser("quality", help="per-player performance report")
    p.add_argument("analysis", help="analysis JSON file")
    p.add_argument("--clamp-realized", action="store_true",
                   help="clamp per-move realized value into [0, cost]")
    p.add_argument("--out", required=True)

    p = sub.add_parser("chart", help="emit a Vega-Lite chart document")
    p.add_argument("analysis", help="analysis JSON file")
    p.add_argument("features", help="features JSON file")
    p.add_argument("--out", required=True)

    p = sub.add_parser("mock-engine",
                       help="run a deterministic engine on stdio")
    p.add_argument("--fixture", default=None,
                   help="JSON fixture table (scripted mock)")
    p.add_argument("--base", type=float, default=12.0)
    p.add_argument("--decay", type=float, default=0.05)
    p.add_argument("--komi", type=float, default=6.5)
    p.add_argument("--spike", action="append", default=[],
                   metavar="K:V", help="extra points V at move number K")
    p.add_argument("--perspective", default="side-to-move",
                   choices=["black", "white", "side-to-move"])
    p.add_argument("--swap-pairs", action="store_true",
                   help="emit responses pairwise out of order")
    p.add_argument("--delay-ms", type=float, default=0.0)
    p.add_argument("--crash-after", type=int, default=None,
                   help="exit abruptly after this many responses")
    p.add_argument("--crash-marker", default=None,
                   help="crash only if this file does not exist yet")

    p = sub.add_parser("serve", help="HTTP/WebSocket analysis service")
    p.add_argument("--port", type=int, default=8000)
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--engine-cmd", required=True)
    p.add_argument("--visits", type=int, default=100)
    p.add_argument("--perspective", default="side-to-move",
                   choices=["black", "white", "side-to-move"])
    p.add_argument("--static-dir", default=None,
                   help="directory with the browser client bundle")

    return parser


def _parse_spikes(entries: list[str]) -> dict[int, float]:
    spikes = {}
    for entry in entries:
        try:
            k, v = entry.split(":")
            spikes[int(k)] = float(v)
        except ValueError:
            raise ValueError(f"bad --spike {entry!r}, expected K:V") from None
    return spikes


def _cmd_analyze(args) -> int:
    with open(args.game, "r", encoding="utf-8") as f:
        record = parse_sgf(f.read(), lenient=args.lenient)
    config = EngineConfig(
        command=args.engine_cmd,
        visits=args.visits,
        rules=args.rules or record.rules,
        reporting_perspective=Perspective.from_string(args.perspective),
        timeout=args.timeout,
        max_in_flight=args.max_in_flight,
    )
    with AnalysisEngineClient(config) as client:
        series = compute_series(record, client, visits=args.visits,
                                include_terminal=args.include_terminal,
                                cache=EvalCache())
    report.export_analysis(args.out, series)
    print(f"analyzed {series.move_count} moves -> {args.out}")
    return 0


def _cmd_features(args) -> int:
    series = report.load_analysis(args.analysis)
    fit = fit_baseline(series)
    tau = args.tau if args.tau is not None else fit.default_tau()
    segments = detect_segments(series, fit, tau=tau,
                               one_sided_frac=args.one_sided_frac)
    doc = report.features_to_dict(
        fit,
        segments,
        classify_stages(series, fit),
        sente_states(series, fit, tau=tau),
        select_points_of_interest(segments, series, k=args.poi_count),
        tau=tau,
    )
    with open(args.out, "w", encoding="utf-8") as f:
        json.dump(doc, f, indent=2)
    print(f"features -> {args.out}")
    return 0


def _cmd_quality(args) -> int:
    series = report.load_analysis(args.analysis)
    summary = game_summary(series)
    if args.clamp_realized:
        summary = type(summary)(
            total_cost=summary.total_cost,
            move_count=summary.move_count,
            mean_cost=summary.mean_cost,
            per_player=player_performance(series, clamp_realized=True),
        )
    with open(args.out, "w", encoding="utf-8") as f:
        json.dump(report.quality_to_dict(summary), f, indent=2)
    print(f"quality -> {args.out}")
    return 0


def _cmd_chart(args) -> int:
    series = report.load_analysis(args.analysis)
    with open(args.features, "r", encoding="utf-8") as f:
        features_doc = json.load(f)
    fit = report.baseline_from_dict(features_doc["baseline"])
    chart = report.render_chart(
        series, fit,
        report.segments_from_dict(features_doc),
        report.stages_from_dict(features_doc),
    )
    with open(args.out, "w", encoding="utf-8") as f:
        f.write(report.chart_to_json(chart))
    print(f"chart -> {args.out}")
    return 0


def _cmd_mock_engine(args) -> int:
    fixtures = None
    if args.fixture is not None:
        with open(args.fixture, "r", encoding="utf-8") as f:
            fixtures = json.load(f)
    model = MockModel(base_value=args.base, decay=args.decay,
                      komi=args.komi, spikes=_parse_spikes(args.spike))
    return serve_stdio(
        model=model,
        fixtures=fixtures,
        perspective=Perspective.from_string(args.perspective),
        swap_pairs=args.swap_pairs,
        delay_ms=args.delay_ms,
        crash_after=args.crash_after,
        crash_marker=args.crash_marker,
    )


def _cmd_serve(args) -> int:
    import uvicorn

    from .service import create_app

    config = EngineConfig(
        command=args.engine_cmd,
        visits=args.visits,
        reporting_perspective=Perspective.from_string(args.perspective),
    )
    app = create_app(config, static_dir=args.static_dir)
    uvicorn.run(app, host=args.host, port=args.port, log_level="warning")
    return 0


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    handlers = {
        "analyze": _cmd_analyze,
        "features": _cmd_features,
        "quality": _cmd_quality,
        "chart": _cmd_chart,
        "mock-engine": _cmd_mock_engine,
        "serve": _cmd_serve,
    }
    try:
        return handlers[args.command](args)
    except EngineError as exc:
        print(f"engine error: {exc}", file=sys.stderr)
        return 2
    except (SgfError, report.IoError, OSError, ValueError,
            KeyError, json.JSONDecodeError) as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
