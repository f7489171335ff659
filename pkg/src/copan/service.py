"""HTTP + WebSocket front end over the analysis pipeline.

REST: POST /games (SGF body, returns an id), then
GET /games/{id}/analysis | /features | /chart.

Live play: WebSocket /live. The client sends one move at a time as
{"move": {"color": "black"|"white", "vertex": "Q16"|"pass"}}; the server
answers {"index", "cost", "dangerLevel", "sente"} for the position the
move produced. Danger is a bare level, never a board location. An
optional first message {"config": {"boardSize": .., "komi": ..}} adjusts
the game settings.
"""

from __future__ import annotations

import threading
from contextlib import asynccontextmanager
from typing import Optional

from fastapi import FastAPI, HTTPException, Request, WebSocket, WebSocketDisconnect
from starlette.concurrency import run_in_threadpool

from .cop import EvalCache, compute_series, cost_of_passing, synthetic_series
from .engine import (
    EngineConfig,
    EngineError,
    evaluate,
    evaluate_with_pass,
    vertex_to_point,
)
from .features import (
    BaselineFit,
    classify_stages,
    detect_segments,
    fit_baseline,
    select_points_of_interest,
    sente_states,
)
from .quality import game_summary
from .report import (
    danger_level,
    features_to_dict,
    quality_to_dict,
    render_chart,
    segments_from_dict,
    series_to_dict,
    stages_from_dict,
)
from .sgf import Color, Move, SgfError, parse_sgf

# Prior for live play before enough points accumulate for a real fit: the
# canonical full-board descent (empty-board value 12, zero around move 240).
_LIVE_PRIOR = BaselineFit(slope=-0.05, intercept=12.0, residual_scale=1.0,
                          inlier_count=2, inlier_indices=())
_MIN_FIT_POINTS = 10


class _GameStore:
    def __init__(self) -> None:
        self._lock = threading.Lock()
        self._games: dict[str, dict] = {}
        self._counter = 0

    def add(self, record) -> str:
        with self._lock:
            self._counter += 1
            game_id = f"g{self._counter}"
            self._games[game_id] = {"record": record, "analysis": None,
                                    "features": None}
            return game_id

    def get(self, game_id: str) -> dict:
        with self._lock:
            game = self._games.get(game_id)
        if game is None:
            raise HTTPException(status_code=404,
                                detail=f"unknown game {game_id}")
        return game


def create_app(config: EngineConfig, static_dir: Optional[str] = None,
               engine_factory=None) -> FastAPI:
    """Build the service; `engine_factory` lets tests inject an engine."""
    store = _GameStore()
    cache = EvalCache()
    state: dict = {"engine": None}
    engine_lock = threading.Lock()

    def get_engine():
        with engine_lock:
            if state["engine"] is None:
                if engine_factory is not None:
                    state["engine"] = engine_factory()
                else:
                    from .engine import AnalysisEngineClient

                    state["engine"] = AnalysisEngineClient(config).start()
            return state["engine"]

    @asynccontextmanager
    async def lifespan(_app: FastAPI):
        yield
        engine = state.get("engine")
        if engine is not None:
            engine.close()
            state["engine"] = None

    app = FastAPI(title="copan analysis service", lifespan=lifespan)

    @app.post("/games")
    async def post_game(request: Request) -> dict:
        body = await request.body()
        try:
            record = parse_sgf(body.decode("utf-8", errors="replace"))
        except SgfError as exc:
            raise HTTPException(status_code=400, detail=str(exc)) from exc
        game_id = store.add(record)
        return {"id": game_id, "moveCount": len(record.moves)}

    def _analysis_for(game_id: str):
        game = store.get(game_id)
        if game["analysis"] is None:
            try:
                game["analysis"] = compute_series(
                    game["record"], get_engine(), visits=config.visits,
                    cache=cache)
            except EngineError as exc:
                raise HTTPException(status_code=502,
                                    detail=f"engine failure: {exc}") from exc
        return game["analysis"]

    def _features_for(game_id: str) -> dict:
        game = store.get(game_id)
        if game["features"] is None:
            series = _analysis_for(game_id)
            fit = fit_baseline(series)
            tau = fit.default_tau()
            segments = detect_segments(series, fit, tau=tau)
            game["features"] = features_to_dict(
                fit,
                segments,
                classify_stages(series, fit),
                sente_states(series, fit, tau=tau),
                select_points_of_interest(segments, series),
                tau=tau,
            )
        return game["features"]

    @app.get("/games/{game_id}/analysis")
    def get_analysis(game_id: str) -> dict:
        return series_to_dict(_analysis_for(game_id))

    @app.get("/games/{game_id}/features")
    def get_features(game_id: str) -> dict:
        return _features_for(game_id)

    @app.get("/games/{game_id}/quality")
    def get_quality(game_id: str) -> dict:
        return quality_to_dict(game_summary(_analysis_for(game_id)))

    @app.get("/games/{game_id}/chart")
    def get_chart(game_id: str) -> dict:
        series = _analysis_for(game_id)
        features_doc = _features_for(game_id)
        from .report import baseline_from_dict

        return render_chart(series, baseline_from_dict(features_doc["baseline"]),
                            segments_from_dict(features_doc),
                            stages_from_dict(features_doc))

    @app.websocket("/live")
    async def live(ws: WebSocket) -> None:
        await ws.accept()
        moves: list[Move] = []
        costs: list[float] = []
        board_size = 19
        komi = 6.5
        try:
            while True:
                message = await ws.receive_json()
                if "config" in message:
                    cfg = message["config"]
                    board_size = int(cfg.get("boardSize", board_size))
                    komi = float(cfg.get("komi", komi))
                    continue
                if "move" not in message:
                    await ws.send_json({"error": "expected a move"})
                    continue
                try:
                    color = (Color.BLACK
                             if message["move"]["color"].lower().startswith("b")
                             else Color.WHITE)
                    point = vertex_to_point(message["move"]["vertex"],
                                            board_size)
                except (KeyError, ValueError) as exc:
                    await ws.send_json({"error": f"bad move: {exc}"})
                    continue
                moves.append(Move(color, point))
                try:
                    update = await run_in_threadpool(
                        _live_update, get_engine(), moves, costs,
                        komi, board_size, config.visits)
                except EngineError as exc:
                    await ws.send_json({"error": f"engine failure: {exc}"})
                    continue
                costs.append(update.pop("_cost_raw"))
                await ws.send_json(update)
        except WebSocketDisconnect:
            return

    if static_dir is not None:
        from fastapi.staticfiles import StaticFiles

        app.mount("/", StaticFiles(directory=static_dir, html=True),
                  name="client")

    return app


def _live_update(engine, moves: list[Move], costs: list[float], komi: float,
                 board_size: int, visits: int) -> dict:
    """Evaluate the newest position and grade its danger and sente state."""
    before = evaluate(engine, moves, komi=komi, board_size=board_size,
                      visits=visits)
    after = evaluate_with_pass(engine, moves, komi=komi,
                               board_size=board_size, visits=visits)
    cost = cost_of_passing(before.score_mean, after.score_mean,
                           before.side_to_move)

    # The running fit uses 0-based slots for costs of positions 1..k; the
    # new point sits at slot len(costs) in that frame.
    fit = _LIVE_PRIOR
    slot = len(costs)
    if slot + 1 >= _MIN_FIT_POINTS:
        try:
            fit = fit_baseline(synthetic_series(costs + [cost]))
        except Exception:
            fit = _LIVE_PRIOR
    danger = danger_level(cost, fit, slot)
    residual = fit.residual(slot, cost)
    return {
        "index": len(moves),
        "cost": cost,
        "dangerLevel": danger.level,
        "sente": bool(residual <= fit.default_tau()),
        "_cost_raw": cost,
    }
