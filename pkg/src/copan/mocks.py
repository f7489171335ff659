"""Deterministic engines for testing and offline work.

The negamax mock assigns move k of a game the value w(k) =
max(base_value - decay*(k-1), 0) + spike(k) and assumes both players pick
up exactly the value of their moves. Its score for a position after n
moves has the closed form

    mu = S(n) + sign(side_to_move) * A(n) - komi

where S(n) is the signed value already banked by non-pass moves and
A(n) = sum_{j>=1} (-1)^(j+1) w(n+j) is the alternating value of the
remaining schedule. Consequences used by tests everywhere: the cost of
passing at position n is exactly w(n+1), any non-pass move has effect 0,
and a pass has effect -w(n+1).

The scripted mock is a plain lookup table keyed by the move sequence.
Both run in-process or as a standalone subprocess speaking the analysis
protocol (`copan mock-engine`).
"""

from __future__ import annotations

import json
import math
import os
import sys
import threading
import time
from dataclasses import dataclass, field
from typing import Optional, Sequence

from .engine import (
    Perspective,
    PositionEval,
    normalize_to_black,
    normalize_winrate_to_black,
    side_to_move_for,
    vertex_to_point,
)
from .sgf import Color, Move, Point


@dataclass
class MockModel:
    base_value: float = 12.0
    decay: float = 0.05
    komi: float = 6.5
    spikes: dict[int, float] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if self.base_value <= 0:
            raise ValueError("base_value must be positive")
        if self.decay < 0:
            raise ValueError("decay must be >= 0")
        if any(v < 0 for v in self.spikes.values()):
            raise ValueError("spike values must be >= 0")

    def move_value(self, k: int) -> float:
        """w(k): the value of the k-th move of the game (1-based)."""
        return (max(self.base_value - self.decay * (k - 1), 0.0)
                + self.spikes.get(k, 0.0))

    def _horizon(self) -> int:
        """Last k with w(k) > 0."""
        if self.decay == 0:
            raise ValueError(
                "move values never reach zero with decay = 0; the "
                "alternating tail has no finite value")
        last = int(math.ceil(self.base_value / self.decay)) + 1
        while self.move_value(last) > 0:
            last += 1
        if self.spikes:
            last = max(last, max(self.spikes))
        return last

    def tail_value(self, n: int) -> float:
        """A(n): alternating sum of the schedule after move n."""
        horizon = self._horizon()
        total = 0.0
        sign = 1.0
        for k in range(n + 1, horizon + 1):
            total += sign * self.move_value(k)
            sign = -sign
        return total


def negamax_mock_score(model: MockModel, moves: Sequence[Move],
                       komi: Optional[float] = None,
                       initial_stones: Sequence[Point] = (),
                       initial_player: Optional[Color] = None) -> float:
    """Black-perspective score mean of the closed-form mock."""
    komi = model.komi if komi is None else komi
    banked = 0.0
    for k, move in enumerate(moves, start=1):
        if not move.is_pass:
            banked += move.color.sign * model.move_value(k)
    side = side_to_move_for(moves, initial_stones, initial_player)
    return banked + side.sign * model.tail_value(len(moves)) - komi


def _squash_winrate(score_mean: float) -> float:
    return 1.0 / (1.0 + math.exp(-score_mean / 12.0))


class _InProcessEngine:
    """Shared plumbing for the deterministic in-process engines."""

    def __init__(self) -> None:
        self.query_count = 0

    def _score(self, moves, komi, board_size, initial_stones,
               initial_player) -> float:
        raise NotImplementedError

    def evaluate(self, moves: Sequence[Move], komi: float, board_size: int,
                 visits: Optional[int] = None,
                 initial_stones: Sequence[Point] = (),
                 initial_player: Optional[Color] = None) -> PositionEval:
        self.query_count += 1
        mu = self._score(moves, komi, board_size, initial_stones,
                         initial_player)
        return PositionEval(
            score_mean=mu,
            win_rate=_squash_winrate(mu),
            visits_used=visits or 1,
            side_to_move=side_to_move_for(moves, initial_stones,
                                          initial_player),
        )

    def start(self):
        return self

    def close(self) -> None:
        pass


class NegamaxEngine(_InProcessEngine):
    def __init__(self, model: Optional[MockModel] = None):
        super().__init__()
        self.model = model or MockModel()

    def _score(self, moves, komi, board_size, initial_stones,
               initial_player) -> float:
        return negamax_mock_score(self.model, moves, komi=komi,
                                  initial_stones=initial_stones,
                                  initial_player=initial_player)


def fixture_key(moves: Sequence[Move], board_size: int) -> str:
    """Canonical lookup key: lowercased color/vertex tokens, e.g. 'b q16 w pass'."""
    from .engine import point_to_vertex

    return " ".join(
        f"{m.color.value.lower()} {point_to_vertex(m.point, board_size).lower()}"
        for m in moves
    )


class ScriptedEngine(_InProcessEngine):
    """Evaluates from a fixture table of black-perspective score means.

    Entries map a fixture key to either a bare score or a dict with
    `scoreLead` and optional `winrate`/`visits`.
    """

    def __init__(self, fixtures: dict):
        super().__init__()
        self.fixtures = fixtures

    def lookup(self, key: str) -> tuple[float, Optional[float], Optional[int]]:
        from .engine import MissingFixture

        if key not in self.fixtures:
            raise MissingFixture(f"no fixture for key {key!r}")
        entry = self.fixtures[key]
        if isinstance(entry, (int, float)):
            return float(entry), None, None
        return (float(entry["scoreLead"]), entry.get("winrate"),
                entry.get("visits"))

    def evaluate(self, moves: Sequence[Move], komi: float, board_size: int,
                 visits: Optional[int] = None,
                 initial_stones: Sequence[Point] = (),
                 initial_player: Optional[Color] = None) -> PositionEval:
        self.query_count += 1
        mu, wr, vis = self.lookup(fixture_key(moves, board_size))
        return PositionEval(
            score_mean=mu,
            win_rate=wr if wr is not None else _squash_winrate(mu),
            visits_used=vis or visits or 1,
            side_to_move=side_to_move_for(moves, initial_stones,
                                          initial_player),
        )


# ---------------------------------------------------------------------------
# Standalone subprocess mode

def _wire_to_moves(pairs: list, board_size: int) -> list[Move]:
    moves = []
    for color_text, vertex in pairs:
        color = Color.BLACK if color_text.lower().startswith("b") else Color.WHITE
        moves.append(Move(color, vertex_to_point(vertex, board_size)))
    return moves


class _ResponseEmitter:
    """Writes responses, optionally delayed and with adjacent pairs swapped.

    Pair swapping yields a deterministic out-of-order stream; a short idle
    timer flushes a leftover odd response so clients never hang.
    """

    def __init__(self, stream, swap_pairs: bool = False,
                 delay_ms: float = 0.0):
        self._stream = stream
        self._swap = swap_pairs
        self._delay = delay_ms / 1000.0
        self._held: Optional[str] = None
        self._lock = threading.Lock()
        self._timer: Optional[threading.Timer] = None

    def emit(self, line: str) -> None:
        if self._delay:
            time.sleep(self._delay)
        with self._lock:
            if self._timer is not None:
                self._timer.cancel()
                self._timer = None
            if not self._swap:
                self._write(line)
                return
            if self._held is None:
                self._held = line
                self._timer = threading.Timer(0.2, self.flush)
                self._timer.daemon = True
                self._timer.start()
            else:
                self._write(line)
                self._write(self._held)
                self._held = None

    def flush(self) -> None:
        with self._lock:
            if self._timer is not None:
                self._timer.cancel()
                self._timer = None
            if self._held is not None:
                self._write(self._held)
                self._held = None

    def _write(self, line: str) -> None:
        self._stream.write(line + "\n")
        self._stream.flush()


def serve_stdio(model: Optional[MockModel] = None,
                fixtures: Optional[dict] = None,
                perspective: Perspective = Perspective.SIDE_TO_MOVE,
                swap_pairs: bool = False,
                delay_ms: float = 0.0,
                crash_after: Optional[int] = None,
                crash_marker: Optional[str] = None,
                stdin=None, stdout=None) -> int:
    """Run the analysis protocol on stdio until EOF. Returns exit code."""
    stdin = stdin or sys.stdin
    stdout = stdout or sys.stdout
    scripted = ScriptedEngine(fixtures) if fixtures is not None else None
    model = model or MockModel()
    emitter = _ResponseEmitter(stdout, swap_pairs=swap_pairs,
                               delay_ms=delay_ms)
    answered = 0
    crash_armed = crash_after is not None and (
        crash_marker is None or not os.path.exists(crash_marker))

    for raw in stdin:
        line = raw.strip()
        if not line:
            continue
        try:
            query = json.loads(line)
            qid = query["id"]
        except (json.JSONDecodeError, KeyError, TypeError):
            emitter.emit(json.dumps({"error": "unparseable query"}))
            continue
        try:
            board_size = int(query.get("boardXSize", 19))
            komi = float(query.get("komi", model.komi))
            visits = int(query.get("maxVisits", 1))
            moves = _wire_to_moves(query.get("moves", []), board_size)
            initial = [vertex_to_point(v, board_size)
                       for _, v in query.get("initialStones", [])]
            first = query.get("initialPlayer")
            initial_player = None
            if first is not None:
                initial_player = (Color.BLACK
                                  if str(first).lower().startswith("b")
                                  else Color.WHITE)
            side = side_to_move_for(moves, initial, initial_player)
            if scripted is not None:
                mu, wr, vis = scripted.lookup(fixture_key(moves, board_size))
                winrate_black = wr if wr is not None else _squash_winrate(mu)
                visits = vis or visits
            else:
                mu = negamax_mock_score(model, moves, komi=komi,
                                        initial_stones=initial,
                                        initial_player=initial_player)
                winrate_black = _squash_winrate(mu)
        except Exception as exc:
            kind = ("missing_fixture"
                    if type(exc).__name__ == "MissingFixture" else "rejected")
            emitter.emit(json.dumps({"id": qid, "error": str(exc),
                                     "kind": kind}))
            continue
        # The stored truth is black-perspective; report per configuration.
        reported = normalize_to_black(mu, perspective, side)
        reported_wr = normalize_winrate_to_black(winrate_black, perspective,
                                                 side)
        emitter.emit(json.dumps({
            "id": qid,
            "rootInfo": {"scoreLead": reported, "winrate": reported_wr,
                         "visits": visits},
        }))
        answered += 1
        if crash_armed and answered >= crash_after:
            emitter.flush()
            if crash_marker is not None:
                with open(crash_marker, "w") as f:
                    f.write("crashed once\n")
            os._exit(13)
    emitter.flush()
    return 0
