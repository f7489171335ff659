"""Client for analysis engines speaking line-delimited JSON over stdio.

The wire format follows the KataGo analysis engine: one JSON request per
line on stdin, one JSON response per line on stdout, matched by `id`.
Responses may arrive in any order; the client multiplexes concurrent
callers, keeps at most `max_in_flight` queries outstanding, restarts a
crashed engine once (replaying unanswered queries), and normalizes every
score to the black player's perspective.
"""

from __future__ import annotations

import json
import shlex
import subprocess
import tempfile
import threading
from dataclasses import dataclass
from enum import Enum
from typing import Optional, Sequence

from .sgf import Color, Move, Point


class EngineError(Exception):
    pass


class EngineCrashed(EngineError):
    pass


class QueryTimeout(EngineError):
    pass


class ProtocolError(EngineError):
    pass


class MissingFixture(ProtocolError):
    pass


class EngineRejectedQuery(EngineError):
    pass


class Perspective(Enum):
    BLACK = "black"
    WHITE = "white"
    SIDE_TO_MOVE = "side-to-move"

    @classmethod
    def from_string(cls, text: str) -> "Perspective":
        for p in cls:
            if p.value == text.lower():
                return p
        raise ValueError(f"unknown perspective {text!r}")


@dataclass
class EngineConfig:
    command: Sequence[str] | str
    visits: int = 100
    rules: str = "japanese"
    reporting_perspective: Perspective = Perspective.SIDE_TO_MOVE
    timeout: float = 60.0
    max_in_flight: int = 8

    def __post_init__(self) -> None:
        if self.visits < 1:
            raise ValueError("visits must be >= 1")
        if self.max_in_flight < 1:
            raise ValueError("max_in_flight must be >= 1")
        if isinstance(self.command, str):
            self.command = shlex.split(self.command)

    def describe(self) -> dict:
        return {"command": list(self.command), "visits": self.visits,
                "rules": self.rules}


@dataclass(frozen=True)
class PositionEval:
    score_mean: float
    win_rate: float
    visits_used: int
    side_to_move: Color

    def __post_init__(self) -> None:
        if not 0.0 <= self.win_rate <= 1.0:
            raise ValueError(f"win_rate {self.win_rate} outside [0, 1]")
        if self.visits_used < 1:
            raise ValueError("visits_used must be >= 1")


def normalize_to_black(raw_score: float, perspective: Perspective,
                       side_to_move: Color) -> float:
    """Map an engine-reported score to the black-positive convention."""
    if perspective is Perspective.BLACK:
        return raw_score
    if perspective is Perspective.WHITE:
        return -raw_score
    return raw_score if side_to_move is Color.BLACK else -raw_score


def normalize_winrate_to_black(raw: float, perspective: Perspective,
                               side_to_move: Color) -> float:
    if perspective is Perspective.BLACK:
        return raw
    if perspective is Perspective.WHITE:
        return 1.0 - raw
    return raw if side_to_move is Color.BLACK else 1.0 - raw


def side_to_move_for(moves: Sequence[Move],
                     initial_stones: Sequence[Point] = (),
                     initial_player: Optional[Color] = None) -> Color:
    if moves:
        return moves[-1].color.opponent
    if initial_player is not None:
        return initial_player
    return Color.WHITE if initial_stones else Color.BLACK


def evaluate(engine, moves: Sequence[Move], komi: float, board_size: int,
             visits: Optional[int] = None,
             initial_stones: Sequence[Point] = (),
             initial_player: Optional[Color] = None) -> PositionEval:
    """One engine query for the position after `moves`."""
    return engine.evaluate(moves, komi=komi, board_size=board_size,
                           visits=visits, initial_stones=initial_stones,
                           initial_player=initial_player)


def with_injected_pass(moves: Sequence[Move],
                       initial_stones: Sequence[Point] = (),
                       initial_player: Optional[Color] = None) -> list[Move]:
    """The move list with an explicit pass appended for the side to move."""
    mover = side_to_move_for(moves, initial_stones, initial_player)
    return list(moves) + [Move(mover, None)]


def evaluate_with_pass(engine, moves: Sequence[Move], komi: float,
                       board_size: int, visits: Optional[int] = None,
                       initial_stones: Sequence[Point] = (),
                       initial_player: Optional[Color] = None) -> PositionEval:
    """Evaluate the position with an explicit pass appended for the mover.

    The pass goes into the move sequence rather than flipping the turn
    directly, so engines that track position history see a legal game.
    """
    passed = with_injected_pass(moves, initial_stones, initial_player)
    return engine.evaluate(passed, komi=komi, board_size=board_size,
                           visits=visits, initial_stones=initial_stones,
                           initial_player=initial_player)


# ---------------------------------------------------------------------------
# Vertex encoding ("Q16" style; the letter I is skipped)

_VERTEX_LETTERS = "ABCDEFGHJKLMNOPQRSTUVWXYZ"


def point_to_vertex(point: Optional[Point], board_size: int) -> str:
    if point is None:
        return "pass"
    col, row = point
    return f"{_VERTEX_LETTERS[col - 1]}{board_size + 1 - row}"


def vertex_to_point(vertex: str, board_size: int) -> Optional[Point]:
    v = vertex.strip().upper()
    if v == "PASS":
        return None
    col = _VERTEX_LETTERS.find(v[0]) + 1
    if col == 0:
        raise ValueError(f"bad vertex {vertex!r}")
    try:
        display_row = int(v[1:])
    except ValueError:
        raise ValueError(f"bad vertex {vertex!r}") from None
    point = (col, board_size + 1 - display_row)
    if not (1 <= point[0] <= board_size and 1 <= point[1] <= board_size):
        raise ValueError(f"vertex {vertex!r} outside board")
    return point


def moves_to_wire(moves: Sequence[Move], board_size: int) -> list[list[str]]:
    return [[m.color.value.lower(), point_to_vertex(m.point, board_size)]
            for m in moves]


# ---------------------------------------------------------------------------
# Subprocess client

class _Pending:
    __slots__ = ("line", "side_to_move", "event", "result", "error")

    def __init__(self, line: str, side_to_move: Color):
        self.line = line
        self.side_to_move = side_to_move
        self.event = threading.Event()
        self.result: Optional[PositionEval] = None
        self.error: Optional[Exception] = None


class EvalHandle:
    """Outstanding query; `wait()` blocks for the engine's verdict."""

    def __init__(self, client: "AnalysisEngineClient", qid: str,
                 pending: _Pending):
        self._client = client
        self._qid = qid
        self._pending = pending

    def wait(self, timeout: Optional[float] = None) -> PositionEval:
        timeout = timeout if timeout is not None else self._client.config.timeout
        if not self._pending.event.wait(timeout):
            self._client._abandon(self._qid)
            raise QueryTimeout(
                f"no response for query {self._qid} within {timeout}s")
        if self._pending.error is not None:
            raise self._pending.error
        return self._pending.result


class AnalysisEngineClient:
    """Threaded stdio client; safe to call from multiple threads."""

    def __init__(self, config: EngineConfig,
                 stderr_path: Optional[str] = None):
        self.config = config
        self.query_count = 0
        self._proc: Optional[subprocess.Popen] = None
        self._pending: dict[str, _Pending] = {}
        self._lock = threading.Lock()
        self._write_lock = threading.Lock()
        self._slots = threading.BoundedSemaphore(config.max_in_flight)
        self._id_counter = 0
        self._restarts_left = 1
        self._closing = False
        self._dead: Optional[Exception] = None
        if stderr_path is None:
            self._stderr_file = tempfile.NamedTemporaryFile(
                prefix="copan-engine-", suffix=".log", delete=False)
            self.stderr_path = self._stderr_file.name
        else:
            self._stderr_file = open(stderr_path, "ab")
            self.stderr_path = stderr_path

    # -- lifecycle ----------------------------------------------------------

    def start(self) -> "AnalysisEngineClient":
        self._proc = subprocess.Popen(
            list(self.config.command),
            stdin=subprocess.PIPE,
            stdout=subprocess.PIPE,
            stderr=self._stderr_file,
        )
        threading.Thread(target=self._read_loop, args=(self._proc,),
                         daemon=True).start()
        return self

    def close(self) -> None:
        with self._lock:
            self._closing = True
            proc = self._proc
        if proc is not None:
            try:
                proc.stdin.close()
            except OSError:
                pass
            try:
                proc.wait(timeout=5)
            except subprocess.TimeoutExpired:
                proc.kill()
                proc.wait()
        self._fail_all(EngineCrashed("engine client closed"))
        try:
            self._stderr_file.close()
        except OSError:
            pass

    def __enter__(self) -> "AnalysisEngineClient":
        return self.start()

    def __exit__(self, *exc) -> None:
        self.close()

    # -- queries ------------------------------------------------------------

    def submit(self, moves: Sequence[Move], komi: float, board_size: int,
               visits: Optional[int] = None,
               initial_stones: Sequence[Point] = (),
               initial_player: Optional[Color] = None) -> EvalHandle:
        """Send a query without waiting; blocks only on the in-flight cap."""
        if self._proc is None:
            raise EngineError("client not started")
        visits = visits or self.config.visits
        side = side_to_move_for(moves, initial_stones, initial_player)
        qid = self._next_id()
        query = {
            "id": qid,
            "moves": moves_to_wire(moves, board_size),
            "initialStones": [["b", point_to_vertex(p, board_size)]
                              for p in initial_stones],
            "rules": self.config.rules,
            "komi": komi,
            "boardXSize": board_size,
            "boardYSize": board_size,
            "maxVisits": visits,
        }
        if initial_player is not None:
            query["initialPlayer"] = initial_player.value.lower()
        pending = _Pending(line=json.dumps(query) + "\n", side_to_move=side)
        self._slots.acquire()
        with self._lock:
            if self._dead is not None:
                self._slots.release()
                raise type(self._dead)(str(self._dead))
            self._pending[qid] = pending
            self.query_count += 1
        self._send(pending.line)
        return EvalHandle(self, qid, pending)

    def evaluate(self, moves: Sequence[Move], komi: float, board_size: int,
                 visits: Optional[int] = None,
                 initial_stones: Sequence[Point] = (),
                 initial_player: Optional[Color] = None) -> PositionEval:
        return self.submit(moves, komi, board_size, visits,
                           initial_stones, initial_player).wait()

    def _next_id(self) -> str:
        with self._lock:
            self._id_counter += 1
            return f"q{self._id_counter}"

    def _send(self, line: str) -> None:
        with self._write_lock:
            proc = self._proc
            try:
                proc.stdin.write(line.encode())
                proc.stdin.flush()
            except (OSError, ValueError, AttributeError):
                # The reader notices the dead process and either replays the
                # pending entry after a restart or fails it.
                pass

    def _abandon(self, qid: str) -> None:
        with self._lock:
            dropped = self._pending.pop(qid, None)
        if dropped is not None:
            self._slots.release()

    # -- response handling ----------------------------------------------------

    def _read_loop(self, proc: subprocess.Popen) -> None:
        for raw in proc.stdout:
            line = raw.decode(errors="replace").strip()
            if not line:
                continue
            self._handle_line(line)
        # EOF: engine exited (or we are shutting down).
        if self._proc is not proc:
            return
        with self._lock:
            closing = self._closing
            restart = (not closing and self._pending
                       and self._restarts_left > 0)
            if restart:
                self._restarts_left -= 1
        if closing:
            return
        if restart:
            self._restart_and_replay()
        else:
            self._fail_all(EngineCrashed(
                f"engine process exited (code {proc.poll()})"))

    def _handle_line(self, line: str) -> None:
        try:
            payload = json.loads(line)
        except json.JSONDecodeError:
            return  # non-protocol chatter; queries will time out if real
        if not isinstance(payload, dict):
            return
        qid = payload.get("id")
        if qid is None:
            return
        with self._lock:
            pending = self._pending.pop(qid, None)
        if pending is None:
            return  # late reply for a timed-out query
        if "error" in payload:
            message = str(payload["error"])
            if payload.get("kind") == "missing_fixture":
                pending.error = MissingFixture(message)
            else:
                pending.error = EngineRejectedQuery(message)
        else:
            try:
                pending.result = self._parse_eval(payload, pending.side_to_move)
            except ProtocolError as exc:
                pending.error = exc
        self._slots.release()
        pending.event.set()

    def _parse_eval(self, payload: dict, side: Color) -> PositionEval:
        root = payload.get("rootInfo")
        if not isinstance(root, dict) or "scoreLead" not in root \
                or "winrate" not in root:
            raise ProtocolError(f"response missing rootInfo: {payload}")
        perspective = self.config.reporting_perspective
        return PositionEval(
            score_mean=normalize_to_black(float(root["scoreLead"]),
                                          perspective, side),
            win_rate=normalize_winrate_to_black(float(root["winrate"]),
                                                perspective, side),
            visits_used=int(root.get("visits", 1)),
            side_to_move=side,
        )

    def _restart_and_replay(self) -> None:
        # The write lock freezes concurrent submitters while the process is
        # swapped, so every pending line lands on exactly one live process.
        with self._write_lock:
            with self._lock:
                replay = list(self._pending.values())
            new_proc = subprocess.Popen(
                list(self.config.command),
                stdin=subprocess.PIPE,
                stdout=subprocess.PIPE,
                stderr=self._stderr_file,
            )
            self._proc = new_proc
            threading.Thread(target=self._read_loop, args=(new_proc,),
                             daemon=True).start()
            for pending in replay:
                try:
                    new_proc.stdin.write(pending.line.encode())
                    new_proc.stdin.flush()
                except OSError:
                    break
        return

    def _fail_all(self, exc: Exception) -> None:
        # Marking the client dead and draining happen under one lock, so a
        # racing submit either raises immediately or is drained here.
        with self._lock:
            self._dead = exc
            pending = list(self._pending.values())
            self._pending.clear()
        for p in pending:
            p.error = exc
            self._slots.release()
            p.event.set()
