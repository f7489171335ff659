"""Cost-of-passing series computation.

For every analyzed position the engine is asked twice: once for the
position itself and once with an explicit pass appended for the side to
move. The signed difference of the two score means is the cost of
passing; the signed change across an actually played move is its effect.
A content-addressed cache absorbs the doubled evaluation cost across
reruns and makes the pass-injected twin of a played pass free.
"""

from __future__ import annotations

import hashlib
import threading
from dataclasses import dataclass, field
from typing import Optional, Sequence

from .engine import PositionEval
from .sgf import Color, GameRecord, Move, Point, position_prefix


def cost_of_passing(mu_before: float, mu_after_pass: float,
                    side_to_move: Color) -> float:
    """Mover-perspective price of skipping a turn; may be slightly negative."""
    return side_to_move.sign * (mu_before - mu_after_pass)


def effect(mu_prev: float, mu_next: float, mover: Color) -> float:
    """Mover-perspective score swing of an actual move (<= 0 for mistakes)."""
    return mover.sign * (mu_next - mu_prev)


def realized_value(cost: float, move_effect: float) -> float:
    """How much of the turn's value the move banked: cost + effect.

    A perfect move realizes the full cost, a pass realizes 0, a move worse
    than passing realizes a negative value. Unclamped.
    """
    return cost + move_effect


@dataclass(frozen=True)
class CopPoint:
    index: int
    side_to_move: Color
    score_mean_before: float
    score_mean_after_pass: float
    cost: float
    win_rate: float


@dataclass
class CopSeries:
    points: list[CopPoint]
    effects: list[Optional[float]]
    pass_flags: list[bool] = field(default_factory=list)
    game_ref: dict = field(default_factory=dict)
    engine_ref: dict = field(default_factory=dict)

    def __post_init__(self) -> None:
        if not self.pass_flags:
            self.pass_flags = [False] * len(self.effects)

    @property
    def move_count(self) -> int:
        return len(self.effects)

    def costs(self) -> list[float]:
        return [p.cost for p in self.points]

    def indices(self) -> list[int]:
        return [p.index for p in self.points]

    def point_at(self, index: int) -> CopPoint:
        for p in self.points:
            if p.index == index:
                return p
        raise KeyError(f"no point for index {index}")


class EvalCache:
    """Thread-safe map from canonical position keys to engine verdicts."""

    def __init__(self) -> None:
        self._store: dict[str, PositionEval] = {}
        self._lock = threading.Lock()
        self.hits = 0
        self.misses = 0

    @staticmethod
    def key(board_size: int, rules: str, komi: float, moves: Sequence[Move],
            visits: int, initial_stones: Sequence[Point] = (),
            initial_player: Optional[Color] = None) -> str:
        text = "|".join([
            str(board_size),
            rules,
            repr(float(komi)),
            ",".join(f"{p[0]}.{p[1]}" for p in initial_stones),
            "" if initial_player is None else initial_player.value,
            ",".join(
                f"{m.color.value}{'' if m.is_pass else m.point}"
                for m in moves
            ),
            str(visits),
        ])
        return hashlib.sha256(text.encode()).hexdigest()

    def get(self, key: str) -> Optional[PositionEval]:
        with self._lock:
            found = self._store.get(key)
            if found is None:
                self.misses += 1
            else:
                self.hits += 1
            return found

    def put(self, key: str, value: PositionEval) -> None:
        with self._lock:
            self._store[key] = value

    def __len__(self) -> int:
        return len(self._store)


def _annotated(exc: Exception, index: int) -> Exception:
    return type(exc)(f"index {index}: {exc}")


def compute_series(record: GameRecord, engine, visits: Optional[int] = None,
                   include_terminal: bool = False,
                   cache: Optional[EvalCache] = None) -> CopSeries:
    """Cost-of-passing points for positions 0..N-1 (plus N when asked).

    Issues the position query and its pass-injected twin for every index,
    deduplicating through `cache` and through an in-run pending table, so a
    deterministic engine sees each distinct position exactly once. Engine
    failures are re-raised annotated with the failing index.
    """
    if visits is None:
        config = getattr(engine, "config", None)
        visits = config.visits if config is not None else 1
    moves = record.moves
    n = len(moves)
    initial = record.handicap_stones
    # The game's true first mover disambiguates the empty prefix for the
    # engine (mirrored records start with white despite empty handicap).
    initial_player = record.side_to_move_at(0)
    position_count = n + 1 if include_terminal else n
    rules = record.rules
    size = record.board_size
    komi = record.komi

    def cache_key(move_list: Sequence[Move]) -> str:
        return EvalCache.key(size, rules, komi, move_list, visits, initial,
                             initial_player)

    # (key, move list) per query, in submission order; a key appears once.
    wanted: list[tuple[str, list[Move]]] = []
    first_index: dict[str, int] = {}
    keys_before: list[str] = []
    keys_pass: list[str] = []
    for i in range(position_count):
        prefix = position_prefix(record, i)
        passed = prefix + [Move(record.side_to_move_at(i), None)]
        kb, kp = cache_key(prefix), cache_key(passed)
        keys_before.append(kb)
        keys_pass.append(kp)
        for key, move_list in ((kb, prefix), (kp, passed)):
            if key not in first_index:
                first_index[key] = i
                wanted.append((key, move_list))

    results: dict[str, PositionEval] = {}
    if hasattr(engine, "submit"):
        handles: dict[str, object] = {}
        for key, move_list in wanted:
            found = cache.get(key) if cache is not None else None
            if found is not None:
                results[key] = found
                continue
            try:
                handles[key] = engine.submit(
                    move_list, komi=komi, board_size=size, visits=visits,
                    initial_stones=initial, initial_player=initial_player)
            except Exception as exc:
                raise _annotated(exc, first_index[key]) from exc
        for i in range(position_count):
            for key in (keys_before[i], keys_pass[i]):
                handle = handles.pop(key, None)
                if handle is None:
                    continue
                try:
                    results[key] = handle.wait()
                except Exception as exc:
                    raise _annotated(exc, i) from exc
                if cache is not None:
                    cache.put(key, results[key])
    else:
        for key, move_list in wanted:
            found = cache.get(key) if cache is not None else None
            if found is not None:
                results[key] = found
                continue
            index = first_index[key]
            try:
                results[key] = engine.evaluate(
                    move_list, komi=komi, board_size=size, visits=visits,
                    initial_stones=initial, initial_player=initial_player)
            except Exception as exc:
                raise _annotated(exc, index) from exc
            if cache is not None:
                cache.put(key, results[key])

    points = []
    for i in range(position_count):
        side = record.side_to_move_at(i)
        before = results[keys_before[i]]
        after_pass = results[keys_pass[i]]
        points.append(CopPoint(
            index=i,
            side_to_move=side,
            score_mean_before=before.score_mean,
            score_mean_after_pass=after_pass.score_mean,
            cost=cost_of_passing(before.score_mean, after_pass.score_mean,
                                 side),
            win_rate=before.win_rate,
        ))

    effects: list[Optional[float]] = []
    for k in range(1, n + 1):
        mover = moves[k - 1].color
        key_next = cache_key(position_prefix(record, k))
        if key_next in results:
            effects.append(effect(results[keys_before[k - 1]].score_mean,
                                  results[key_next].score_mean, mover))
        else:
            # Only possible for the final move when the terminal position
            # was not evaluated and the move was not a pass.
            effects.append(None)

    from .engine import moves_to_wire

    return CopSeries(
        points=points,
        effects=effects,
        pass_flags=[m.is_pass for m in moves],
        game_ref={
            "boardSize": size,
            "komi": komi,
            "rules": rules,
            "handicapStones": [list(p) for p in initial],
            "moveCount": n,
            "moves": moves_to_wire(moves, size),
            "metadata": dict(record.metadata),
        },
        engine_ref=_engine_ref(engine, visits),
    )


def _engine_ref(engine, visits: int) -> dict:
    config = getattr(engine, "config", None)
    if config is not None:
        ref = config.describe()
    else:
        ref = {"command": None, "rules": None,
               "kind": type(engine).__name__}
    ref["visits"] = visits
    return ref


def synthetic_series(costs: Sequence[float],
                     effects: Optional[Sequence[Optional[float]]] = None,
                     first_side: Color = Color.BLACK,
                     win_rate: float = 0.5,
                     pass_flags: Optional[Sequence[bool]] = None) -> CopSeries:
    """Series with prescribed costs/effects and self-consistent score means.

    Intended for tests and demos of the downstream feature and quality
    layers; score_mean_before is pinned at 0 and the pass value derived so
    the cost identity holds exactly.
    """
    points = []
    side = first_side
    for i, cost in enumerate(costs):
        points.append(CopPoint(
            index=i,
            side_to_move=side,
            score_mean_before=0.0,
            score_mean_after_pass=-side.sign * cost,
            cost=float(cost),
            win_rate=win_rate,
        ))
        side = side.opponent
    effect_list: list[Optional[float]]
    if effects is None:
        effect_list = [0.0] * len(points)
    else:
        effect_list = [None if e is None else float(e) for e in effects]
    return CopSeries(points=points, effects=effect_list,
                     pass_flags=list(pass_flags) if pass_flags else [],
                     game_ref={"boardSize": 19, "komi": 6.5,
                               "rules": "japanese", "handicapStones": [],
                               "moveCount": len(effect_list),
                               "metadata": {"synthetic": "true"}},
                     engine_ref={"command": None, "visits": 1,
                                 "kind": "synthetic"})
