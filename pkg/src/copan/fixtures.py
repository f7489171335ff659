"""Bundled game records and a deterministic record generator.

Two reference games ship with the package for parser and pipeline tests:
`game1` (216 moves, a 2022 professional game setting) and `game2`
(307 moves, a self-play setting between two KataGo networks). The real
records are not redistributable here, so both are deterministic synthetic
stand-ins with matching metadata and lengths; their GC property says so.
"""

from __future__ import annotations

import random
from importlib import resources
from typing import Optional

from .sgf import Color, GameRecord, Move, Point, _Board, parse_sgf

_FIXTURE_FILES = {
    "game1": "antti-shuto-2022.sgf",
    "game2": "40b-vs-60b-selfplay.sgf",
}

_STAR_POINTS_19 = [(4, 4), (16, 16), (4, 16), (16, 4), (10, 10),
                   (4, 10), (16, 10), (10, 4), (10, 16)]


def fixture_names() -> list[str]:
    return sorted(_FIXTURE_FILES)


def fixture_text(name: str) -> str:
    try:
        filename = _FIXTURE_FILES[name]
    except KeyError:
        raise KeyError(f"unknown fixture {name!r}; "
                       f"have {sorted(_FIXTURE_FILES)}") from None
    return (resources.files("copan") / "data" / filename).read_text("utf-8")


def fixture_record(name: str) -> GameRecord:
    return parse_sgf(fixture_text(name))


def generate_record(seed: int, move_count: int = 120, board_size: int = 19,
                    komi: float = 6.5, rules: str = "japanese",
                    pass_prob: float = 0.0, handicap: int = 0,
                    metadata: Optional[dict[str, str]] = None) -> GameRecord:
    """Random coordinate-legal record: stones land on empty points only,
    captures free points up again, colors alternate strictly."""
    rng = random.Random(seed)
    stones: list[Point] = []
    if handicap:
        stones = _STAR_POINTS_19[:handicap] if board_size == 19 else [
            (2 + i, 2) for i in range(handicap)]
    board = _Board(board_size)
    for p in stones:
        board.place(p, Color.BLACK)

    moves: list[Move] = []
    color = Color.WHITE if stones else Color.BLACK
    while len(moves) < move_count:
        if pass_prob and rng.random() < pass_prob:
            moves.append(Move(color, None))
        else:
            empty = [
                (c, r)
                for c in range(1, board_size + 1)
                for r in range(1, board_size + 1)
                if (c, r) not in board.grid
            ]
            if not empty:
                moves.append(Move(color, None))
            else:
                point = empty[rng.randrange(len(empty))]
                board.place(point, color)
                moves.append(Move(color, point))
        color = color.opponent

    return GameRecord(
        board_size=board_size,
        komi=komi,
        rules=rules,
        handicap_stones=stones,
        moves=moves,
        metadata=dict(metadata or {}),
    )
