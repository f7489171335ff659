"""Regenerate the bundled stand-in game records (deterministic)."""

import pathlib
import sys

sys.path.insert(0, str(pathlib.Path(__file__).resolve().parents[1] / "src"))

from copan.fixtures import generate_record  # noqa: E402
from copan.sgf import serialize_sgf  # noqa: E402

DATA = pathlib.Path(__file__).resolve().parents[1] / "src" / "copan" / "data"

GAMES = {
    "antti-shuto-2022.sgf": generate_record(
        seed=20220314, move_count=216, komi=6.5, rules="japanese",
        metadata={
            "PB": "Antti Törmänen",
            "BR": "1p",
            "PW": "Shuto Shun",
            "WR": "8p",
            "DT": "2022-03-14",
            "RE": "W+2.5",
            "GC": "synthetic stand-in record (same length and header as "
                  "the original game)",
        }),
    "40b-vs-60b-selfplay.sgf": generate_record(
        seed=20220810, move_count=307, komi=7.5, rules="chinese",
        metadata={
            "PB": "kata1-b40c256-s11101799168-d2715431527",
            "PW": "kata1-b60c320-s6321537280-d2951683615",
            "DT": "2022-08-10",
            "AP": "KataGo v1.11.0 self-play",
            "GC": "synthetic stand-in record (same length and header as "
                  "the original game)",
        }),
}


def main() -> None:
    DATA.mkdir(parents=True, exist_ok=True)
    for filename, record in GAMES.items():
        path = DATA / filename
        path.write_text(serialize_sgf(record) + "\n", encoding="utf-8")
        print(f"wrote {path} ({len(record.moves)} moves)")


if __name__ == "__main__":
    main()
