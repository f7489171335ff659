"""SGF (FF[4]) parsing and serialization for the analysis pipeline.

Only the main line of the first game tree is modeled: board size, komi,
rules, handicap stones, the move sequence, and string metadata. Variations
are skipped, and rules-level legality (ko, suicide) is left to the engine;
this module only rejects moves that fall off the board or land on an
occupied intersection.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Iterator, Optional


class SgfError(Exception):
    pass


class MalformedSgf(SgfError):
    pass


class OffBoardMove(SgfError):
    pass


class OccupiedPoint(SgfError):
    pass


class UnsupportedSize(SgfError):
    pass


class IndexOutOfRange(SgfError):
    pass


class Color(Enum):
    BLACK = "B"
    WHITE = "W"

    @property
    def opponent(self) -> "Color":
        return Color.WHITE if self is Color.BLACK else Color.BLACK

    @property
    def sign(self) -> int:
        """+1 for black, -1 for white; the score-mean sign convention."""
        return 1 if self is Color.BLACK else -1


# Point = (column, row), both 1-based; column 1 is SGF 'a', row counts
# from the top edge as in SGF. None encodes a pass.
Point = tuple[int, int]


@dataclass(frozen=True)
class Move:
    color: Color
    point: Optional[Point]

    @property
    def is_pass(self) -> bool:
        return self.point is None


@dataclass
class GameRecord:
    board_size: int = 19
    komi: float = 6.5
    rules: str = "japanese"
    handicap_stones: list[Point] = field(default_factory=list)
    moves: list[Move] = field(default_factory=list)
    metadata: dict[str, str] = field(default_factory=dict)

    def first_mover(self) -> Color:
        """Black opens, unless handicap stones put white on the move."""
        return Color.WHITE if self.handicap_stones else Color.BLACK

    def side_to_move_at(self, index: int) -> Color:
        """Side to move at the position reached after `index` moves."""
        if index < len(self.moves):
            return self.moves[index].color
        if self.moves:
            return self.moves[-1].color.opponent
        return self.first_mover()


def position_prefix(record: GameRecord, i: int) -> list[Move]:
    """First `i` moves of the record; i = 0 is the initial position."""
    if i < 0 or i > len(record.moves):
        raise IndexOutOfRange(
            f"prefix length {i} outside [0, {len(record.moves)}]"
        )
    return list(record.moves[:i])


# ---------------------------------------------------------------------------
# Coordinates

def sgf_to_point(value: str, board_size: int) -> Optional[Point]:
    """Decode an SGF move value; '' (and 'tt' on sizes <= 19) is a pass."""
    if value == "":
        return None
    if value == "tt" and board_size <= 19:
        return None
    if len(value) != 2 or not value.isalpha() or not value.islower():
        raise MalformedSgf(f"bad coordinate value {value!r}")
    col = ord(value[0]) - ord("a") + 1
    row = ord(value[1]) - ord("a") + 1
    return (col, row)


def point_to_sgf(point: Optional[Point]) -> str:
    if point is None:
        return ""
    col, row = point
    return chr(ord("a") + col - 1) + chr(ord("a") + row - 1)


# ---------------------------------------------------------------------------
# Occupancy tracking (captures included, so replay on a captured point is
# accepted; suicide and ko stay the engine's business)

class _Board:
    def __init__(self, size: int):
        self.size = size
        self.grid: dict[Point, Color] = {}

    def _neighbors(self, p: Point) -> Iterator[Point]:
        col, row = p
        if col > 1:
            yield (col - 1, row)
        if col < self.size:
            yield (col + 1, row)
        if row > 1:
            yield (col, row - 1)
        if row < self.size:
            yield (col, row + 1)

    def _group_has_liberty(self, start: Point) -> tuple[bool, set[Point]]:
        color = self.grid[start]
        group = {start}
        frontier = [start]
        while frontier:
            p = frontier.pop()
            for n in self._neighbors(p):
                occupant = self.grid.get(n)
                if occupant is None:
                    return True, group
                if occupant is color and n not in group:
                    group.add(n)
                    frontier.append(n)
        return False, group

    def place(self, point: Point, color: Color) -> None:
        col, row = point
        if not (1 <= col <= self.size and 1 <= row <= self.size):
            raise OffBoardMove(f"point {point} outside {self.size}x{self.size}")
        if point in self.grid:
            raise OccupiedPoint(f"point {point} already occupied")
        self.grid[point] = color
        # Remove captured opponent groups, then a liberty-less own group
        # (suicide is not an error here).
        for n in list(self._neighbors(point)):
            if self.grid.get(n) is color.opponent:
                alive, group = self._group_has_liberty(n)
                if not alive:
                    for p in group:
                        del self.grid[p]
        if point in self.grid:
            alive, group = self._group_has_liberty(point)
            if not alive:
                for p in group:
                    del self.grid[p]


def validate_moves(record: GameRecord, lenient: bool = False) -> None:
    """Check on-board placement, occupancy, and color alternation.

    Occupancy is checked move by move before alternation, so a replay on a
    taken point reports OccupiedPoint even when colors also fail to
    alternate. `lenient` waives the alternation check only.
    """
    board = _Board(record.board_size)
    for stone in record.handicap_stones:
        board.place(stone, Color.BLACK)
    expected = record.first_mover()
    for k, move in enumerate(record.moves):
        if not move.is_pass:
            board.place(move.point, move.color)
        if move.color is not expected and not lenient:
            raise MalformedSgf(
                f"move {k + 1} is {move.color.value} where "
                f"{expected.value} was expected (consecutive same-color "
                f"moves need lenient=True)"
            )
        expected = move.color.opponent


# ---------------------------------------------------------------------------
# Parsing

Node = dict[str, list[str]]

# Root properties with dedicated fields; everything else in the root node
# lands in metadata.
_HANDLED_ROOT_PROPS = {"GM", "FF", "SZ", "KM", "RU", "AB", "HA", "CA"}


class _Reader:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def skip_ws(self) -> None:
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self) -> str:
        self.skip_ws()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def take(self) -> str:
        ch = self.peek()
        self.pos += 1
        return ch

    def read_ident(self) -> str:
        self.skip_ws()
        start = self.pos
        while self.pos < len(self.text) and self.text[self.pos].isalpha():
            self.pos += 1
        if self.pos == start:
            raise MalformedSgf(
                f"expected property identifier at offset {self.pos}"
            )
        return self.text[start:self.pos].upper()

    def read_value(self) -> str:
        """Read one [..] value with backslash escapes; '[' not yet consumed."""
        if self.take() != "[":
            raise MalformedSgf("expected '['")
        out = []
        while True:
            if self.pos >= len(self.text):
                raise MalformedSgf("unterminated property value")
            ch = self.text[self.pos]
            self.pos += 1
            if ch == "\\":
                if self.pos >= len(self.text):
                    raise MalformedSgf("dangling escape in property value")
                out.append(self.text[self.pos])
                self.pos += 1
            elif ch == "]":
                return "".join(out)
            else:
                out.append(ch)


def _parse_node(r: _Reader) -> Node:
    """Parse properties after a ';' until the next ';', '(' or ')'."""
    node: Node = {}
    while True:
        ch = r.peek()
        if ch in (";", "(", ")", ""):
            return node
        ident = r.read_ident()
        if r.peek() != "[":
            raise MalformedSgf(f"property {ident} has no value")
        values = []
        while r.peek() == "[":
            values.append(r.read_value())
        node.setdefault(ident, []).extend(values)


def _parse_tree(r: _Reader) -> list[Node]:
    """Parse one game tree, returning its main-line nodes.

    The main line is the node sequence plus the main line of the first
    child tree; sibling trees are consumed and dropped.
    """
    if r.take() != "(":
        raise MalformedSgf("expected '('")
    nodes: list[Node] = []
    while r.peek() == ";":
        r.take()
        nodes.append(_parse_node(r))
    if not nodes:
        raise MalformedSgf("game tree has no nodes")
    first_child = True
    while r.peek() == "(":
        subtree = _parse_tree(r)
        if first_child:
            nodes.extend(subtree)
            first_child = False
    if r.take() != ")":
        raise MalformedSgf("unbalanced parentheses")
    return nodes


def _main_line(text: str) -> list[Node]:
    r = _Reader(text)
    if r.peek() != "(":
        raise MalformedSgf("no game tree found")
    nodes = _parse_tree(r)
    # Trailing content (further games in a collection, junk) is ignored.
    return nodes


def parse_sgf(text: str, lenient: bool = False) -> GameRecord:
    """Parse the main line of the first game in `text` into a GameRecord."""
    nodes = _main_line(text)
    root = nodes[0]

    if "GM" in root and root["GM"][0].strip() not in ("", "1"):
        raise MalformedSgf(f"not a Go record (GM[{root['GM'][0]}])")

    size = 19
    if "SZ" in root:
        try:
            size = int(root["SZ"][0])
        except ValueError:
            raise MalformedSgf(f"bad board size {root['SZ'][0]!r}") from None
    if size < 5 or size > 19:
        raise UnsupportedSize(f"board size {size} outside 5..19")

    komi = 6.5
    if "KM" in root:
        try:
            komi = float(root["KM"][0])
        except ValueError:
            raise MalformedSgf(f"bad komi {root['KM'][0]!r}") from None

    rules = root["RU"][0].lower() if "RU" in root else "japanese"

    handicap: list[Point] = []
    for value in root.get("AB", []):
        if value == "":
            continue
        point = sgf_to_point(value, size)
        if point is None:
            raise MalformedSgf("pass value in AB")
        handicap.append(point)
    if "AW" in root:
        raise MalformedSgf("white setup stones (AW) are not supported")

    metadata = {
        ident: values[0]
        for ident, values in root.items()
        if ident not in _HANDLED_ROOT_PROPS and ident not in ("B", "W")
    }

    moves: list[Move] = []
    for node in nodes:
        has_b = "B" in node
        has_w = "W" in node
        if has_b and has_w:
            raise MalformedSgf("node plays both colors")
        if not has_b and not has_w:
            continue
        color = Color.BLACK if has_b else Color.WHITE
        moves.append(Move(color, sgf_to_point(node[color.value][0], size)))

    record = GameRecord(
        board_size=size,
        komi=komi,
        rules=rules,
        handicap_stones=handicap,
        moves=moves,
        metadata=metadata,
    )
    validate_moves(record, lenient=lenient)
    return record


# ---------------------------------------------------------------------------
# Serialization

def _escape(value: str) -> str:
    return value.replace("\\", "\\\\").replace("]", "\\]")


def serialize_sgf(record: GameRecord) -> str:
    """Canonical SGF text; parse_sgf(serialize_sgf(r)) == r on modeled fields."""
    komi = record.komi
    komi_text = str(int(komi)) if komi == int(komi) else repr(komi)
    parts = [f"(;GM[1]FF[4]CA[UTF-8]SZ[{record.board_size}]"
             f"KM[{komi_text}]RU[{_escape(record.rules)}]"]
    if record.handicap_stones:
        parts.append(f"HA[{len(record.handicap_stones)}]")
        parts.append(
            "AB" + "".join(f"[{point_to_sgf(p)}]" for p in record.handicap_stones)
        )
    for key in sorted(record.metadata):
        parts.append(f"{key}[{_escape(record.metadata[key])}]")
    for move in record.moves:
        parts.append(f";{move.color.value}[{point_to_sgf(move.point)}]")
    parts.append(")")
    return "".join(parts)
