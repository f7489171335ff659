"""What the cost of passing measures, on the deterministic mock engine.

The mock assigns move k of a game the value w(k) = 12 - 0.05*(k-1), so a
full game exhausts the board around move 240. Evaluating a position and
then the same position with an explicit pass injected prices the turn.
"""

from copan import (
    Color,
    MockModel,
    Move,
    NegamaxEngine,
    cost_of_passing,
    evaluate,
    evaluate_with_pass,
)
from copan.quality import handicap_value

engine = NegamaxEngine(MockModel())

print("=== The empty board ===")
before = evaluate(engine, [], komi=6.5, board_size=19)
print(f"score mean (black perspective): {before.score_mean:+.2f}")
print("A fair komi of 6.5 nearly cancels black's first-move advantage.")

after = evaluate_with_pass(engine, [], komi=6.5, board_size=19)
print(f"after a hypothetical black pass: {after.score_mean:+.2f}")

c0 = cost_of_passing(before.score_mean, after.score_mean, Color.BLACK)
print(f"cost of passing on the empty board: {c0:.2f} points")

print()
print("=== Handicap stones ===")
print("An extra black stone equals an extra white pass, so the same")
print(f"number prices a handicap stone: {handicap_value(engine):.2f} points")
print("(traditional folklore said ~10; engine-era measurements say ~12)")

print()
print("=== The descent ===")
moves = []
for i in range(6):
    moves.append(Move(Color.BLACK if i % 2 == 0 else Color.WHITE,
                      (4 + i, 4)))
print("position   side to move   cost of passing")
prefix = []
for i in range(6):
    b = evaluate(engine, prefix, komi=6.5, board_size=19)
    p = evaluate_with_pass(engine, prefix, komi=6.5, board_size=19)
    c = cost_of_passing(b.score_mean, p.score_mean, b.side_to_move)
    print(f"   s_{i}        {b.side_to_move.value}              {c:6.2f}")
    prefix.append(moves[i])
print("Each move spent lowers the price of the next one: the linear descent.")
