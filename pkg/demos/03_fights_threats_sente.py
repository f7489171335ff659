"""How deviations from the baseline classify game situations.

Fights elevate the cost of passing for both players; a one-sided threat
sequence elevates it only on the defender's turns; the player back at the
baseline after a fight ends holds sente. Danger levels grade the same
residuals for a live indicator.
"""

from copan import (
    danger_level,
    detect_segments,
    fit_baseline,
    select_points_of_interest,
    sente_states,
    sente_value,
)
from copan.cop import synthetic_series
from copan.features import SenteKind

costs = [12 - 0.05 * i for i in range(216)]
for i in range(75, 89):
    costs[i] += 6.0          # both players entangled: a fight
for i in (130, 132, 134, 136):
    costs[i] += 6.0          # black alone must answer: threats
costs[180] += 9.0            # a lone forcing move
series = synthetic_series(costs)

fit = fit_baseline(series)
segments = detect_segments(series, fit)
print("=== Detected segments ===")
for s in segments:
    who = f", defender {s.defender.value}" if s.defender else ""
    print(f"  moves {s.start:>3}..{s.end:<3} {s.kind.value:<16} "
          f"peak +{s.peak:.1f}{who}")

print()
print("=== Sente around the fight ===")
states = {s.index: s for s in sente_states(series, fit)}
for i in range(86, 92):
    s = states[i]
    holder = series.points[i].side_to_move.value
    print(f"  position {i}: {holder} to move, "
          f"{'GOTE (must answer)' if s.state is SenteKind.GOTE else 'sente'}")

c_after = series.points[89].cost
print(f"holding sente at position 89 is worth about "
      f"{sente_value(c_after):.2f} points (half the cost of passing)")

print()
print("=== Danger meter (live indicator) ===")
for i in (20, 76, 136, 180, 200):
    d = danger_level(series.points[i].cost, fit, i)
    bar = "#" * (d.level + 1)
    print(f"  move {i:>3}: cost {series.points[i].cost:5.2f} "
          f"level {d.level} {bar}")
print("The meter shows only the level, never where the threat is;")
print("scanning the board for it is the player's training.")

print()
print("=== Points of interest, ranked ===")
for p in select_points_of_interest(segments, series, k=3):
    print(f"  [{p.start}..{p.end}] {p.kind} magnitude {p.magnitude:.1f}")
