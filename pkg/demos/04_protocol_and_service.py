"""The wire: a standalone engine subprocess, then the HTTP/WS service.

The mock engines speak the same line-delimited JSON protocol as the
KataGo analysis engine, so the client code here is exactly what a real
engine sees. `--swap-pairs` makes the mock answer out of order to show
the id-based matching at work.
"""

import shlex
import sys

from fastapi.testclient import TestClient

from copan import AnalysisEngineClient, EngineConfig, compute_series
from copan.fixtures import generate_record
from copan.service import create_app
from copan.sgf import serialize_sgf

mock_cmd = f"{shlex.quote(sys.executable)} -m copan mock-engine"

print("=== Driving a subprocess engine (out-of-order responses) ===")
record = generate_record(seed=1, move_count=12)
config = EngineConfig(command=f"{mock_cmd} --swap-pairs", visits=16,
                      max_in_flight=4)
with AnalysisEngineClient(config) as client:
    series = compute_series(record, client, visits=16)
print(f"issued {client.query_count} queries; responses arrived pairwise "
      f"swapped and were re-matched by id")
print("first costs:", [round(p.cost, 2) for p in series.points[:6]])

print()
print("=== The analysis service ===")
app = create_app(EngineConfig(command=mock_cmd, visits=16))
with TestClient(app) as http:
    game_id = http.post("/games",
                        content=serialize_sgf(record)).json()["id"]
    analysis = http.get(f"/games/{game_id}/analysis").json()
    features = http.get(f"/games/{game_id}/features").json()
    print(f"POST /games -> id {game_id}")
    print(f"GET /games/{game_id}/analysis -> {len(analysis['points'])} points")
    print(f"GET /games/{game_id}/features -> baseline slope "
          f"{features['baseline']['slope']:+.3f}")

    print()
    print("=== Live play over WebSocket ===")
    with http.websocket_connect("/live") as ws:
        for color, vertex in [("black", "Q16"), ("white", "D4"),
                              ("black", "Q3")]:
            ws.send_json({"move": {"color": color, "vertex": vertex}})
            update = ws.receive_json()
            print(f"  {color} {vertex}: cost {update['cost']:.2f}, "
                  f"danger level {update['dangerLevel']}, "
                  f"sente={update['sente']}")
print()
print("Run it for real:  copan serve --port 8000 --engine-cmd "
      f"'{mock_cmd}' --visits 16")
