import pytest
from fastapi.testclient import TestClient

from copan.engine import EngineConfig
from copan.fixtures import generate_record
from copan.mocks import MockModel, NegamaxEngine
from copan.service import create_app
from copan.sgf import serialize_sgf


@pytest.fixture
def client():
    config = EngineConfig(command=["unused-in-tests"], visits=8)
    app = create_app(config, engine_factory=lambda: NegamaxEngine(MockModel()))
    with TestClient(app) as tc:
        yield tc


def upload(client, move_count=24, seed=51) -> str:
    record = generate_record(seed=seed, move_count=move_count)
    response = client.post("/games", content=serialize_sgf(record))
    assert response.status_code == 200
    return response.json()["id"]


def test_post_then_analysis(client):
    game_id = upload(client, move_count=24)
    doc = client.get(f"/games/{game_id}/analysis").json()
    assert len(doc["points"]) == 24
    assert doc["points"][0]["cost"] == pytest.approx(12.0, abs=1e-9)
    assert doc["visits"] == 8


def test_features_endpoint(client):
    game_id = upload(client, move_count=30)
    doc = client.get(f"/games/{game_id}/features").json()
    assert doc["baseline"]["slope"] == pytest.approx(-0.05, abs=1e-6)
    assert doc["segments"] == []
    assert len(doc["sente"]) == 30


def test_chart_endpoint(client):
    game_id = upload(client, move_count=30)
    doc = client.get(f"/games/{game_id}/chart").json()
    marks = next(l for l in doc["layer"] if l.get("name") == "cost-marks")
    assert len(marks["data"]["values"]) == 30


def test_quality_endpoint(client):
    game_id = upload(client, move_count=30)
    doc = client.get(f"/games/{game_id}/quality").json()
    assert doc["moveCount"] == 30
    assert doc["players"][0]["color"] == "black"


def test_unknown_game_is_404(client):
    assert client.get("/games/nope/analysis").status_code == 404


def test_bad_sgf_is_400(client):
    assert client.post("/games", content="not sgf").status_code == 400


def test_live_websocket_updates(client):
    with client.websocket_connect("/live") as ws:
        ws.send_json({"move": {"color": "black", "vertex": "Q16"}})
        first = ws.receive_json()
        assert first["index"] == 1
        assert first["cost"] == pytest.approx(11.95, abs=1e-9)
        assert first["dangerLevel"] in (0, 1, 2, 3)
        assert isinstance(first["sente"], bool)
        assert set(first) == {"index", "cost", "dangerLevel", "sente"}

        ws.send_json({"move": {"color": "white", "vertex": "D4"}})
        second = ws.receive_json()
        assert second["index"] == 2
        assert second["cost"] == pytest.approx(11.90, abs=1e-9)


def test_live_replay_reaches_same_state(client):
    moves = [{"color": "black", "vertex": "Q16"},
             {"color": "white", "vertex": "D4"},
             {"color": "black", "vertex": "C16"}]
    with client.websocket_connect("/live") as ws:
        for m in moves:
            ws.send_json({"move": m})
            final = ws.receive_json()
    # Reconnect and replay the same moves: the last update must match.
    with client.websocket_connect("/live") as ws:
        for m in moves:
            ws.send_json({"move": m})
            replayed = ws.receive_json()
    assert replayed == final


def test_live_danger_has_no_board_location(client):
    with client.websocket_connect("/live") as ws:
        ws.send_json({"move": {"color": "black", "vertex": "Q16"}})
        update = ws.receive_json()
    text = str(update)
    assert "vertex" not in text and "Q16" not in text


def test_live_bad_move_reports_error(client):
    with client.websocket_connect("/live") as ws:
        ws.send_json({"move": {"color": "black", "vertex": "Z99"}})
        update = ws.receive_json()
        assert "error" in update
        # The session keeps working afterwards.
        ws.send_json({"move": {"color": "black", "vertex": "Q16"}})
        assert ws.receive_json()["index"] == 1


def test_static_bundle_served_when_built():
    import pathlib

    dist = pathlib.Path(__file__).resolve().parents[1] / "frontend" / "dist"
    if not (dist / "index.html").exists():
        pytest.skip("frontend bundle not built")
    config = EngineConfig(command=["unused-in-tests"], visits=8)
    app = create_app(config, static_dir=str(dist),
                     engine_factory=lambda: NegamaxEngine(MockModel()))
    with TestClient(app) as tc:
        page = tc.get("/")
        assert page.status_code == 200
        assert "cost of passing" in page.text
        # API routes still win over the static mount.
        assert tc.get("/games/nope/analysis").status_code == 404
