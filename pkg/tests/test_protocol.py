"""Subprocess protocol client: id matching, reordering, crash recovery."""

import json

import pytest

from conftest import mock_engine_cmd
from copan.engine import (
    AnalysisEngineClient,
    EngineConfig,
    EngineCrashed,
    EngineRejectedQuery,
    MissingFixture,
    Perspective,
    QueryTimeout,
)
from copan.sgf import Color, Move


def make_client(*extra, **kwargs) -> AnalysisEngineClient:
    config = EngineConfig(command=mock_engine_cmd(*extra),
                          visits=10,
                          timeout=kwargs.pop("timeout", 20.0),
                          max_in_flight=kwargs.pop("max_in_flight", 8),
                          **kwargs)
    return AnalysisEngineClient(config)


def stones(n: int) -> list[Move]:
    return [Move(Color.BLACK if i % 2 == 0 else Color.WHITE,
                 (1 + i % 19, 1 + i // 19)) for i in range(n)]


def test_basic_query_matches_in_process_model():
    with make_client() as client:
        ev = client.evaluate([], komi=6.5, board_size=19)
    assert ev.score_mean == pytest.approx(-0.5, abs=1e-9)
    assert ev.side_to_move is Color.BLACK
    assert ev.visits_used == 10


def test_side_to_move_reporting_normalized():
    # The mock reports side-to-move values by default; after one black
    # move the raw score is white-perspective and must come back flipped.
    with make_client() as client:
        mu0 = client.evaluate([], komi=6.5, board_size=19).score_mean
        mu1 = client.evaluate(stones(1), komi=6.5, board_size=19).score_mean
    assert mu1 == pytest.approx(mu0, abs=1e-9)  # optimal move, no change


def test_black_perspective_engine():
    with make_client("--perspective", "black",
                     reporting_perspective=Perspective.BLACK) as client:
        mu1 = client.evaluate(stones(1), komi=6.5, board_size=19).score_mean
    assert mu1 == pytest.approx(-0.5, abs=1e-9)


def test_out_of_order_responses_match_by_id():
    moves = stones(30)
    with make_client() as plain:
        expected = [plain.evaluate(moves[:i], komi=6.5, board_size=19)
                    for i in range(20)]
    with make_client("--swap-pairs", max_in_flight=4) as client:
        handles = [client.submit(moves[:i], komi=6.5, board_size=19)
                   for i in range(20)]
        got = [h.wait() for h in handles]
    assert got == expected


def test_delayed_responses_still_match():
    with make_client("--delay-ms", "20", max_in_flight=4) as client:
        handles = [client.submit(stones(i), komi=6.5, board_size=19)
                   for i in range(8)]
        got = [h.wait() for h in handles]
    with make_client() as plain:
        expected = [plain.evaluate(stones(i), komi=6.5, board_size=19)
                    for i in range(8)]
    assert got == expected


def test_crash_once_recovers_with_replay(tmp_path):
    marker = tmp_path / "crashed-once"
    with make_client("--crash-after", "5", "--crash-marker", str(marker),
                     max_in_flight=4) as client:
        results = [client.evaluate(stones(i), komi=6.5, board_size=19)
                   for i in range(12)]
    assert marker.exists()
    assert len(results) == 12
    with make_client() as plain:
        expected = [plain.evaluate(stones(i), komi=6.5, board_size=19)
                    for i in range(12)]
    assert results == expected


def test_persistent_crash_surfaces_engine_crashed():
    with make_client("--crash-after", "3", max_in_flight=2,
                     timeout=15.0) as client:
        with pytest.raises(EngineCrashed):
            for i in range(12):
                client.evaluate(stones(i), komi=6.5, board_size=19)


def test_query_timeout():
    with make_client("--delay-ms", "2000", timeout=0.2) as client:
        with pytest.raises(QueryTimeout):
            client.evaluate([], komi=6.5, board_size=19)


def test_missing_fixture_maps_to_protocol_error(tmp_path):
    fixture = tmp_path / "table.json"
    fixture.write_text(json.dumps({"": 1.25}))
    with make_client("--fixture", str(fixture)) as client:
        assert client.evaluate([], komi=6.5,
                               board_size=19).score_mean == 1.25
        with pytest.raises(MissingFixture):
            client.evaluate(stones(1), komi=6.5, board_size=19)


def test_rejected_query_error():
    # The client never emits an off-board vertex itself, so push a raw
    # request line through the wire to provoke the engine's rejection path.
    import copan.engine as eng

    with make_client() as client:
        client.evaluate([], komi=6.5, board_size=19)
        qid = "manual-1"
        line = json.dumps({"id": qid, "moves": [["b", "Z99"]],
                           "rules": "japanese", "komi": 6.5,
                           "boardXSize": 19, "boardYSize": 19,
                           "maxVisits": 5}) + "\n"
        pending = eng._Pending(line=line, side_to_move=Color.BLACK)
        client._slots.acquire()
        with client._lock:
            client._pending[qid] = pending
        client._send(line)
        with pytest.raises(EngineRejectedQuery):
            eng.EvalHandle(client, qid, pending).wait(10.0)


def test_stderr_goes_to_log_not_stdout():
    with make_client() as client:
        ev = client.evaluate([], komi=6.5, board_size=19)
        assert ev is not None
        assert client.stderr_path


def test_concurrent_evaluate_from_many_threads():
    import threading

    results = {}
    with make_client(max_in_flight=6) as client:
        def worker(i: int) -> None:
            results[i] = client.evaluate(stones(i), komi=6.5, board_size=19)

        threads = [threading.Thread(target=worker, args=(i,))
                   for i in range(16)]
        for t in threads:
            t.start()
        for t in threads:
            t.join()
    with make_client() as plain:
        for i in range(16):
            assert results[i] == plain.evaluate(stones(i), komi=6.5,
                                                board_size=19)
