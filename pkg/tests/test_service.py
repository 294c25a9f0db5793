import asyncio

import pytest
from fastapi.testclient import TestClient

from neuromandala.engine import PARAM_WHITELIST, SessionConfig
from neuromandala.mandala import MandalaConfig
from neuromandala.service import ConnectionManager, create_app


@pytest.fixture
def client():
    config = SessionConfig(
        source="manual",
        manual_m=0.5,
        time_constant=0.0,
        mandala=MandalaConfig(particle_count=8, seed=3),
    )
    app = create_app(config)
    with TestClient(app) as tc:
        yield tc


def test_status_endpoint(client):
    body = client.get("/api/status").json()
    assert body["source"] == "manual"
    assert body["mode"] == "forward"
    assert 0.0 <= body["m"] <= 1.0
    # camelCase aliases on the wire
    assert "poorSignal" in body
    assert "framesEmitted" in body
    assert "samplesReceived" in body
    assert "parseErrors" in body
    assert "clipCount" in body


def test_params_endpoint(client):
    body = client.get("/api/params").json()
    assert body["whitelist"] == sorted(PARAM_WHITELIST)


def test_set_m_round_trip(client):
    assert client.post("/api/m", json={"value": 1.0}).status_code == 200
    # drain a few frames so the new target lands
    with client.websocket_connect("/ws") as ws:
        for _ in range(12):
            msg = ws.receive_json()
            if msg["type"] == "frame" and msg["m"] == 1.0:
                break
        else:
            pytest.fail("m never reached the requested level")


def test_set_m_validation(client):
    assert client.post("/api/m", json={"value": 1.5}).status_code == 422
    assert client.post("/api/m", json={}).status_code == 422


def test_set_mode(client):
    assert client.post("/api/mode", json={"value": "reverse"}).status_code == 200
    assert client.post("/api/mode", json={"value": "diagonal"}).status_code == 422


def test_set_param(client):
    assert (
        client.post("/api/param", json={"name": "noise_amplitude", "value": 2.0}).status_code
        == 200
    )
    resp = client.post("/api/param", json={"name": "frame_rate", "value": 30})
    assert resp.status_code == 422
    assert "not adjustable" in resp.json()["detail"]


def test_set_m_conflicts_on_non_manual_source():
    config = SessionConfig(
        source="simulated", mandala=MandalaConfig(particle_count=4, seed=0)
    )
    with TestClient(create_app(config)) as tc:
        resp = tc.post("/api/m", json={"value": 0.5})
        assert resp.status_code == 409
        assert "manual" in resp.json()["detail"]


def test_render_frames_endpoint(client):
    resp = client.post(
        "/api/render/frames",
        json={"trace": [[0.0, 0.0], [1.0, 1.0]], "frame_rate": 10, "seed": 4},
    )
    assert resp.status_code == 200
    body = resp.json()
    assert body["frame_rate"] == 10
    assert body["truncated"] is False
    assert len(body["frames"]) == 11
    assert body["frames"][0]["m"] == 0.0
    assert body["frames"][-1]["m"] == 1.0
    assert len(body["frames"][0]["positions"]) == 96


def test_render_frames_truncation(client):
    resp = client.post(
        "/api/render/frames",
        json={
            "trace": [[0.0, 0.5], [10.0, 0.5]],
            "frame_rate": 60,
            "max_frames": 20,
        },
    )
    body = resp.json()
    assert body["truncated"] is True
    assert len(body["frames"]) == 20


def test_render_frames_rejects_bad_trace(client):
    resp = client.post(
        "/api/render/frames",
        json={"trace": [[1.0, 0.5], [0.0, 0.5]]},  # times not increasing
    )
    assert resp.status_code == 422


def test_websocket_stream_and_controls(client):
    with client.websocket_connect("/ws") as ws:
        first = ws.receive_json()
        assert first["type"] == "status"
        assert first["source"] == "manual"
        msg = ws.receive_json()
        while msg["type"] != "frame":
            msg = ws.receive_json()
        assert len(msg["positions"]) == 8
        assert all(len(p) == 2 for p in msg["positions"])
        assert 0.0 <= msg["m"] <= 1.0

        ws.send_json({"type": "setMode", "value": "reverse"})
        saw_reverse = False
        for _ in range(30):
            msg = ws.receive_json()
            if msg["type"] == "status" and msg["mode"] == "reverse":
                saw_reverse = True
                break
        assert saw_reverse


def test_websocket_error_replies(client):
    with client.websocket_connect("/ws") as ws:
        ws.receive_json()  # initial status
        ws.send_json({"type": "warp", "value": 1})
        msg = ws.receive_json()
        while msg["type"] not in ("error",):
            msg = ws.receive_json()
        assert "unknown message type" in msg["message"]

        ws.send_json({"type": "setParam", "name": "frame_rate", "value": 1})
        msg = ws.receive_json()
        while msg["type"] != "error":
            msg = ws.receive_json()
        assert "not adjustable" in msg["message"]


def test_websocket_survives_malformed_text(client):
    with client.websocket_connect("/ws") as ws:
        ws.receive_json()  # initial status
        ws.send_text("this is not json")
        msg = ws.receive_json()
        while msg["type"] != "error":
            msg = ws.receive_json()
        assert "not valid JSON" in msg["message"]

        ws.send_text("42")  # valid JSON but not a control object
        msg = ws.receive_json()
        while msg["type"] != "error":
            msg = ws.receive_json()
        assert "JSON object" in msg["message"]

        # the connection must still be usable afterwards
        ws.send_json({"type": "setMode", "value": "reverse"})
        msg = ws.receive_json()
        while not (msg["type"] == "status" and msg["mode"] == "reverse"):
            msg = ws.receive_json()


def test_index_reports_endpoints(client):
    body = client.get("/").json()
    assert body["websocket"] == "/ws"


def test_missing_ui_dir_fails_fast():
    config = SessionConfig(source="manual")
    with pytest.raises(FileNotFoundError):
        create_app(config, ui_dir="/nonexistent/ui")


def test_ui_dir_served(tmp_path):
    (tmp_path / "index.html").write_text("<h1>mandala</h1>")
    config = SessionConfig(
        source="manual", mandala=MandalaConfig(particle_count=2, seed=0)
    )
    with TestClient(create_app(config, ui_dir=str(tmp_path))) as tc:
        resp = tc.get("/")
        assert resp.status_code == 200
        assert "mandala" in resp.text


def test_fanout_drops_oldest_when_full():
    manager = ConnectionManager(queue_size=3)
    queue = manager.connect(object())
    for k in range(6):
        manager._fanout({"type": "frame", "t": k})
    kept = [queue.get_nowait()["t"] for _ in range(3)]
    assert kept == [3, 4, 5]
    with pytest.raises(asyncio.QueueEmpty):
        queue.get_nowait()
