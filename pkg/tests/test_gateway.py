"""HTTP gateway: snapshots, commands, backfill, streaming."""

import json
import time

import pytest
from fastapi.testclient import TestClient

from neonfilm.engine import CSV_COLUMNS, Scenario
from neonfilm.service import SimService, create_app


def _scenario(duration_s=30.0, **initial):
    init = {"T_K": 24.7, "n_mol": 0.006, "power_dbm": -35.0}
    init.update(initial)
    return Scenario.from_dict({
        "name": "gw", "seed": 3, "duration_s": duration_s, "dt": 0.1,
        "stride_s": 1.0, "initial": init, "commands": [],
    })


@pytest.fixture()
def service():
    svc = SimService(_scenario(), pacing=0.0)
    yield svc
    svc.stop()


@pytest.fixture()
def client(service):
    return TestClient(create_app(service))


def test_state_snapshot_shape(client):
    out = client.get("/state").json()
    assert out["status"] == "running"
    assert out["scenario"] == "gw"
    assert out["t_s"] == 0.0
    for key in ("T_cell_K", "P_Pa", "f_res_Hz", "d_local_m", "phase", "pacing"):
        assert key in out


def test_scenario_info_contract(client):
    out = client.get("/scenario").json()
    assert out["name"] == "gw"
    assert out["csv_columns"] == CSV_COLUMNS
    assert len(out["phase_boundary"]["points"]) == 121
    assert out["phase_boundary"]["triple"]["T_K"] == pytest.approx(24.56)
    # Full config rides along so clients can label charts without physics.
    assert "resonator" in out["config"]
    assert out["config"]["resonator"]["f0"] == pytest.approx(2.230e9)


def test_command_ack_and_idempotent_replay(service, client):
    ack1 = client.post("/command", json={
        "seq": 1, "kind": "set_power", "args": {"power_dbm": 0.0}}).json()
    assert ack1["accepted"] is True and ack1["seq"] == 1
    n_queued = len(service.engine._commands)
    ack2 = client.post("/command", json={
        "seq": 1, "kind": "set_power", "args": {"power_dbm": 0.0}}).json()
    assert ack2 == ack1
    # The replayed seq must not enqueue the command twice.
    assert len(service.engine._commands) == n_queued


def test_command_validation_maps_to_400(client):
    r = client.post("/command", json={
        "seq": 2, "kind": "set_power", "args": {"power_dbm": 99.0}})
    assert r.status_code == 400
    assert "power_dbm" in r.json()["detail"]
    r = client.post("/command", json={"seq": 3, "kind": "warp", "args": {}})
    assert r.status_code == 400
    assert "warp" in r.json()["detail"]


def test_command_takes_effect_in_stepped_state(service, client):
    client.post("/command", json={
        "seq": 4, "kind": "set_power", "args": {"power_dbm": -20.0}})
    service.step_strides(2)
    assert client.get("/state").json()["power_dBm"] == -20.0


def test_history_backfill_and_from_t(service, client):
    service.step_strides(10)
    full = client.get("/history").json()
    assert full["count"] == 11  # t=0 seed record plus one per stride
    times = [r["t_s"] for r in full["records"]]
    assert times == sorted(times)
    part = client.get("/history", params={"from_t": 5.0}).json()
    assert part["count"] == 6
    assert all(r["t_s"] >= 5.0 for r in part["records"])
    # Records carry the stream schema (CSV columns plus inventory extras).
    rec = full["records"][-1]
    for key in CSV_COLUMNS[:-1] + ["n_gas_mol", "n_liquid_mol", "n_solid_mol"]:
        assert key in rec


def test_subscriber_receives_published_strides(service):
    sub = service.subscribe()
    service.step_strides(5)
    got = []
    while not sub.q.empty():
        got.append(sub.q.get_nowait())
    assert [r["t_s"] for r in got] == [1.0, 2.0, 3.0, 4.0, 5.0]
    service.unsubscribe(sub)


def test_slow_subscriber_is_dropped_not_blocking(service):
    sub = service.subscribe()
    rec = service.history[0]
    for _ in range(600):  # exceed the queue bound
        service._publish(rec)
    assert sub.dropped
    assert sub not in service.subscribers
    # Publishing continues unharmed for a fresh subscriber.
    fresh = service.subscribe()
    service._publish(rec)
    assert fresh.q.qsize() == 1


def test_stream_endpoint_delivers_ndjson():
    # A paced live service; the client must see consecutive strides.
    svc = SimService(_scenario(duration_s=600.0), pacing=60.0)
    svc.start()
    client = TestClient(create_app(svc))
    got = []
    try:
        with client.stream("GET", "/stream") as resp:
            for line in resp.iter_lines():
                if line:
                    got.append(json.loads(line))
                if len(got) >= 3:
                    break
    finally:
        svc.stop()
    times = [r["t_s"] for r in got]
    assert len(times) == 3
    assert times[1] == times[0] + 1.0 and times[2] == times[1] + 1.0
    assert got[0]["phase"] == "liquid"


def test_paced_run_to_completion():
    svc = SimService(_scenario(duration_s=5.0), pacing=0.0)  # unpaced: flat out
    svc.start()
    deadline = time.monotonic() + 20.0
    while svc.state()["status"] != "done" and time.monotonic() < deadline:
        time.sleep(0.02)
    svc.stop()
    assert svc.state()["status"] == "done"
    assert len(svc.history) == 6
    assert svc.history[-1]["t_s"] == pytest.approx(5.0)


def test_reconnect_from_history_matches_stream(service):
    # A client that misses live records can rebuild the identical series.
    sub = service.subscribe()
    service.step_strides(4)
    live = []
    while not sub.q.empty():
        live.append(sub.q.get_nowait())
    service.unsubscribe(sub)
    service.step_strides(3)  # missed while disconnected
    backfill = service.history_since(live[-1]["t_s"] + 0.5)
    merged = live + backfill
    assert [r["t_s"] for r in merged] == [1.0, 2.0, 3.0, 4.0, 5.0, 6.0, 7.0]
