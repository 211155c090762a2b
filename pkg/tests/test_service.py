import pytest
from fastapi.testclient import TestClient

from hgv.service import OPERATIONS, app, dispatch

from conftest import corpus_text

client = TestClient(app)


def test_health():
    assert client.get("/health").json() == {"status": "ok"}


def test_every_operation_routed():
    paths = {r.path for r in app.routes}
    assert {f"/{op}" for op in OPERATIONS} <= paths


def test_check_endpoint():
    r = client.post("/check", json={"source": corpus_text("vending")})
    assert r.status_code == 200
    body = r.json()
    assert body["ok"] and body["type"] == "•1"
    assert body["derivation"]["rule"] == "TC-Main"


def test_parse_error_is_400():
    r = client.post("/check", json={"source": "let x = in"})
    assert r.status_code == 400


def test_validation_error_is_422():
    assert client.post("/run", json={"source": "main ()", "policy": "bogus"}).status_code == 422


def test_negative_result_is_200():
    r = client.post("/aps", json={"source": corpus_text("cycle")})
    assert r.status_code == 200
    assert r.json()["verdict"] == "cyclic" and r.json()["exit_code"] == 1


def test_run_trace():
    r = client.post("/run", json={"source": corpus_text("ping"), "policy": "random", "seed": 4})
    body = r.json()
    assert body["terminal"] == "main ()"
    assert body["trace"]["format"] == "hgv-trace/1"
    assert len(body["trace"]["steps"]) == body["steps"] == 4


def test_bisim_endpoint():
    r = client.post("/bisim", json={"left": "new (x y). (x[].0 || y().z[].0)", "right": "z[].0"})
    assert r.json()["bisimilar"] is True


def test_lts_endpoint():
    r = client.post("/hcp-lts", json={"process": "new (x y). (x[].0 || y().z[].0)"})
    body = r.json()
    assert [t["label"] for t in body["transitions"]][:1] == ["β"]


@pytest.mark.parametrize("op", ["translate", "fg", "tcf", "progress", "check-config"])
def test_ping_ops(op):
    resp = dispatch(op, {"source": corpus_text("ping")})
    assert resp.ok and resp.exit_code == 0


def test_correspond_endpoint():
    r = client.post("/correspond", json={"source": corpus_text("ping")})
    assert r.json()["report"]["ok"]


def test_mix_flag():
    assert client.post("/run", json={"source": corpus_text("spawn")}).json()["exit_code"] != 0
    assert client.post("/run", json={"source": corpus_text("spawn"), "mix": True}).json()["ok"]
