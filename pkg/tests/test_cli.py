import json

import pytest

from hgv.cli import main
from hgv.service import OPERATIONS


def run_cli(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_check_vending(capsys):
    code, out, _ = run_cli(capsys, "check", "examples/vending.hgv")
    assert code == 0 and out.strip() == "•1"


def test_aps_cycle(capsys):
    code, out, _ = run_cli(capsys, "aps", "examples/cycle.hgv")
    assert code == 1 and "cyclic" in out


def test_run_ping(capsys):
    code, out, _ = run_cli(capsys, "run", "examples/ping.hgv", "--det")
    assert code == 0 and out.strip() == "main ()"


def test_all_subcommands_exist(capsys):
    for op in [*OPERATIONS, "serve"]:
        assert main([op, "--help"]) == 0
        assert capsys.readouterr().out.startswith("usage: hgv " + op)


def test_missing_file(capsys):
    code, _, err = run_cli(capsys, "check", "nowhere/none.hgv")
    assert code == 2 and "no such file" in err


def test_parse_error(tmp_path, capsys):
    f = tmp_path / "bad.hgv"
    f.write_text("let x = in")
    assert run_cli(capsys, "check", str(f))[0] == 2


def test_bad_flag(capsys):
    assert run_cli(capsys, "check", "--nope", "examples/ping.hgv")[0] == 2


def test_json_mirrors_text(capsys):
    code, out, _ = run_cli(capsys, "--json", "aps", "examples/ping.hgv")
    body = json.loads(out)
    assert code == 0 and body["verdict"] == "tree" and body["text"]


def test_trace_file_identical_for_seed(tmp_path, capsys):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    for f in (a, b):
        assert run_cli(capsys, "run", "examples/vending.hgv", "--seed", "9", "--trace", str(f))[0] == 0
    assert a.read_bytes() == b.read_bytes()
    assert json.loads(a.read_text())["seed"] == 9


def test_translate_output(tmp_path, capsys):
    f = tmp_path / "ping.hcp"
    assert run_cli(capsys, "translate", "examples/ping.hgv", "-o", str(f))[0] == 0
    from hgv.hcp import hcp_check, parse_process

    assert hcp_check(parse_process(f.read_text()))


def test_bisim_files(tmp_path, capsys):
    p, q = tmp_path / "p.hcp", tmp_path / "q.hcp"
    p.write_text("new (x y). (x[].0 || y().z[].0)")
    q.write_text("z().0")
    assert run_cli(capsys, "bisim", str(p), str(p), "--mode", "strong")[0] == 0
    assert run_cli(capsys, "bisim", str(p), str(q))[0] == 1
    assert run_cli(capsys, "bisim", str(p), str(q), "--internal", "gamma")[0] == 2


def test_hcp_lts_dot(tmp_path, capsys):
    p, d = tmp_path / "p.hcp", tmp_path / "p.dot"
    p.write_text("new (x y). (x[].0 || y().z[].0)")
    assert run_cli(capsys, "hcp-lts", str(p), "--dot", str(d))[0] == 0
    assert d.read_text().startswith("digraph")


def test_correspond_report(tmp_path, capsys):
    r = tmp_path / "report.json"
    assert run_cli(capsys, "correspond", "examples/ping.hgv", "--report", str(r))[0] == 0
    assert json.loads(r.read_text())["ok"]


def test_progress_deadlock(capsys):
    code, out, _ = run_cli(capsys, "progress", "examples/cycle.hgv")
    assert code == 1


def test_check_config_gv(capsys):
    code, out, _ = run_cli(capsys, "check-config", "examples/ping.hgv", "--gv", "")
    assert code == 0 and out.strip() == "•1"


def test_mix_flag(capsys):
    assert run_cli(capsys, "--mix", "run", "examples/spawn.hgv")[0] == 0
    assert run_cli(capsys, "run", "examples/spawn.hgv", "--mix")[0] == 0


def test_remote_server(capsys, monkeypatch):
    from fastapi.testclient import TestClient

    import httpx

    from hgv.service import app

    client = TestClient(app)
    monkeypatch.setattr(httpx, "post", lambda url, json, timeout: client.post(url.split("testserver")[-1], json=json))
    code, out, _ = run_cli(capsys, "--server", "http://testserver", "check", "examples/ping.hgv")
    assert code == 0 and out.strip() == "•1"
    assert run_cli(capsys, "--server", "http://testserver", "tcf", "examples/cycle.hgv")[0] == 1
