import json
from importlib import resources

import jsonschema
import pytest

from hgv.cli import main
from hgv.service import json_schemas


def shipped(name):
    return json.loads((resources.files("hgv") / "schemas" / f"{name}.json").read_text(encoding="utf-8"))


@pytest.mark.parametrize("name", sorted(json_schemas()))
def test_shipped_schema_current(name):
    assert shipped(name) == json.loads(json.dumps(json_schemas()[name]))


CASES = [
    ("check", ["check", "examples/vending.hgv"]),
    ("check-config", ["check-config", "examples/ping.hgv"]),
    ("run", ["run", "examples/ping.hgv", "--seed", "1"]),
    ("aps", ["aps", "examples/cycle.hgv"]),
    ("tcf", ["tcf", "examples/ping.hgv"]),
    ("fg", ["fg", "examples/ping.hgv"]),
    ("translate", ["translate", "examples/ping.hgv"]),
    ("correspond", ["correspond", "examples/ping.hgv"]),
    ("progress", ["progress", "examples/ping.hgv"]),
]


@pytest.mark.parametrize("name,argv", CASES)
def test_cli_json_validates(name, argv, capsys):
    main(["--json", *argv])
    jsonschema.validate(json.loads(capsys.readouterr().out), shipped(f"{name}-response"))


def test_trace_and_report_validate(tmp_path, capsys):
    t, r = tmp_path / "t.json", tmp_path / "r.json"
    main(["run", "examples/vending.hgv", "--trace", str(t)])
    main(["correspond", "examples/ping.hgv", "--report", str(r)])
    capsys.readouterr()
    jsonschema.validate(json.loads(t.read_text()), shipped("trace"))
    jsonschema.validate(json.loads(r.read_text()), shipped("correspondence-report"))
