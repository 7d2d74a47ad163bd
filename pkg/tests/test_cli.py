import json
import shutil
import subprocess
import sys

import jsonschema
import pytest

from nonadd.cli import bundled_suite_dir, dumps, main, run_scenario, run_suite
from nonadd.scenario import ScenarioError, from_dict, load_schema, validate

SUITE = bundled_suite_dir()
SCENARIOS = sorted(SUITE.glob("*.json"))


def test_bundled_suite_present():
    assert len(SCENARIOS) >= 20


@pytest.mark.parametrize("path", SCENARIOS, ids=lambda p: p.stem)
def test_bundled_scenarios_validate_and_pass(path):
    validate(json.loads(path.read_text()), path)
    report, _ = run_scenario(path, no_meta=True)
    assert report["exit_code"] == 0, report
    jsonschema.validate(json.loads(dumps(report)), load_schema("report.schema.json"))


def test_dumps_floats_round_trip():
    x = 0.1 + 0.2
    assert float(json.loads(dumps({"x": x}))["x"]) == x
    assert json.loads(dumps({"y": float("inf")}))["y"] == "inf"


def test_schema_error_path():
    doc = {"space": {"finite": 2}, "command": "integrate", "nu": {"additive": [1, 1]}, "f": [1, 1], "params": {"p": "two"}}
    with pytest.raises(ScenarioError) as e:
        validate(doc, "bad.json")
    assert "/params/p" in str(e.value)


def test_builder_error_path():
    sc = from_dict({"space": {"finite": 2}, "command": "integrate", "nu": {"additive": [1, 1]}, "f": [1, 1, 1]}, "x.json")
    from nonadd.scenario import build_function

    with pytest.raises(ScenarioError) as e:
        sc.field("f", build_function)
    assert "/f" in str(e.value)


def write(tmp_path, name, doc):
    p = tmp_path / name
    p.write_text(doc if isinstance(doc, str) else json.dumps(doc))
    return p


GOOD = {"space": {"finite": 2}, "command": "integrate", "nu": {"additive": [0.5, 0.5]}, "f": [1, 3]}


def test_run_exit_codes(tmp_path, capsys):
    assert main(["run", str(write(tmp_path, "ok.json", GOOD)), "--no-meta"]) == 0
    bad = dict(GOOD, expect={"integral.value": 5})
    assert main(["run", str(write(tmp_path, "fail.json", bad)), "--no-meta"]) == 1
    assert main(["run", str(write(tmp_path, "broken.json", "{nope")), "--no-meta"]) == 2
    hyp = {"space": {"finite": 2}, "command": "inequality", "nu": {"additive": [0.5, 0.5]},
           "g": [1, 1], "h": [1, 0], "params": {"kind": "reverse_holder", "p": 0.5}}
    assert main(["run", str(write(tmp_path, "hyp.json", hyp)), "--no-meta"]) == 3
    capsys.readouterr()


def test_trace_csv(tmp_path, capsys):
    src = write(tmp_path, "g.json", dict(GOOD, params={"method": "gould"}))
    out = tmp_path / "t.csv"
    assert main(["run", str(src), "--trace-csv", str(out), "--no-meta"]) == 0
    lines = out.read_text().splitlines()
    assert lines[0] == "partition_index,block_count,sum_lo,sum_hi" and len(lines) > 1
    capsys.readouterr()


def test_suite_isolation(tmp_path):
    write(tmp_path, "a.json", GOOD)
    write(tmp_path, "b.json", "not json")
    summary, code = run_suite(tmp_path, no_meta=True)
    assert code == 2
    assert [r["exit_code"] for r in summary["reports"]] == [0, 2]


def test_empty_suite(tmp_path, capsys):
    assert main(["suite", str(tmp_path), "--no-meta"]) == 0
    assert "warning" in capsys.readouterr().err


def test_jobs_matches_serial(tmp_path):
    for p in SCENARIOS[:6]:
        shutil.copy(p, tmp_path)
    a, _ = run_suite(tmp_path, no_meta=True)
    b, _ = run_suite(tmp_path, no_meta=True, jobs=2)
    assert dumps(a) == dumps(b)


def test_env_var_suite_path(tmp_path, monkeypatch):
    write(tmp_path, "a.json", GOOD)
    monkeypatch.setenv("NONADD_SCENARIO_PATH", str(tmp_path))
    assert bundled_suite_dir() == tmp_path


def test_validate_command(tmp_path, capsys):
    assert main(["validate", str(write(tmp_path, "ok.json", GOOD))]) == 0
    assert main(["validate", str(write(tmp_path, "bad.json", {"space": {}, "command": "nope"}))]) == 2
    capsys.readouterr()


def test_property_command(capsys):
    assert main(["property", "--cases", "20", "--no-meta"]) == 0
    out = json.loads(capsys.readouterr().out)
    assert all(v["violations"] == 0 for v in out["checks"].values())


def test_console_script_determinism(tmp_path):
    cmd = [sys.executable, "-m", "nonadd.cli", "run", str(SUITE / "counterexample_nat.json"), "--seed", "7", "--no-meta"]
    a = subprocess.run(cmd, capture_output=True, check=True).stdout
    b = subprocess.run(cmd, capture_output=True, check=True).stdout
    assert a == b and a
