import json
import os
import subprocess
import sys
from pathlib import Path

import jsonschema
import pytest

from subint.cli import load_schema, main

ROOT = Path(__file__).resolve().parents[1]
INSTANCES = ROOT / "instances"


def run(args, **kw):
    return subprocess.run([sys.executable, "-m", "subint", *args], capture_output=True,
                          text=True, **kw)


def write(tmp_path, doc, name="in.json"):
    p = tmp_path / name
    p.write_text(json.dumps(doc) if not isinstance(doc, str) else doc)
    return str(p)


def test_numerical_instance(tmp_path):
    out = tmp_path / "r.json"
    code = main(["run", str(INSTANCES / "numerical.json"), "-o", str(out), "--reproducible"])
    assert code == 0
    rep = json.loads(out.read_text())
    first = rep["tasks"][0]
    assert first["status"] == "pass"
    assert first["result"]["closure"]["generators"] == [[1]]
    assert first["result"]["adjoined"] == [[3], [1]]


@pytest.mark.parametrize("name", ["numerical", "rings", "ideals", "empty"])
def test_shipped_instances_exit_zero(name, tmp_path):
    out = tmp_path / "r.json"
    assert main(["run", str(INSTANCES / f"{name}.json"), "-o", str(out)]) == 0
    rep = json.loads(out.read_text())
    jsonschema.validate(rep, load_schema("report"))
    assert rep["summary"]["fail"] == 0


def test_empty_task_list(tmp_path):
    p = write(tmp_path, {"tasks": []})
    out = tmp_path / "r.json"
    assert main(["run", p, "-o", str(out)]) == 0
    assert json.loads(out.read_text())["tasks"] == []


def test_spec_examples(tmp_path):
    doc = {"tasks": [
        {"kind": "verify-pair-d1", "ext": "cusp", "b": "t", "m": [1]},
        {"kind": "tensor-identity", "ext": "cusp", "M": "<2,3>", "D": 10},
        {"kind": "ring-check-closed", "ext": "trivial-self"},
        {"kind": "units-quotient-witness", "ext": "dual-numbers", "M": "<2,3>", "N": "Zplus"},
    ]}
    out = tmp_path / "r.json"
    assert main(["run", write(tmp_path, doc), "-o", str(out)]) == 0
    rep = json.loads(out.read_text())
    assert [t["status"] for t in rep["tasks"]] == ["pass"] * 4
    assert rep["tasks"][0]["result"]["certificate"]["replay"] is True
    assert rep["tasks"][3]["result"]["witness"] == "1 + (e)*x^1"


def test_determinism_byte_identical(tmp_path):
    src = str(INSTANCES / "ideals.json")
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    main(["run", src, "-o", str(a), "--reproducible", "--seed", "7"])
    main(["run", src, "-o", str(b), "--reproducible", "--seed", "7"])
    assert a.read_bytes() == b.read_bytes()


def test_seed_from_environment(tmp_path):
    p = write(tmp_path, {"tasks": []})
    env = dict(os.environ, SUBINT_SEED="41")
    res = run(["run", p, "--json-only", "--reproducible"], env=env, cwd=tmp_path)
    assert res.returncode == 0
    assert json.loads(res.stdout)["seed"] == 41
    res = run(["run", p, "--json-only", "--seed", "3"], env=env, cwd=tmp_path)
    assert json.loads(res.stdout)["seed"] == 3


def test_parse_error_reports_position(tmp_path):
    p = write(tmp_path, '{"tasks": [\n  {"kind": "monoid-closure",, }]}')
    res = run(["run", p])
    assert res.returncode == 2
    assert ":2:" in res.stderr and "JSON parse error" in res.stderr


def test_unknown_task_kind(tmp_path):
    p = write(tmp_path, {"tasks": [{"kind": "frobnicate"}]})
    assert main(["run", p]) == 2


def test_schema_violation_and_undefined_name(tmp_path):
    assert main(["run", write(tmp_path, {"tasks": [{"kind": "ring-closure", "D": -1}]})]) == 2
    assert main(["run", write(tmp_path, {"tasks": [{"kind": "ring-closure", "ext": "nope"}]})]) == 2
    assert main(["run", str(tmp_path / "missing.json")]) == 2


def test_failed_expectation_exits_one(tmp_path):
    doc = {"tasks": [{"kind": "monoid-closure", "M": "<2,5>", "N": "Zplus",
                      "expect": {"closure": "<2,5>"}}]}
    out = tmp_path / "r.json"
    assert main(["run", write(tmp_path, doc), "-o", str(out)]) == 1
    rep = json.loads(out.read_text())
    assert rep["tasks"][0]["status"] == "fail"
    assert rep["tasks"][0]["expectations"]["closure"]["ok"] is False


def test_precondition_violation_is_task_failure(tmp_path):
    doc = {"tasks": [{"kind": "verify-pair-d1", "ext": "sqrt2", "b": "s", "m": [1]}]}
    out = tmp_path / "r.json"
    assert main(["run", write(tmp_path, doc), "-o", str(out)]) == 1
    assert "PreconditionViolated" in json.loads(out.read_text())["tasks"][0]["error"]


def test_inline_definitions(tmp_path):
    doc = {
        "monoids": {"S": {"generators": [[3], [5]], "rank": 1}},
        "extensions": {"ev": {"kind": "monomial", "inner": "<2>", "outer": "Zplus"}},
        "tasks": [
            {"kind": "monoid-closure", "M": "S", "N": "Zplus", "expect": {"closure": "Zplus"}},
            {"kind": "ring-check-closed", "ext": "ev", "expect": {"closed": True}},
            {"kind": "ring-closure", "ext": {"kind": "monomial", "inner": "<2,3>", "outer": "Zplus"},
             "expect": {"closure": "Zplus"}},
        ]}
    out = tmp_path / "r.json"
    assert main(["run", write(tmp_path, doc), "-o", str(out)]) == 0


def test_uncertified_does_not_fail(tmp_path):
    doc = {"tasks": [{"kind": "ring-check-closed", "ext": "diagonal"},
                     {"kind": "monoid-closure", "M": "<11,13>", "N": "Zplus", "D": 20}]}
    out = tmp_path / "r.json"
    assert main(["run", write(tmp_path, doc), "-o", str(out)]) == 0
    rep = json.loads(out.read_text())
    assert [t["status"] for t in rep["tasks"]] == ["uncertified", "uncertified"]


def test_large_integers_encoded_as_strings(tmp_path):
    big = 2 ** 60
    doc = {"tasks": [{"kind": "monoid-closure", "M": [[big]], "N": [[big]], "D": 2}]}
    out = tmp_path / "r.json"
    main(["run", write(tmp_path, doc), "-o", str(out), "--reproducible"])
    rep = json.loads(out.read_text())
    assert rep["tasks"][0]["result"]["closure"]["generators"] == [[str(big)]]


def test_schema_command_and_round_trip(tmp_path, capsys):
    assert main(["schema"]) == 0
    schemas = json.loads(capsys.readouterr().out)
    assert set(schemas) == {"input", "report"}
    for f in INSTANCES.glob("*.json"):
        jsonschema.validate(json.loads(f.read_text()), schemas["input"])
    out = tmp_path / "r.json"
    main(["run", str(INSTANCES / "rings.json"), "-o", str(out)])
    jsonschema.validate(json.loads(out.read_text()), schemas["report"])


def test_human_summary_and_default_output(tmp_path):
    res = run(["run", str(INSTANCES / "numerical.json")], cwd=tmp_path)
    assert res.returncode == 0
    assert "7 tasks: 7 pass" in res.stdout
    assert (tmp_path / "numerical.report.json").exists()
