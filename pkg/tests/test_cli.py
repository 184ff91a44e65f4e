import io
import json
import subprocess
import sys
from pathlib import Path

import jsonschema
import pytest

import critical_fock.affine as affine
from critical_fock.cli import load_schema, main

ROOT = Path(__file__).resolve().parents[1]
CONFIGS = ROOT / "configs"
QUICK = ["certify-full.json", "character-pizero.json", "flow-check.json", "identify-bar.json",
         "relations-clifford.json", "relations-sl2-closed.json", "identify-negative.json"]


def run(args, stdin=None, capsys=None, monkeypatch=None):
    if stdin is not None:
        monkeypatch.setattr(sys, "stdin", io.StringIO(stdin))
    code = main(args)
    out, err = capsys.readouterr()
    return code, out, err


def command_of(path):
    return json.loads(Path(path).read_text())["command"]


def test_published_schemas_match_package():
    for name in ("config", "report"):
        published = json.loads((ROOT / "docs" / f"{name}.schema.json").read_text())
        assert published == load_schema(name)
        jsonschema.Draft202012Validator.check_schema(published)


def test_shipped_configs_are_valid():
    schema = load_schema("config")
    for path in sorted(CONFIGS.glob("*.json")):
        jsonschema.validate(json.loads(path.read_text()), schema)


@pytest.mark.parametrize("name", QUICK)
def test_quick_configs_pass_and_are_stable(name, capsys):
    path = str(CONFIGS / name)
    code1, out1, _ = run([command_of(path), "--config", path, "--quiet"], capsys=capsys)
    code2, out2, _ = run([command_of(path), "--config", path, "--quiet"], capsys=capsys)
    assert code1 == code2 == 0
    assert out1 == out2
    report = json.loads(out1)
    jsonschema.validate(report, load_schema("report"))
    assert report["pass"] and report["schema_version"] == 1 and "timing" not in report


def test_identify_reports_label(capsys):
    path = str(CONFIGS / "identify-bar.json")
    code, out, _ = run(["identify", "--config", path, "--quiet"], capsys=capsys)
    assert code == 0 and json.loads(out)["result"]["label"] == "L(-3Λ0+1Λ1)"


def test_failing_certificate_and_replay(tmp_path, capsys):
    path = str(CONFIGS / "certify-tilde-zero.json")
    out_file = tmp_path / "report.json"
    code, out, err = run(["certify", "--config", path, "--out", str(out_file)], capsys=capsys)
    assert code == 1 and out == "" and "[FAIL]" in err
    report = json.loads(out_file.read_text())
    jsonschema.validate(report, load_schema("report"))
    witness = report["checks"][0]["submodule_witness"]
    assert witness["family"] == "upward"
    code, out, _ = run(["replay", "--config", str(out_file), "--quiet"], capsys=capsys)
    assert code == 0 and json.loads(out)["replay"][0]["reproduced"]

    # a tampered witness does not replay
    witness["excluded"]["vector"][0]["key"]["minus"] = ["3x2"]
    out_file.write_text(json.dumps(report))
    code, out, _ = run(["replay", "--config", str(out_file), "--quiet"], capsys=capsys)
    assert code == 1 and not json.loads(out)["replay"][0]["reproduced"]


def test_relation_witnesses_replay_in_isolation(tmp_path, capsys, monkeypatch):
    config = {"schema_version": 1, "command": "relations", "suite": "sl2",
              "module": {"kind": "Full", "lambda": "1/2", "mu": "1/3"},
              "bounds": {"mode_bound": 1, "degree_bound": 1}}
    path = tmp_path / "c.json"
    path.write_text(json.dumps(config))
    # break the action on purpose with the wrong cocycle
    monkeypatch.setattr(affine, "COCYCLE", "trivial")
    affine._current_mono.cache_clear()
    code, out, _ = run(["relations", "--config", str(path), "--quiet"], capsys=capsys)
    assert code == 1
    report_path = tmp_path / "r.json"
    report_path.write_text(out)
    code, out, _ = run(["replay", "--config", str(report_path), "--quiet"], capsys=capsys)
    assert code == 0
    # with the correct action the recorded failures no longer reproduce
    monkeypatch.undo()
    affine._current_mono.cache_clear()
    code, out, _ = run(["replay", "--config", str(report_path), "--quiet"], capsys=capsys)
    assert code == 1


BAD_CONFIGS = [
    '{"schema_version": 1, "command": "certify", "module": {"kind": "Tilde", "chi": {"0": "1/0"}}}',
    '{"schema_version": 1, "command": "certify", "module": {"kind": "Tilde"}, "extra": 1}',
    '{"schema_version": 2, "command": "certify", "module": {"kind": "Tilde"}}',
    '{"schema_version": 1, "command": "certify"}',
    '{"schema_version": 1, "command": "certify", "module": {"kind": "Bar", "chi": {}}}',
    '{"schema_version": 1, "command": "certify", "module": {"kind": "Tilde"}, "bounds": {"weight_bound": 0}}',
    '{"schema_version": 1, "command": "certify", "module": {"kind": "Tilde", "chi": {"0": 0.5}}}',
    '{"schema_version": 1, "command": "character", "target": "E(1/2)"}',
    '{"schema_version": 1, "command": "relations", "suite": "sl2-closed", "family": "full", "param": "1/2"}',
    '{"schema_version": 1, "command": "identify", "module": {"kind": "Tilde"}}',
    '{"schema_version": 1, "command": "character", "target": "PiZero"',
]


@pytest.mark.parametrize("text", BAD_CONFIGS)
def test_parse_errors_exit_2_without_output(text, capsys, monkeypatch):
    command = "character" if "character" in text else ("relations" if "relations" in text else
                                                        "identify" if "identify" in text else "certify")
    code, out, err = run([command, "--config", "-"], stdin=text, capsys=capsys, monkeypatch=monkeypatch)
    assert code == 2 and out == "" and "config error" in err


def test_command_mismatch_is_a_parse_error(capsys):
    code, out, _ = run(["character", "--config", str(CONFIGS / "flow-check.json")], capsys=capsys)
    assert code == 2 and out == ""


def test_unknown_command_and_missing_file(capsys):
    assert main(["frobnicate", "--config", "x"]) == 2
    assert main(["certify", "--config", "/nonexistent.json"]) == 2
    capsys.readouterr()


def test_carrier_violation_exits_3(capsys, monkeypatch):
    config = {"schema_version": 1, "command": "identify", "module": {"kind": "Bar", "m": 0, "n": 1},
              "vector": {"terms": [{"coef": "1", "key": {
                  "type": "tensor", "u": {"type": "fermion", "plus": [], "minus": ["3x2"]},
                  "l": {"type": "lattice", "m": 0, "parts": []}}}]}}
    code, out, err = run(["identify", "--config", "-"], stdin=json.dumps(config),
                         capsys=capsys, monkeypatch=monkeypatch)
    assert code == 3 and out == "" and "precondition" in err


def test_precondition_exits_3(capsys, monkeypatch):
    config = {"schema_version": 1, "command": "flow-check", "module": {"kind": "Tilde", "chi": {"1": 1}}}
    code, out, _ = run(["flow-check", "--config", "-"], stdin=json.dumps(config),
                       capsys=capsys, monkeypatch=monkeypatch)
    assert code == 3 and out == ""


def test_stdin_quiet_and_timing(capsys, monkeypatch):
    text = (CONFIGS / "relations-clifford.json").read_text()
    code, out, err = run(["relations", "--config", "-", "--quiet", "--timing"], stdin=text,
                         capsys=capsys, monkeypatch=monkeypatch)
    assert code == 0 and err == ""
    assert "seconds" in json.loads(out)["timing"]


def test_console_script_entry_point(tmp_path):
    out = tmp_path / "r.json"
    proc = subprocess.run([sys.executable, "-m", "critical_fock.cli", "flow-check", "--config",
                           str(CONFIGS / "flow-check.json"), "--out", str(out), "--quiet"],
                          capture_output=True, text=True)
    assert proc.returncode == 0 and proc.stdout == "" and proc.stderr == ""
    assert json.loads(out.read_text())["pass"]
