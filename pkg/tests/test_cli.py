import json
import subprocess
import sys

import pytest

from schoberlab.cli import run
from schoberlab.gradedmf import load_mf, validate_mf
from schoberlab.report import Report, emit_report


def run_json(capsys, *argv):
    code = run(list(argv))
    out = capsys.readouterr().out
    return code, json.loads(out)


def strip_timing(reports):
    return [{k: v for k, v in r.items() if k != "elapsed_ms"} for r in reports]


def test_verify_ic_n2(capsys):
    code, reps = run_json(capsys, "verify", "ic", "--n", "2")
    assert code == 0 and reps[0]["status"] == "pass"
    slots = reps[0]["witness"]["checks"]["slot_iso"]["slots"]
    assert all(s["iso"] == "iso" and s["morphism"] for s in slots.values())


def test_verify_ic_n1(capsys):
    code, reps = run_json(capsys, "verify", "ic", "--n", "1")
    assert code == 0
    assert reps[0]["status"] == "expected-failure" and reps[0]["witness"]["dims"] == [4, 2]


def test_mf_koszul_writes_valid_file(tmp_path, capsys):
    out = tmp_path / "k.json"
    code = run(["mf", "koszul", "--w", "x^3+y^3", "--s", "x,y", "--t", "x^2,y^2", "-o", str(out)])
    assert code == 0
    E = load_mf(out.read_text())
    assert validate_mf(E) == [] and E.ranks == (2, 2)
    for sub in (["validate", str(out)], ["dual", str(out)], ["cone", str(out)],
                ["hom", str(out), str(out), "--kmin", "0", "--kmax", "0"],
                ["window", str(out), "--lo", "-1", "--hi", "2"]):
        capsys.readouterr()
        assert run(["mf", *sub]) == 0


def test_mf_hom_dims(tmp_path, capsys):
    out = tmp_path / "k.json"
    run(["mf", "koszul", "--w", "x^3", "--s", "x", "--t", "x^2", "-o", str(out)])
    capsys.readouterr()
    code, reps = run_json(capsys, "mf", "hom", str(out), str(out))
    assert code == 0 and reps[0]["witness"]["dims"]["0"] == 1


def test_usage_errors(capsys):
    assert run(["verify"]) == 3
    assert run(["verify", "ic"]) == 3
    assert run(["bogus"]) == 3
    assert run(["verify", "braid", "--trials", "0"]) == 3
    assert "error" in capsys.readouterr().err


def test_failures_exit_1(tmp_path, capsys):
    assert run(["mf", "koszul", "--w", "x^3+y^2", "--s", "x", "--t", "x"]) == 1
    assert run(["mf", "validate", str(tmp_path / "missing.json")]) == 1
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"vars": ["x"], "W": "x^3", "d": 3, "m1_degrees": [1],
                               "m0_degrees": [0], "phi1": [["x"]], "phi0": [["x"]]}))
    capsys.readouterr()
    code, reps = run_json(capsys, "mf", "validate", str(bad))
    assert code == 1 and reps[0]["status"] == "fail"


def test_exit_code_lattice():
    from schoberlab.cli import exit_code
    mk = lambda s: Report("c", s)
    assert exit_code([]) == 0
    assert exit_code([mk("pass"), mk("expected-failure")]) == 0
    assert exit_code([mk("pass"), mk("undetermined")]) == 2
    assert exit_code([mk("undetermined"), mk("fail")]) == 1


def test_seed_env_and_determinism(capsys, monkeypatch):
    monkeypatch.setenv("SCHOBERLAB_SEED", "7")
    _, a = run_json(capsys, "verify", "braid", "--trials", "5")
    _, b = run_json(capsys, "verify", "braid", "--trials", "5", "--seed", "7")
    assert strip_timing(a) == strip_timing(b) and a[0]["witness"]["seed"] == 7
    monkeypatch.setenv("SCHOBERLAB_SEED", "nope")
    assert run(["verify", "braid", "--trials", "1"]) == 3


def test_braid_default_trials(capsys):
    code, reps = run_json(capsys, "verify", "braid", "--n", "3")
    assert code == 0 and reps[0]["witness"]["trials"] == 100


def test_emit_report(tmp_path):
    assert json.loads(emit_report([], "json")) == []
    tsv = emit_report([Report("a", "pass", {}, 1.5)], "tsv")
    assert tsv.splitlines()[0].split("\t") == ["check", "status", "elapsed_ms"]
    r = Report("a", "fail", {"x": [1]}, 2.0)
    path = tmp_path / "r.json"
    emit_report([r], "json", path)
    (back,) = json.loads(path.read_text())
    assert list(back) == ["check", "status", "witness", "elapsed_ms"]
    assert Report.from_json(back) == r
    with pytest.raises(ValueError):
        Report("a", "maybe")


def test_tsv_output(capsys):
    assert run(["verify", "pairing", "--nmax", "3", "--format", "tsv"]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[0] == "check\tstatus\telapsed_ms" and len(lines) == 4


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "schoberlab", "verify", "elliptic",
                           "--format", "tsv"], capture_output=True, text=True)
    assert proc.returncode == 0 and "elliptic\tpass" in proc.stdout
