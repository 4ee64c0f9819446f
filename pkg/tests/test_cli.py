import json
import os
import subprocess
import sys

from conftest import fixture_path


def run_cli(*args):
    proc = subprocess.run(
        [sys.executable, "-m", "serrelab.cli", *args],
        capture_output=True,
        text=True,
    )
    return proc


def test_check_appendix_fixture():
    proc = run_cli("check", fixture_path("appendix9.json"))
    assert proc.returncode == 0
    report = json.loads(proc.stdout)
    assert report["ok"] is True
    perm = report["checks"][0]["report"]["permutation"]
    assert perm["1"] == "9" and perm["5"] == "7" and perm["2"] == "2"


def test_check_exit_codes(tmp_path):
    kite = {
        "elements": ["e", "a", "ab", "ac", "abc"],
        "covers": [["e", "a"], ["a", "ab"], ["a", "ac"], ["ab", "abc"], ["ac", "abc"]],
    }
    path = tmp_path / "kite.json"
    path.write_text(json.dumps(kite))
    assert run_cli("check", str(path)).returncode == 2
    assert run_cli("check", str(tmp_path / "missing.json")).returncode == 1
    assert run_cli("check", "--gen", "nonsense", "3").returncode == 1
    assert run_cli("check").returncode == 1  # neither file nor generator


def test_reports_are_byte_identical():
    a = run_cli("check", fixture_path("appendix9.json")).stdout
    b = run_cli("check", fixture_path("appendix9.json")).stdout
    assert a == b
    assert "timing" not in json.loads(a)


def test_check_derived_typei():
    proc = run_cli("check", "--gen", "typeI", "4", "--derived")
    assert proc.returncode == 0
    report = json.loads(proc.stdout)
    derived = report["checks"][1]
    assert derived["fcy_pair"] == [4, 5]


def test_orbit_command():
    proc = run_cli("orbit", fixture_path("appendix9.json"), "--start", "1")
    assert proc.returncode == 0
    report = json.loads(proc.stdout)
    steps = report["orbits"][0]["steps"]
    assert steps[0]["dimension_vector"] == [0, 0, 0, 1, 1, 0, 1, 0, 0]
    assert steps[0]["shift"] == 2
    assert report["orbits"][0]["period"] == 4


def test_gen_matches_golden_tamari():
    proc = run_cli("gen", "--gen", "tamari", "4")
    assert proc.returncode == 0
    got = json.loads(proc.stdout)
    with open(fixture_path("tamari4.json")) as fh:
        golden = json.load(fh)
    assert got == golden


def test_gen_chainprod_and_product(tmp_path):
    proc = run_cli("gen", "--gen", "chainprod", "2", "2")
    assert proc.returncode == 0
    assert len(json.loads(proc.stdout)["elements"]) == 4
    f1 = tmp_path / "c2.json"
    f1.write_text(json.dumps({"elements": ["0", "1"], "covers": [["0", "1"]]}))
    proc2 = run_cli("gen", "--gen", "product", str(f1), str(f1))
    assert proc2.returncode == 0
    assert len(json.loads(proc2.stdout)["elements"]) == 4


def test_typea_command():
    proc = run_cli("typea", "--n", "2", "--orientation", "L")
    assert proc.returncode == 0
    report = json.loads(proc.stdout)
    checks = report["runs"][0]["checks"]
    assert checks["counts"]["mutable_intervals"] == 12
    assert all(c["ok"] for c in checks.values())


def test_typea_all_orientations():
    proc = run_cli("typea", "--n", "2", "--all-orientations", "--fast")
    assert proc.returncode == 0
    report = json.loads(proc.stdout)
    assert len(report["runs"]) == 2
    assert all(r["checks"]["counts"]["mutable_intervals"] == 12 for r in report["runs"])


def test_geom_command():
    proc = run_cli("geom", "--n", "2")
    assert proc.returncode == 0
    report = json.loads(proc.stdout)
    assert report["checks"]["counts"]["trees"] == 12
    assert report["checks"]["equivariance"]["ok"]
    assert report["checks"]["cycle_multiset_vs_typea"]["ok"]


def test_crosscheck_command():
    proc = run_cli("crosscheck", fixture_path("appendix9.json"))
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["result"]["agree"] is True
    proc2 = run_cli("crosscheck", "--gen", "boolean", "3")
    assert proc2.returncode == 0


def test_json_output_file(tmp_path):
    out = tmp_path / "report.json"
    proc = run_cli("check", fixture_path("b2.json"), "--json", str(out))
    assert proc.returncode == 0
    assert json.loads(out.read_text())["ok"] is True
    assert out.read_text() == proc.stdout


def test_max_steps_flag():
    proc = run_cli("check", "--gen", "chainprod", "4", "4", "--max-steps", "1")
    assert proc.returncode == 2
    assert "no period found" in proc.stderr


def test_field_flag():
    proc = run_cli("check", fixture_path("pentagon.json"), "--derived", "--field", "fp:32003")
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["ok"] is True
