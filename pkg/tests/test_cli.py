"""CLI exit-code contract, artifact schemas, and reproducibility."""

import json
import shutil
import subprocess
import sys
from importlib import resources
from pathlib import Path

import pytest

from expansionlab.cli import cmd_expand, cmd_gauge, cmd_propagate, main
from expansionlab.scenario import load_scenario

SCENARIOS = Path(resources.files("expansionlab") / "data" / "scenarios")
GOLDEN = Path(resources.files("expansionlab") / "data" / "golden")


def run_cli(*args, env_extra=None):
    import os

    env = dict(os.environ)
    if env_extra:
        env.update(env_extra)
    return subprocess.run([sys.executable, "-m", "expansionlab", *args],
                          capture_output=True, text=True, env=env)


def test_expand_box_scenario_writes_artifacts(tmp_path):
    out = tmp_path / "out"
    code, stats = cmd_expand(load_scenario(SCENARIOS / "box_roundtrip.scn"),
                             out)
    assert code == 0
    assert stats["parseval_defect"] < 1e-10
    assert stats["verdict"] == "convergent"
    for name in ("coefficients.csv", "convergence_report.txt",
                 "partial_sums.svg", "manifest.json"):
        assert (out / name).exists()

    man = json.loads((out / "manifest.json").read_text())
    assert man["command"] == "expand"
    assert man["tool_version"]
    recorded = {o["path"]: o["sha256"] for o in man["outputs"]}
    import hashlib
    for name, sha in recorded.items():
        assert hashlib.sha256(
            (out / name).read_bytes()).hexdigest() == sha


def test_expand_gaussian_scenario(tmp_path):
    code, stats = cmd_expand(load_scenario(SCENARIOS / "box_gaussian.scn"),
                             tmp_path / "out")
    assert code == 0
    assert stats["parseval_defect"] < 1e-6
    assert stats["round_trip"] < 1e-5
    assert stats["verdict"] == "convergent"


def test_propagate_scenario_and_audit_artifacts(tmp_path):
    out = tmp_path / "out"
    code, stats = cmd_propagate(load_scenario(SCENARIOS / "box_dipole.scn"),
                                out)
    assert code == 0
    assert stats["audit_passed"]
    assert stats["monotone"]
    lines = (out / "euler_trajectory.csv").read_text().splitlines()
    assert lines[0].startswith("step,t,norm_sq,re_c1,im_c1")
    assert len(lines) == 1002
    audit = (out / "norm_audit.txt").read_text()
    assert "pass" in audit
    assert (out / "unitary_trajectory.csv").exists()
    assert (out / "norms.svg").exists()


def test_propagate_seeded_scenario_reproducible(tmp_path):
    scn = load_scenario(SCENARIOS / "random_hermitian.scn")
    _, s1 = cmd_propagate(scn, tmp_path / "a", seed=123)
    _, s2 = cmd_propagate(scn, tmp_path / "b", seed=123)
    _, s3 = cmd_propagate(scn, tmp_path / "c", seed=124)
    assert s1["euler_final_norm"] == s2["euler_final_norm"]
    assert s1["euler_final_norm"] != s3["euler_final_norm"]
    assert (tmp_path / "a" / "euler_trajectory.csv").read_bytes() == \
        (tmp_path / "b" / "euler_trajectory.csv").read_bytes()
    man = json.loads((tmp_path / "a" / "manifest.json").read_text())
    assert man["seed"] == 123


def test_gauge_jump_scenario(tmp_path):
    out = tmp_path / "out"
    code, stats = cmd_gauge(load_scenario(SCENARIOS / "gauge_step.scn"), out)
    assert code == 0
    assert abs(stats["jump_metric"] - stats["amplitude"]) < 1e-8
    assert stats["max_covariant_discrepancy"] < 1e-10
    lines = (out / "observables.csv").read_text().splitlines()
    assert lines[0] == "t,gauge_label,vx,vy,vz,px,py,pz"
    assert (out / "summary.txt").exists()
    assert (out / "velocity.svg").exists()


def test_rerun_artifacts_are_byte_identical(tmp_path):
    scn = load_scenario(SCENARIOS / "box_roundtrip.scn")
    cmd_expand(scn, tmp_path / "a")
    cmd_expand(scn, tmp_path / "b")
    for name in ("coefficients.csv", "convergence_report.txt",
                 "partial_sums.svg", "manifest.json"):
        assert (tmp_path / "a" / name).read_bytes() == \
            (tmp_path / "b" / name).read_bytes()


def test_exit_1_on_missing_scenario_file(tmp_path):
    r = run_cli("expand", "--scenario", str(tmp_path / "nope.scn"),
                "--out", str(tmp_path / "out"))
    assert r.returncode == 1
    assert "error" in r.stderr


def test_exit_1_on_missing_required_key(tmp_path):
    path = tmp_path / "bad.scn"
    path.write_text("expansionlab-scenario v1\nkind = gauge\nname = g\n")
    r = run_cli("gauge", "--scenario", str(path),
                "--out", str(tmp_path / "out"))
    assert r.returncode == 1
    assert "experiment" in r.stderr


def test_exit_1_on_malformed_scenario(tmp_path):
    path = tmp_path / "bad.scn"
    path.write_text("wrong header\n")
    r = run_cli("expand", "--scenario", str(path),
                "--out", str(tmp_path / "out"))
    assert r.returncode == 1


def test_exit_2_on_forced_non_convergence(tmp_path):
    r = run_cli("expand",
                "--scenario", str(SCENARIOS / "landau_planewave.scn"),
                "--out", str(tmp_path / "out"),
                "--tolerance-scale", "1e-6")
    assert r.returncode == 2
    # artifacts still land, flagged
    report = (tmp_path / "out" / "convergence_report.txt").read_text()
    assert "NO" in report


def test_exit_3_on_mismatched_gauge_pair(tmp_path):
    r = run_cli("gauge",
                "--scenario", str(SCENARIOS / "gauge_mismatch.scn"),
                "--out", str(tmp_path / "out"))
    assert r.returncode == 3
    assert "field-difference norm" in r.stderr


def test_reproduce_all_exit_1_on_empty_scenario_dir(tmp_path):
    empty = tmp_path / "scn"
    empty.mkdir()
    r = run_cli("reproduce-all", "--scenario-dir", str(empty),
                "--out", str(tmp_path / "out"))
    assert r.returncode == 1
    assert "no scenario files" in r.stderr


def test_reproduce_all_exit_3_on_tampered_golden(tmp_path):
    tampered = tmp_path / "golden"
    shutil.copytree(GOLDEN, tampered)
    path = tampered / "gauge_jump.json"
    g = json.loads(path.read_text())
    g["amplitude"] = 0.25  # no longer what the scenario drives
    path.write_text(json.dumps(g))
    r = run_cli("reproduce-all", "--out", str(tmp_path / "out"),
                env_extra={"EXPANSIONLAB_GOLDEN_DIR": str(tampered)})
    assert r.returncode == 3
    assert "FAIL" in r.stdout
    assert "velocity-jump" in r.stdout


def test_main_requires_subcommand():
    with pytest.raises(SystemExit):
        main([])
