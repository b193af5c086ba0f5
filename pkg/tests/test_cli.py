"""End-to-end runs of the command-line interface via subprocess."""

import csv
import hashlib
import json
import math
import subprocess
import sys

DERIVED_KEYS = ["g", "kappa2", "omega_shift", "x_th", "z_cl2", "z_qm2", "t_cl", "t_qm"]


def _run(*args):
    return subprocess.run(
        [sys.executable, "-m", "hybridmirror", *args],
        capture_output=True, text=True,
    )


def _read_csv(path):
    with open(path, newline="") as fh:
        return list(csv.DictReader(fh))


def test_derive_schema_and_report(tmp_path):
    out = tmp_path / "o"
    proc = _run("derive", "--out", str(out))
    assert proc.returncode == 0, proc.stderr

    derived = json.loads((out / "derived.json").read_text())
    assert list(derived) == DERIVED_KEYS

    report = json.loads((out / "derive_report.json").read_text())
    assert report["scenario"] == "derive"
    assert report["passed"] is True
    assert "workers" not in report["settings"]
    assert all(c["passed"] for c in report["checks"])
    # stdout carries the same report
    assert json.loads(proc.stdout) == report

    # manifest digests must match the emitted bytes
    for entry in report["files"]:
        blob = (out / entry["path"]).read_bytes()
        assert hashlib.sha256(blob).hexdigest() == entry["sha256"]
        assert len(blob) == entry["bytes"]


def test_derive_byte_determinism(tmp_path):
    a, b = tmp_path / "a", tmp_path / "b"
    assert _run("derive", "--out", str(a)).returncode == 0
    assert _run("derive", "--out", str(b)).returncode == 0
    for name in ("derived.json", "derive_report.json"):
        assert (a / name).read_bytes() == (b / name).read_bytes()


def test_flag_overrides_config(tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"seed": 7, "points": 50}))
    out = tmp_path / "o"
    proc = _run("derive", "--config", str(cfg), "--seed", "9", "--out", str(out))
    assert proc.returncode == 0
    report = json.loads((out / "derive_report.json").read_text())
    assert report["settings"]["seed"] == 9
    assert report["settings"]["points"] == 50


def test_si_config_mode(tmp_path):
    si = {
        "mass": 1e-12,
        "omega_mirror": 2.0 * math.pi * 500.0,
        "omega_photon": 2.0 * math.pi * 2.82e14,
        "length": 1e-2,
        "temperature": 1e-3,
    }
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"si": si}))
    out = tmp_path / "o"
    proc = _run("derive", "--config", str(cfg), "--out", str(out))
    assert proc.returncode == 0
    derived = json.loads((out / "derived.json").read_text())
    assert derived["g"] == si["omega_photon"] / si["length"]
    assert derived["x_th"] > 0


def test_unknown_config_key_exits_2(tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"seeed": 7}))
    proc = _run("derive", "--config", str(cfg), "--out", str(tmp_path / "o"))
    assert proc.returncode == 2
    assert proc.stderr.startswith("error:")
    assert "seeed" in proc.stderr


def test_bad_points_exits_2(tmp_path):
    proc = _run("derive", "--points", "1", "--out", str(tmp_path / "o"))
    assert proc.returncode == 2
    assert "points" in proc.stderr


def test_missing_config_exits_3(tmp_path):
    proc = _run("derive", "--config", str(tmp_path / "nope.json"),
                "--out", str(tmp_path / "o"))
    assert proc.returncode == 3


def test_unknown_scenario_exits_2(tmp_path):
    proc = _run("frobnicate", "--out", str(tmp_path / "o"))
    assert proc.returncode == 2
    assert "invalid choice" in proc.stderr


def test_trajectory_outputs(tmp_path):
    out = tmp_path / "o"
    proc = _run("trajectory", "--points", "300", "--out", str(out))
    assert proc.returncode == 0, proc.stderr
    with open(out / "trajectory.csv") as fh:
        header = fh.readline().strip()
    assert header == "tau,q,pi,aA,bA,aB,bB,nA,nB,energy"
    assert not (out / "trajectory.svg").exists()

    out2 = tmp_path / "o2"
    proc = _run("trajectory", "--points", "300", "--svg", "--out", str(out2))
    assert proc.returncode == 0
    assert (out2 / "trajectory.svg").exists()
    report = json.loads((out2 / "trajectory_report.json").read_text())
    assert "trajectory.svg" in [f["path"] for f in report["files"]]


def test_visibility_revival_rows_exact(tmp_path):
    out = tmp_path / "o"
    proc = _run("visibility", "--points", "200", "--out", str(out))
    assert proc.returncode == 0, proc.stderr

    report = json.loads((out / "visibility_report.json").read_text())
    names = [f["path"] for f in report["files"]]
    assert "visibility_T1e-03.csv" in names
    assert "visibility_T1e-04.csv" in names
    assert "visibility_summary.json" in names

    rows = _read_csv(out / "visibility_T1e-03.csv")
    revivals = [r for r in rows
                if float(r["tau"]) in (0.0, 2.0 * math.pi, 4.0 * math.pi)]
    assert len(revivals) == 3
    # the revival grid points are injected exactly, so the printed
    # visibilities must be the literal 0.5
    for r in revivals:
        assert r["vis_classical"] == "0.5"
        assert r["vis_quantum"] == "0.5"
        assert r["vis_pointlike"] == "0.5"

    summary = json.loads((out / "visibility_summary.json").read_text())
    assert summary["T1e-03"]["t_cl"] == 1.1025708463436857e-06
    assert summary["T1e-03"]["eta_max"] > 1.0


def test_detect_models_and_exact_sum(tmp_path):
    out = tmp_path / "o"
    proc = _run("detect", "--points", "120", "--temperature", "1e-3",
                "--out", str(out))
    assert proc.returncode == 0, proc.stderr
    report = json.loads((out / "detect_report.json").read_text())
    names = [f["path"] for f in report["files"]]
    assert names.count("detect_T1e-03.csv") == 1
    assert not any(n.startswith("detect_T1e-04") for n in names)

    rows = _read_csv(out / "detect_T1e-03.csv")
    assert {r["model"] for r in rows} == {
        "pointlike", "classical_thermal", "quantum_thermal"
    }
    for r in rows:
        assert float(r["p1"]) + float(r["p2"]) == 1.0
        if float(r["tau"]) == 0.0:
            assert r["p1"] == "1.0"


def test_eta_sweep_monotone(tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"eta": {"n_temps": 6}}))
    out = tmp_path / "o"
    proc = _run("eta-sweep", "--config", str(cfg), "--out", str(out))
    assert proc.returncode == 0, proc.stderr
    rows = _read_csv(out / "eta_sweep.csv")
    assert len(rows) == 6
    etas = [float(r["eta_max_minus_one"]) for r in rows]
    assert all(a > b for a, b in zip(etas, etas[1:]))
    assert all(0.0 < e < 1e-2 for e in etas)
    assert (out / "eta_sweep_summary.json").exists()


def test_mc_convergence_ladder_and_workers(tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"mc_ladder": [500, 2000, 8000]}))
    a, b = tmp_path / "a", tmp_path / "b"
    pa = _run("mc-convergence", "--config", str(cfg), "--workers", "1",
              "--out", str(a))
    pb = _run("mc-convergence", "--config", str(cfg), "--workers", "4",
              "--out", str(b))
    assert pa.returncode == 0, pa.stderr
    assert pb.returncode == 0, pb.stderr

    rows = _read_csv(a / "mc_convergence.csv")
    assert [r["n"] for r in rows] == ["500", "2000", "8000"]
    # worker count must not leak into any output byte
    for name in ("mc_convergence.csv", "mc_convergence_report.json"):
        assert (a / name).read_bytes() == (b / name).read_bytes()
