#!/usr/bin/env python3
"""End-to-end checks of the seglab command line tool.

Usage: test_cli.py /path/to/seglab
Exits nonzero on the first failure; prints one line per check.
"""
import csv
import filecmp
import json
import math
import subprocess
import sys
import tempfile
from pathlib import Path

BIN = Path(sys.argv[1]).resolve()
WORK = Path(tempfile.mkdtemp(prefix="seglab_cli_"))
CHECKS = 0


def run(*args, cwd=None):
    return subprocess.run([str(BIN), *args], capture_output=True, text=True, cwd=cwd)


def ok(cond, label):
    global CHECKS
    CHECKS += 1
    print(f"{'ok' if cond else 'FAIL'} - {label}")
    if not cond:
        sys.exit(1)


def read_rows(path):
    with open(path, newline="") as fh:
        return list(csv.DictReader(fh))


def main():
    # --- exact ---------------------------------------------------------
    d = WORK / "exact32"
    r = run("exact", "--n", "32", "--out", str(d))
    ok(r.returncode == 0, "exact exits 0")
    for name in ("manifest.json", "exact.json", "field.csv", "profile.csv"):
        ok((d / name).is_file(), f"exact writes {name}")
    info = json.loads((d / "exact.json").read_text())
    ok(abs(info["c_infty"] - 1.5 * math.pi) < 1e-12, "exact.json c_infty")
    ok(info["n"] == 32, "exact.json n")
    rows = read_rows(d / "profile.csv")
    ok(len(rows) >= 9, "profile.csv has the ladder")
    ok(all(float(row["N"]) == 0.75 for row in rows), "profile N identically 3/4")
    manifest = json.loads((d / "manifest.json").read_text())
    ok(manifest["command"] == "exact", "manifest records the command")

    # --- usage errors --------------------------------------------------
    r = run("exact", "--n", "32")
    ok(r.returncode == 1, "missing --out exits 1")
    r = run("exact", "--n", "32", "--bogus", "--out", str(WORK / "never"))
    ok(r.returncode == 1 and not (WORK / "never").exists(), "unknown flag exits 1, no outputs")
    r = run("upside-down")
    ok(r.returncode == 1, "unknown subcommand exits 1")
    r = run()
    ok(r.returncode == 1, "no subcommand exits 1")

    bad = WORK / "bad.json"
    bad.write_text('{"n": 32, "sprocket": 7}\n')
    d = WORK / "badrun"
    r = run("solve", "--config", str(bad), "--out", str(d))
    ok(r.returncode == 1, "unknown config key exits 1")
    ok(r.stderr.strip() != "", "config error goes to stderr")
    ok(not (d / "report.json").exists(), "failed run leaves no report")

    bad.write_text("{not json")
    r = run("solve", "--config", str(bad), "--out", str(WORK / "badrun2"))
    ok(r.returncode == 1, "malformed config exits 1")

    r = run("solve", "--n", "32", "--trace", "constant:1,-2,0", "--out", str(WORK / "badtrace"))
    ok(r.returncode == 1, "negative trace exits 1")

    # --- solve ---------------------------------------------------------
    d1 = WORK / "solve_a"
    r = run("solve", "--n", "48", "--beta", "1000", "--out", str(d1))
    ok(r.returncode == 0, "solve exits 0 when converged")
    rep = json.loads((d1 / "report.json").read_text())
    ok(rep["converged"] is True, "report converged")
    ok(rep["beta"] == 1000.0, "report beta")
    ok(rep["energy"]["total"] == rep["energy"]["dirichlet"] + rep["energy"]["penalty"],
       "report energy adds up")
    steps = read_rows(d1 / "energy.csv")
    totals = [float(row["total"]) for row in steps]
    ok(all(b <= a + 1e-12 for a, b in zip(totals, totals[1:])), "energy.csv non-increasing")

    # reruns are byte-identical apart from the manifest timestamp
    d2 = WORK / "solve_b"
    run("solve", "--n", "48", "--beta", "1000", "--out", str(d2))
    ok(filecmp.cmp(d1 / "field.csv", d2 / "field.csv", shallow=False), "field.csv reproducible")
    ok(filecmp.cmp(d1 / "report.json", d2 / "report.json", shallow=False),
       "report.json reproducible")
    m1 = json.loads((d1 / "manifest.json").read_text())
    m2 = json.loads((d2 / "manifest.json").read_text())
    m1.pop("timestamp"), m2.pop("timestamp")
    m1.pop("outputDir"), m2.pop("outputDir")
    ok(m1 == m2, "manifest differs only in timestamp and path")

    # unconverged run exits 2 but still writes outputs
    cfg = WORK / "tiny.json"
    cfg.write_text('{"n": 48, "solver": {"maxSweeps": 5}}\n')
    d3 = WORK / "solve_c"
    r = run("solve", "--config", str(cfg), "--beta", "1000", "--out", str(d3))
    ok(r.returncode == 2, "unconverged solve exits 2")
    rep = json.loads((d3 / "report.json").read_text())
    ok(rep["converged"] is False, "unconverged report written")

    # hard mode through config
    cfg = WORK / "hard.json"
    cfg.write_text('{"n": 48, "solver": {"mode": "HARD_CONSTRAINT"}}\n')
    d4 = WORK / "solve_hard"
    r = run("solve", "--config", str(cfg), "--out", str(d4))
    ok(r.returncode in (0, 2), "hard solve runs")
    rep = json.loads((d4 / "report.json").read_text())
    ok(rep["penaltyResidual"] == 0.0, "hard solve is exactly feasible")

    # --- sweep ---------------------------------------------------------
    d5 = WORK / "sweep"
    r = run("sweep", "--n", "48", "--beta", "10", "--beta", "1000", "--beta", "100000",
            "--out", str(d5))
    ok(r.returncode == 0, "sweep exits 0")
    sw = json.loads((d5 / "sweep.json").read_text())
    ok(len(sw["reports"]) == 3, "sweep report per rung")
    ok((d5 / "field_b2.csv").is_file() and (d5 / "energy_b2.csv").is_file(),
       "sweep writes per-rung files")
    res = [rep["penaltyResidual"] for rep in sw["reports"]]
    ok(all(b <= a for a, b in zip(res, res[1:])), "sweep residuals non-increasing")
    ok(sw["penaltyDrop"] >= 100.0, "sweep residual drops 100x")

    # --- frequency -----------------------------------------------------
    dex = WORK / "exact128"
    run("exact", "--n", "128", "--out", str(dex))
    d6 = WORK / "freq"
    r = run("frequency", "--field", str(dex / "field.csv"), "--center", "0", "0",
            "--rmin", "0.2", "--rmax", "0.8", "--k", "10", "--out", str(d6))
    ok(r.returncode == 0, "frequency exits 0")
    summ = json.loads((d6 / "summary.json").read_text())
    ok(abs(summ["gamma"] - 0.75) <= 0.02, "frequency gamma near 3/4")
    ok(summ["monotoneOk"] is True, "frequency profile monotone")
    ok(summ["pohozaevWorst"] <= 0.05, "sphere identity defect small")
    rows = read_rows(d6 / "profile.csv")
    ok(len(rows) == 11, "frequency ladder length")
    ok(all(abs(float(row["N"]) - 0.75) <= 0.03 for row in rows), "frequency N near 3/4")

    r = run("frequency", "--field", str(dex / "field.csv"), "--center", "0", "0",
            "--rmin", "0.1", "--rmax", "5.0", "--out", str(WORK / "freqbad"))
    ok(r.returncode == 1, "out-of-domain ladder exits 1")

    # --- nodal ---------------------------------------------------------
    d7 = WORK / "nodal"
    r = run("nodal", "--field", str(dex / "field.csv"), "--tau", "holder", "--out", str(d7))
    ok(r.returncode == 0, "nodal exits 0")
    nd = json.loads((d7 / "nodal.json").read_text())
    ok(len(nd["triple_points"]) == 1, "one triple point")
    tp = nd["triple_points"][0]
    ok(math.hypot(tp["x"], tp["y"]) <= 0.05, "triple point at the origin")
    ok(nd["loop_count"] == 0, "no loops")
    for name in nd["interface_files"]:
        ok((d7 / name).is_file(), f"nodal writes {name}")

    # partition checks are a tight-threshold property: default tau, not holder
    d7b = WORK / "nodal_default"
    r = run("nodal", "--field", str(dex / "field.csv"), "--out", str(d7b))
    ok(r.returncode == 0, "nodal default tau exits 0")
    ndb = json.loads((d7b / "nodal.json").read_text())
    ok(ndb["partition_ok"] is True and ndb["zero_closure_ok"] is True, "partition checks pass")

    # --- verify --------------------------------------------------------
    d8 = WORK / "verify"
    r = run("verify", "--level", "quick", "--out", str(d8))
    ok(r.returncode in (0, 3), "verify runs to completion")
    lines = [ln for ln in r.stdout.splitlines() if ln.startswith("[")]
    ok(len(lines) == 10, "verify prints one line per criterion")
    ok(all(ln.startswith(("[PASS]", "[FAIL]")) for ln in lines), "verify line format")
    vj = json.loads((d8 / "verify.json").read_text())
    ok(len(vj["criteria"]) == 10, "verify.json lists the criteria")

    r = run("verify", "--level", "bogus")
    ok(r.returncode == 1, "bad verify level exits 1")

    print(f"all {CHECKS} cli checks passed")


if __name__ == "__main__":
    main()
