#!/usr/bin/env python3
"""End-to-end checks of the pareto-records executable.

usage: cli_test.py BINARY CASE
"""
import filecmp
import json
import os
import subprocess
import sys
import tempfile
import xml.etree.ElementTree as ET

BIN = sys.argv[1]


def run(*args, cwd=None):
    return subprocess.run([BIN, *args], capture_output=True, text=True, cwd=cwd)


def expect(cond, msg):
    if not cond:
        raise AssertionError(msg)


def same_tree(a, b):
    cmp = filecmp.dircmp(a, b)
    if cmp.left_only or cmp.right_only or cmp.diff_files or cmp.funny_files:
        return False
    return all(filecmp.cmp(os.path.join(a, f), os.path.join(b, f), shallow=False) for f in cmp.common_files)


def case_simulate_deterministic(tmp):
    args = ["simulate", "--d", "2", "--n-max", "10000", "--trials", "100", "--seed", "42"]
    a = run(*args, "--out-dir", os.path.join(tmp, "a"), "--threads", "1")
    b = run(*args, "--out-dir", os.path.join(tmp, "b"), "--threads", "4")
    expect(a.returncode == 0 and b.returncode == 0, a.stderr + b.stderr)
    expect(a.stdout.replace("/a", "") == b.stdout.replace("/b", ""), "summary lines differ")
    expect(same_tree(os.path.join(tmp, "a"), os.path.join(tmp, "b")), "output trees differ")
    summary = json.loads(a.stdout)
    expect(summary["trials"] == 100 and summary["rows"] > 0, summary)
    for f in ["config.json", "trials.csv", "aggregate.csv", "ks.csv", "lil.csv"]:
        expect(os.path.exists(os.path.join(tmp, "a", f)), f)
    c = run(*args[:-1], "43", "--out-dir", os.path.join(tmp, "c"))
    expect(not filecmp.cmp(os.path.join(tmp, "a", "trials.csv"), os.path.join(tmp, "c", "trials.csv"), shallow=False),
           "different seeds gave identical trials")


def case_simulate_invalid_config(tmp):
    for extra in (["--d", "0"], ["--trials", "0"], ["--n-max", "0"], ["--d", "-1"], ["--bogus-flag"],
                  ["--checkpoint-ratio", "1"], ["--checkpoints", "99999999", "--n-max", "100"]):
        r = run("simulate", "--out-dir", os.path.join(tmp, "x"), *extra)
        expect(r.returncode == 2, f"{extra}: exit {r.returncode}")
    cfg = os.path.join(tmp, "bad.json")
    with open(cfg, "w") as f:
        json.dump({"d": 2, "unknown_key": 1}, f)
    expect(run("simulate", "--config", cfg, "--out-dir", os.path.join(tmp, "y")).returncode == 2, "unknown key")
    with open(cfg, "w") as f:
        f.write("{not json")
    expect(run("simulate", "--config", cfg, "--out-dir", os.path.join(tmp, "y")).returncode == 2, "parse error")


def case_simulate_missing_parent(tmp):
    r = run("simulate", "--n-max", "100", "--out-dir", os.path.join(tmp, "missing", "child"))
    expect(r.returncode == 3, f"exit {r.returncode}: {r.stderr}")


def case_config_and_overrides(tmp):
    cfg = os.path.join(tmp, "cfg.json")
    with open(cfg, "w") as f:
        json.dump({"d": 3, "n_max": 2000, "trials": 4, "master_seed": 9, "checkpoints": [100, 2000],
                   "records_time": True, "bhat_columns": 2}, f)
    r = run("simulate", "--config", cfg, "--trials", "3", "--out-dir", os.path.join(tmp, "o"))
    expect(r.returncode == 0, r.stderr)
    written = json.load(open(os.path.join(tmp, "o", "config.json")))
    expect(written["d"] == 3 and written["trials"] == 3 and written["checkpoints"] == [100, 2000], written)
    header = open(os.path.join(tmp, "o", "trials.csv")).readline().strip()
    expect(header == "trial,clock,n,m,r,beta,f_minus,f_plus,width,dim_max_min,bhat_1,bhat_2,"
                     "norm_fplus,norm_width,norm_r", header)


def case_analyze(tmp):
    out = os.path.join(tmp, "run")
    expect(run("simulate", "--d", "3", "--n-max", "20000", "--trials", "5", "--records-time",
               "--out-dir", out).returncode == 0, "simulate")
    agg = open(os.path.join(out, "aggregate.csv")).read()
    r = run("analyze", "--in-dir", out, "--out-dir", os.path.join(tmp, "re"))
    expect(r.returncode == 0, r.stdout + r.stderr)
    s = json.loads(r.stdout)
    expect(s["invariant_violations"] == 0 and s["switching_failures"] == 0, s)
    expect(open(os.path.join(tmp, "re", "aggregate.csv")).read() == agg, "analyze changed the aggregate")
    # A tampered file is caught.
    lines = open(os.path.join(out, "trials.csv")).read().splitlines()
    fields = lines[-1].split(",")
    fields[8] = "-1"  # width
    lines[-1] = ",".join(fields)
    with open(os.path.join(out, "trials.csv"), "w") as f:
        f.write("\n".join(lines) + "\n")
    expect(run("analyze", "--in-dir", out).returncode == 1, "tampered width not detected")
    expect(run("analyze", "--in-dir", os.path.join(tmp, "nope")).returncode == 3, "missing input dir")


def case_exact(tmp):
    r = run("exact", "p_record", "--n", "100", "--d", "1")
    expect(r.returncode == 0, r.stderr)
    j = json.loads(r.stdout)
    expect(j["op"] == "p_record" and j["args"] == {"n": 100, "d": 1}, j)
    expect(abs(j["value"] - 0.01) < 1e-12, j)
    for args in (["mean_records", "--n", "3", "--d", "2"], ["gamma_derivative", "--j", "2"],
                 ["tm_centering", "--m", "2", "--d", "2"], ["y_density", "--n", "10", "--d", "2", "--y", "2.5"],
                 ["lower_bound_probability", "--n", "22026.465794806718", "--b", "5", "--d", "2"],
                 ["sample_y", "--n", "1000", "--d", "2", "--seed", "3", "--trial", "0"],
                 ["asym_mean_records", "--n", "1000", "--d", "2", "--order", "2"]):
        r = run("exact", *args)
        expect(r.returncode == 0, f"{args}: {r.stderr}")
        raw = r.stdout.split('"value":')[1].rstrip().rstrip("}")
        expect("%.17g" % float(raw) == raw, f"{args}: {raw} does not round-trip")
    expect(abs(json.loads(run("exact", "mean_records", "--n", "3", "--d", "2").stdout)["value"] - 85 / 36) < 1e-14,
           "mean_records(3,2)")
    a = run("exact", "sample_y", "--n", "1000", "--d", "2", "--seed", "3", "--trial", "0").stdout
    b = run("exact", "sample_y", "--n", "1000", "--d", "2", "--seed", "3", "--trial", "0").stdout
    expect(a == b, "sample_y not deterministic")
    for bad in (["p_record", "--n", "3"], ["p_record", "--n", "3", "--d", "2", "--y", "1"], ["nosuchop"],
                ["gamma_derivative", "--j", "9"], ["fplus_centering", "--n", "2", "--d", "2"],
                ["lower_bound_probability", "--n", "100", "--b", "1", "--d", "1"], ["p_record", "--n", "2.5", "--d", "2"]):
        expect(run("exact", *bad).returncode == 2, f"{bad} accepted")


def case_selftest(tmp):
    r = run("selftest")
    expect(r.returncode == 0, r.stdout + r.stderr)
    for suite in ["dominance", "record-oracle", "f-minus-oracle", "staircase-vs-bnb", "frontier-bounds",
                  "sweeten", "exact-identities"]:
        expect(suite in r.stdout, suite)
    f = run("selftest", "--inject-fault", "dominance")
    expect(f.returncode == 1, f.stdout)
    expect("failed: dominance" in f.stdout, f.stdout)
    expect(run("selftest", "--inject-fault", "other").returncode == 2, "unknown fault accepted")


def segments(svg_text):
    root = ET.fromstring(svg_text)
    ns = "{http://www.w3.org/2000/svg}"
    poly = root.findall(f".//{ns}polyline")
    if not poly:
        return root, None
    pts = [tuple(map(float, p.split(","))) for p in poly[0].get("points").split()]
    h = sum(1 for a, b in zip(pts, pts[1:]) if a[1] == b[1] and a[0] != b[0])
    v = sum(1 for a, b in zip(pts, pts[1:]) if a[0] == b[0] and a[1] != b[1])
    return root, (h, v)


def case_render(tmp):
    recs = os.path.join(tmp, "recs.csv")
    with open(recs, "w") as f:
        f.write("x1,x2\n1,3\n2,2\n3,1\n")
    out = os.path.join(tmp, "f.svg")
    r = run("render", "--records", recs, "--out", out)
    expect(r.returncode == 0, r.stderr)
    root, hv = segments(open(out).read())
    expect(hv == (4, 4), hv)
    ns = "{http://www.w3.org/2000/svg}"
    guides = [l for l in root.iter(f"{ns}line") if "guide" in (l.get("class") or "")]
    expect(len(guides) == 2, guides)

    empty = os.path.join(tmp, "empty.csv")
    open(empty, "w").close()
    r = run("render", "--records", empty)
    expect(r.returncode == 0, r.stderr)
    root, hv = segments(r.stdout)
    expect(hv is None and len(list(root.iter(f"{ns}line"))) == 2, "empty book should draw axes only")

    r = run("render", "--n", "5000", "--seed", "7", "--trial", "2")
    expect(r.returncode == 0, r.stderr)
    ET.fromstring(r.stdout)
    expect(r.stdout == run("render", "--n", "5000", "--seed", "7", "--trial", "2").stdout, "render not deterministic")

    d3 = os.path.join(tmp, "d3.csv")
    with open(d3, "w") as f:
        f.write("1,2,3\n")
    expect(run("render", "--records", d3).returncode == 2, "d = 3 accepted")
    expect(run("render", "--n", "10", "--d", "3").returncode == 2, "--d 3 accepted")
    expect(run("render").returncode == 2, "no input accepted")


def case_usage(tmp):
    expect(run().returncode == 2, "no subcommand")
    expect(run("frobnicate").returncode == 2, "unknown subcommand")
    expect(run("--help").returncode == 0, "help")


CASES = {name[5:]: fn for name, fn in globals().items() if name.startswith("case_")}

if __name__ == "__main__":
    case = sys.argv[2]
    with tempfile.TemporaryDirectory() as tmp:
        CASES[case](tmp)
    print(f"cli {case}: ok")
