"""End-to-end checks of the abelkit command line.

usage: cli_test.py ABELKIT_BINARY SCHEMA_DIR
"""

import json
import pathlib
import subprocess
import sys
import tempfile

import jsonschema

BIN = sys.argv[1]
SCHEMAS = pathlib.Path(sys.argv[2])

VEIN = [
    "--a", "1", "--b", "-2", "--x-min", "1", "--x-max", "3",
    "--f0", "0",
    "--f1", "-2*b/(b*x+a^2)",
    "--f2", "3*(a*x+b^2)/(b*x+a^2)",
    "--f3", "(x^3-3*a*b*x-a^3-b^3)/(b*x+a^2)",
]

failures = []


def check(cond, what):
    print(("ok   " if cond else "FAIL ") + what)
    if not cond:
        failures.append(what)


def run(*args):
    return subprocess.run([BIN, *args], capture_output=True, text=True)


def schema(name):
    return json.loads((SCHEMAS / f"{name}.schema.json").read_text())


def valid(doc, name, what):
    try:
        jsonschema.validate(doc, schema(name))
        check(True, what)
    except jsonschema.ValidationError as e:
        check(False, f"{what}: {e.message}")


def error_of(proc):
    lines = proc.stderr.strip().splitlines()
    return json.loads(lines[-1]) if lines else None


def snapshot(directory):
    return {p.name: p.read_bytes() for p in sorted(pathlib.Path(directory).iterdir())}


with tempfile.TemporaryDirectory() as tmp:
    tmp = pathlib.Path(tmp)

    # repeated runs give identical bytes
    commands = {
        "phi": ["phi"],
        "phi-json": ["--format", "json", "phi"],
        "portrait": ["oscillator", "portrait", "--grid", "3x3"],
        "vein": ["vein", "solve"],
        "solve-const": ["solve-const", "--A0", "0", "--A1", "2", "--A2", "-3", "--A3", "1", "--y0", "0.5"],
    }
    outputs = {}
    for name, args in commands.items():
        runs = []
        for k in range(2):
            d = tmp / f"{name}-{k}"
            p = run("--out", str(d), *args)
            check(p.returncode == 0, f"{name} run {k} exits 0")
            runs.append(snapshot(d))
        check(runs[0] == runs[1] and runs[0], f"{name} outputs are byte-identical across runs")
        outputs[name] = tmp / f"{name}-0"

    # schemas of every JSON artifact
    valid(json.loads((outputs["phi-json"] / "phi.json").read_text()), "table", "phi json table")
    valid(json.loads((outputs["portrait"] / "fixed_points.json").read_text()), "fixed_points", "fixed points")
    valid(json.loads((outputs["vein"] / "vein_solve.json").read_text()), "vein_solve", "vein solve summary")
    valid(json.loads((outputs["solve-const"] / "solve_const.json").read_text()), "solve_const", "solve-const summary")
    d = tmp / "tables"
    run("--out", str(d), "--format", "json", "oscillator", "portrait", "--grid", "2x2")
    for stem in ("trajectories", "isoclines", "coefficients"):
        valid(json.loads((d / f"{stem}.json").read_text()), "table", f"{stem} json table")

    phi_csv = (outputs["phi"] / "phi.csv").read_text().splitlines()
    check(phi_csv[0] == "x,phi1,phi2,phi3" and len(phi_csv) == 602, "phi csv header and 601 rows")

    # fixed point of (1, -2)
    fp = json.loads((outputs["portrait"] / "fixed_points.json").read_text())["fixed_points"][0]
    check(fp["location"] == {"re": -1.0, "im": 0.0}, "real fixed point at a + b = -1")
    check(fp["classification"] == "stable spiral", "real fixed point is a stable spiral")

    # analyze on the rational family normalizes to I = -1
    p = run("analyze", *VEIN)
    check(p.returncode == 0, "analyze exits 0")
    report = json.loads(p.stdout)
    valid(report, "analyze", "analyze report")
    worst = max(abs(s["value"] + 1) for s in report["normal_form_invariant"]["samples"])
    check(worst < 1e-8, f"analyze invariant within 1e-8 of -1 (worst {worst:.2e})")

    # vein check
    p = run("vein", "check")
    check(p.returncode == 0, "vein check exits 0")
    valid(json.loads(p.stdout), "vein_check", "vein check report")

    # verify
    p = run("verify")
    check(p.returncode == 0, "verify exits 0")
    valid(json.loads(p.stdout), "verify", "verify report")
    check(p.stderr.count("[PASS]") == 11, "verify prints 11 passing lines")

    # parse error: JSON on stderr, nonzero exit, nothing on stdout
    p = run("analyze", "--f3", "3*(x+")
    check(p.returncode != 0, "parse error exits nonzero")
    check(p.stdout == "", "parse error writes nothing to stdout")
    err = error_of(p)
    valid(err, "error", "parse error body")
    check(err["error"]["code"] == "parse" and err["error"]["offset"] == 5, "parse error offset 5")

    # failing runs leave no files behind
    d = tmp / "failed"
    p = run("--out", str(d), "oscillator", "portrait", "--x-min", "1", "--x-max", "0")
    check(p.returncode != 0, "reversed window exits nonzero")
    valid(error_of(p), "error", "invalid input error body")
    check(not d.exists() or not any(d.iterdir()), "failed run leaves no outputs")
    d = tmp / "failed-const"
    p = run("--out", str(d), "solve-const", "--A0", "1", "--A3", "0")
    check(p.returncode != 0, "A3 = 0 exits nonzero")
    check(error_of(p)["error"]["code"] == "precondition", "A3 = 0 is a precondition error")
    check(not d.exists() or not any(d.iterdir()), "precondition failure leaves no outputs")

    # config file with a flag override
    cfg = tmp / "cfg.json"
    cfg.write_text(json.dumps({"x_min": -1, "x_max": 1, "samples": 5}))
    p = run("--config", str(cfg), "--format", "json", "phi")
    rows = json.loads(p.stdout)["rows"]
    check(len(rows) == 5 and rows[0][0] == -1.0, "config file sets the window and samples")
    p = run("--config", str(cfg), "--format", "json", "phi", "--samples", "3")
    rows = json.loads(p.stdout)["rows"]
    check(len(rows) == 3 and rows[-1][0] == 1.0, "flag overrides the config file")
    cfg.write_text("[1, 2]")
    p = run("--config", str(cfg), "phi")
    check(p.returncode != 0 and error_of(p)["error"]["code"] == "parse", "malformed config is a parse error")

print(f"{len(failures)} failure(s)")
sys.exit(1 if failures else 0)
