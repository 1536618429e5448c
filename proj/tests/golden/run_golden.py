#!/usr/bin/env python3
"""Golden-file and determinism suite for the nvfield CLI.

Every case runs twice in fresh directories; both runs must be byte-identical
and must match the stored expectation under tests/golden/expected. JSON
outputs are validated against the shipped schemas and CSV headers must name a
unit for every column. Pass --update to rewrite the expectations.
"""
import argparse
import json
import re
import shutil
import subprocess
import sys
import tempfile
import time
from pathlib import Path

CASES = [
    ("polar", ["polar"]),
    ("polar_json", ["--format", "json", "polar", "--n-angles", "72"]),
    ("polar_config", ["--config", "{root}/tests/fixtures/config.json", "polar", "--phi-e", "22", "--n-angles", "36"]),
    ("axial_decay", ["axial-decay", "--phi-b", "57.3"]),
    ("sense_hahn", ["--seed", "7", "sense"]),
    ("sense_fid_json", ["--seed", "7", "--format", "json", "sense", "--kind", "fid"]),
    ("t2star", ["t2star"]),
    ("align", ["align", "{root}/tests/fixtures/alignment_scan.csv", "--gauss-per-control", "2"]),
    ("fit", ["fit", "{root}/tests/fixtures/polar_fit.csv"]),
    ("charge", ["charge", "1", "150e-9"]),
    ("charge_json", ["--format", "json", "charge", "1", "35e-9"]),
    ("odmr", ["odmr"]),
]

SCHEMA_FOR = {
    "fit.json": "fit_result.schema.json",
    "align.json": "align.schema.json",
    "sense_report.json": "sense_report.schema.json",
    "stdout.json": "charge.schema.json",
}
HEADER_FIELD = re.compile(r"^[a-z][a-z0-9_]* \[[^\]]+\]$")


def run_case(cli, root, args, workdir):
    argv = [cli] + [a.format(root=root) for a in args] + ["--out", str(workdir)]
    proc = subprocess.run(argv, capture_output=True, text=True)
    if proc.returncode != 0:
        raise RuntimeError(f"{' '.join(argv)} exited {proc.returncode}: {proc.stderr}")
    files = {p.name: p.read_bytes() for p in sorted(workdir.iterdir())}
    if proc.stdout:
        name = "stdout.json" if proc.stdout.lstrip().startswith("{") else "stdout.txt"
        files[name] = proc.stdout.encode()
    return files


def check_format(name, data, schemas):
    problems = []
    if name.endswith(".csv"):
        header = data.decode().splitlines()[0].split(",")
        bad = [h for h in header if not HEADER_FIELD.match(h)]
        if bad:
            problems.append(f"{name}: header fields without units: {bad}")
    elif name.endswith(".json"):
        try:
            import jsonschema
        except ImportError:
            return problems
        schema = schemas.get(SCHEMA_FOR.get(name, "series.schema.json"))
        try:
            jsonschema.validate(json.loads(data), schema)
        except jsonschema.ValidationError as e:
            problems.append(f"{name}: schema violation: {e.message}")
    return problems


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--cli", required=True)
    ap.add_argument("--root", required=True)
    ap.add_argument("--update", action="store_true")
    opts = ap.parse_args()

    root = Path(opts.root)
    expected_root = root / "tests" / "golden" / "expected"
    schemas = {p.name: json.loads(p.read_text()) for p in (root / "schemas").glob("*.json")}
    start = time.monotonic()
    failures = []

    for name, args in CASES:
        with tempfile.TemporaryDirectory() as a, tempfile.TemporaryDirectory() as b:
            first = run_case(opts.cli, root, args, Path(a))
            second = run_case(opts.cli, root, args, Path(b))
        if first != second:
            failures.append(f"{name}: repeated runs differ")
        for fname, data in first.items():
            failures += [f"{name}/{p}" for p in check_format(fname, data, schemas)]

        case_dir = expected_root / name
        if opts.update:
            shutil.rmtree(case_dir, ignore_errors=True)
            case_dir.mkdir(parents=True)
            for fname, data in first.items():
                (case_dir / fname).write_bytes(data)
            print(f"updated {name}")
            continue
        if not case_dir.is_dir():
            failures.append(f"{name}: no stored expectation (run with --update)")
            continue
        stored = {p.name: p.read_bytes() for p in sorted(case_dir.iterdir())}
        if set(stored) != set(first):
            failures.append(f"{name}: file set {sorted(first)} != expected {sorted(stored)}")
        for fname in sorted(set(stored) & set(first)):
            if stored[fname] != first[fname]:
                failures.append(f"{name}/{fname}: differs from golden copy")
        print(f"{'FAIL' if any(f.startswith(name + ':') or f.startswith(name + '/') for f in failures) else 'ok  '} {name}")

    elapsed = time.monotonic() - start
    print(f"golden suite: {len(CASES)} cases in {elapsed:.1f} s")
    if elapsed > 120:
        failures.append(f"suite took {elapsed:.1f} s (limit 120 s)")
    for f in failures:
        print("  " + f)
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main())
