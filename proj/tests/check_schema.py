"""Runs each CLI command on the presets and checks the output contract.

JSON output must validate against the shipped schema and be rectangular.
CSV output must be '#' metadata lines, one header, then rows of equal width.
"""

import csv
import io
import json
import subprocess
import sys

import jsonschema

RUNS = [
    ("band", "sns"),
    ("band", "band_vanished"),
    ("phase-sweep", "sns"),
    ("phase-sweep", "metagame"),
    ("phase-sweep", "band_vanished"),
    ("regime-map", "sns"),
    ("simulate", "sns"),
    ("simulate", "metagame"),
    ("mass-sim", "mass_buzz"),
    ("mass-sim", "mass_boundary"),
    ("ref-shift-check", "ref_shift"),
]


def run(cli, command, scenario, fmt):
    out = subprocess.run([cli, command, "--scenario", scenario, "--format", fmt, "--quiet"],
                         capture_output=True, text=True, check=True)
    return out.stdout


def check_json(text, schema, label):
    doc = json.loads(text)
    jsonschema.validate(doc, schema)
    width = len(doc["columns"])
    for i, row in enumerate(doc["rows"]):
        if len(row) != width:
            raise AssertionError(f"{label}: row {i} has {len(row)} cells, expected {width}")
    return doc


def check_csv(text, label):
    lines = text.splitlines()
    meta = [l for l in lines if l.startswith("#")]
    body = lines[len(meta):]
    if any(l.startswith("#") for l in body):
        raise AssertionError(f"{label}: metadata after the header")
    for l in meta:
        if not l.startswith("# ") or ": " not in l:
            raise AssertionError(f"{label}: malformed metadata line {l!r}")
    rows = list(csv.reader(io.StringIO("\n".join(body))))
    if not rows:
        raise AssertionError(f"{label}: no header")
    width = len(rows[0])
    for i, row in enumerate(rows[1:]):
        if len(row) != width:
            raise AssertionError(f"{label}: row {i} has {len(row)} cells, expected {width}")
    return rows


def main():
    cli, presets, schema_path = sys.argv[1:4]
    with open(schema_path) as f:
        schema = json.load(f)
    failures = 0
    for command, preset in RUNS:
        label = f"{command} {preset}"
        scenario = f"{presets}/{preset}.json"
        try:
            doc = check_json(run(cli, command, scenario, "json"), schema, label)
            rows = check_csv(run(cli, command, scenario, "csv"), label)
            if rows[0] != doc["columns"] or len(rows) - 1 != len(doc["rows"]):
                raise AssertionError(f"{label}: CSV and JSON disagree on shape")
            print(f"ok {label}: {len(doc['rows'])} rows x {len(doc['columns'])} columns")
        except Exception as e:  # report every failure, not just the first
            failures += 1
            print(f"FAILED {label}: {e}")
    sys.exit(1 if failures else 0)


if __name__ == "__main__":
    main()
