"""Validates CLI JSON reports against docs/report.schema.json.

Usage: check_schema.py CLI SCHEMA WORKDIR
"""

import json
import pathlib
import subprocess
import sys

import jsonschema

RUNS = {
    "gadget_h": ["gadget", "H", "--shots", "256"],
    "gadget_rz": ["gadget", "RZ", "--theta", "0.3", "--mode", "exact"],
    "gadget_cz": ["gadget", "CZ", "--mode", "exact"],
    "grover": ["grover", "--oracle", "11", "--shots", "128"],
    "ubqc": ["ubqc", "--oracle", "00", "--shots", "512", "--view", "both"],
    "selftest": ["selftest"],
}


def counts_sum_to_shots(hist):
    return sum(hist["counts"].values()) == hist["shots"]


def main():
    cli, schema_path, work = sys.argv[1], sys.argv[2], pathlib.Path(sys.argv[3])
    schema = json.loads(pathlib.Path(schema_path).read_text())
    validator = jsonschema.Draft202012Validator(schema)
    failed = False
    for name, args in RUNS.items():
        out = work / f"schema_{name}.json"
        proc = subprocess.run([cli, *args, "--format", "json", "--out", str(out)])
        report = json.loads(out.read_text())
        errors = list(validator.iter_errors(report))
        for err in errors:
            print(f"{name}: {err.message}")
        for key in ("histogram", "client", "server"):
            if key in report and not counts_sum_to_shots(report[key]):
                print(f"{name}: {key} counts do not sum to shots")
                errors.append(key)
        if proc.returncode != 0:
            print(f"{name}: exit status {proc.returncode}")
        failed = failed or bool(errors) or proc.returncode != 0
        print(f"{name}: {'ok' if not errors else 'INVALID'}")
    return 1 if failed else 0


if __name__ == "__main__":
    sys.exit(main())
