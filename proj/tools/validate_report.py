#!/usr/bin/env python3
"""Validate faultloc JSON reports against docs/report.schema.json."""

import argparse
import json
import sys
from pathlib import Path

import jsonschema


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("reports", nargs="+", type=Path)
    ap.add_argument("--schema", type=Path, default=Path(__file__).resolve().parent.parent / "docs" / "report.schema.json")
    args = ap.parse_args()
    schema = json.loads(args.schema.read_text())
    validator = jsonschema.Draft202012Validator(schema)
    bad = 0
    for path in args.reports:
        errors = sorted(validator.iter_errors(json.loads(path.read_text())), key=lambda e: list(e.path))
        for e in errors:
            print(f"{path}: {'/'.join(map(str, e.path)) or '<root>'}: {e.message}", file=sys.stderr)
        bad += bool(errors)
        if not errors:
            print(f"{path}: ok")
    return 1 if bad else 0


if __name__ == "__main__":
    sys.exit(main())
