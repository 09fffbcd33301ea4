#!/usr/bin/env python3
"""Build corpus test suites by compiling each reference program with a C compiler.

For every corpus/<name>/ directory holding program.c, inputs.txt and meta.json,
the reference (reference.c if present, else program.c) is compiled natively and
run on each line of inputs.txt. Results go to tests/tN.in and tests/tN.out.
corpus/manifest.json lists every program with its kind and fault lines.
"""

import argparse
import json
import shutil
import subprocess
import sys
import tempfile
from pathlib import Path

PRELUDE = "#include <stdio.h>\n#include <stdbool.h>\n#line 1\n"


def compile_c(src: Path, exe: Path, cc: str) -> None:
    with tempfile.NamedTemporaryFile("w", suffix=".c", delete=False) as f:
        f.write(PRELUDE + src.read_text())
        tmp = f.name
    try:
        subprocess.run([cc, "-std=c99", "-w", "-O0", "-o", str(exe), tmp], check=True)
    finally:
        Path(tmp).unlink()


def fault_lines(program: Path, reference: Path) -> list[int]:
    a = program.read_text().splitlines()
    b = reference.read_text().splitlines()
    if len(a) != len(b):
        sys.exit(f"{program}: reference must have the same number of lines")
    return [i + 1 for i, (x, y) in enumerate(zip(a, b)) if x != y]


def build(d: Path, cc: str, work: Path) -> dict:
    meta = json.loads((d / "meta.json").read_text())
    program = d / "program.c"
    reference = d / "reference.c"
    exe = work / d.name
    compile_c(reference if reference.exists() else program, exe, cc)

    tests = d / "tests"
    if tests.exists():
        shutil.rmtree(tests)
    tests.mkdir()
    inputs = [l.strip() for l in (d / "inputs.txt").read_text().splitlines() if l.strip()]
    for k, line in enumerate(inputs):
        out = subprocess.run([str(exe)], input=line + "\n", capture_output=True, text=True, timeout=10, check=True)
        values = out.stdout.split()
        (tests / f"t{k}.in").write_text(line + "\n")
        (tests / f"t{k}.out").write_text(" ".join(values) + ("\n" if values else ""))

    entry = {
        "name": d.name,
        "kind": "buggy" if reference.exists() else "correct",
        "description": meta["description"],
        "unwind": meta["unwind"],
        "fault_lines": fault_lines(program, reference) if reference.exists() else [],
        "tests": len(inputs),
    }
    return entry


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--corpus", type=Path, default=Path(__file__).resolve().parent.parent / "corpus")
    ap.add_argument("--cc", default="gcc")
    args = ap.parse_args()

    dirs = sorted(p for p in args.corpus.iterdir() if (p / "meta.json").exists())
    with tempfile.TemporaryDirectory() as work:
        entries = [build(d, args.cc, Path(work)) for d in dirs]
    manifest = {"programs": entries}
    (args.corpus / "manifest.json").write_text(json.dumps(manifest, indent=2) + "\n")
    buggy = sum(e["kind"] == "buggy" for e in entries)
    print(f"{len(entries)} programs ({buggy} buggy, {len(entries) - buggy} correct)")


if __name__ == "__main__":
    main()
