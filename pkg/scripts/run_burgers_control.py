#!/usr/bin/env python3
"""Burgers control sweep: breakdown at 1/eps, fitted slope -1.

Writes burgers_sweep.csv and burgers_sweep.summary.ndjson under --out
(default: results/).
"""
import pathlib
import sys

from burgers_hilbert.cli import run


def main(argv):
    out = pathlib.Path("results")
    if "--out" in argv:
        out = pathlib.Path(argv[argv.index("--out") + 1])
    out.mkdir(parents=True, exist_ok=True)
    return run([
        "sweep", "--hilbert", "off", "--n", "1024",
        "--eps", "0.1,0.1414,0.2,0.2828,0.4",
        "--jobs", "2", "--output", str(out / "burgers_sweep"),
    ])


if __name__ == "__main__":
    sys.exit(main(sys.argv[1:]))
