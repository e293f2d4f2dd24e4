#!/usr/bin/env python3
"""Perturbation-growth window at eps = 0.1 (t up to 1/eps^2 = 100)."""
import pathlib
import sys

from burgers_hilbert.cli import run


def main(argv):
    out = pathlib.Path("results")
    if "--out" in argv:
        out = pathlib.Path(argv[argv.index("--out") + 1])
    out.mkdir(parents=True, exist_ok=True)
    return run([
        "stability", "--n", "256", "--eps", "0.1", "--sample-dt", "0.5",
        "--output", str(out / "stability.ndjson"),
    ])


if __name__ == "__main__":
    sys.exit(main(sys.argv[1:]))
