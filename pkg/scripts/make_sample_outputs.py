#!/usr/bin/env python3
"""Regenerate the sample output files consumed by the plotting frontend.

Small deterministic runs; the resulting files are checked in under
frontend/samples/ so the figure tests run without the simulator.
"""
import os
import pathlib
import sys

from burgers_hilbert.cli import run


def main(argv):
    out = pathlib.Path(__file__).resolve().parent.parent / "frontend" / "samples"
    if "--out" in argv:
        out = pathlib.Path(argv[argv.index("--out") + 1])
    out.mkdir(parents=True, exist_ok=True)
    os.chdir(out)  # relative output paths keep the embedded config portable
    steps = [
        ["simulate", "--n", "128", "--eps", "0.1", "--t-max", "5.0",
         "--sample-dt", "0.1", "--k-list", "2", "--seed", "7",
         "--output", "timeseries.ndjson"],
        ["study", "--quantity", "standard_energy_drift", "--n", "128",
         "--k", "2", "--eps", "0.025,0.05,0.1,0.2", "--sample-dt", "0.02",
         "--profile", "mixed", "--output", "drift"],
        ["sweep", "--hilbert", "off", "--n", "256",
         "--eps", "0.1,0.1414,0.2,0.2828,0.4",
         "--output", "lifespan"],
    ]
    for argv_step in steps:
        code = run(argv_step)
        if code != 0:
            return code
    return 0


if __name__ == "__main__":
    sys.exit(main(sys.argv[1:]))
