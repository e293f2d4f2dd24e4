#!/usr/bin/env python3
"""All four energy-drift scaling studies at n = 256.

Expected exponents: modified 4, standard 3, E_lin 2, plain L2 1.
Writes one CSV + summary pair per quantity under --out (default results/).
"""
import pathlib
import sys

from burgers_hilbert.cli import run

QUANTITIES = ("modified_energy_drift", "standard_energy_drift",
              "lin_energy_drift", "lin_l2_drift")


def main(argv):
    out = pathlib.Path("results")
    if "--out" in argv:
        out = pathlib.Path(argv[argv.index("--out") + 1])
    out.mkdir(parents=True, exist_ok=True)
    for quantity in QUANTITIES:
        code = run([
            "study", "--quantity", quantity, "--n", "256", "--k", "2",
            "--eps", "0.025,0.05,0.1,0.2", "--sample-dt", "0.02",
            "--profile", "mixed", "--output", str(out / quantity),
        ])
        if code != 0:
            return code
    return 0


if __name__ == "__main__":
    sys.exit(main(sys.argv[1:]))
