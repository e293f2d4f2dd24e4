#!/usr/bin/env python3
"""Run the operator-identity battery at the reference resolution."""
import sys

from burgers_hilbert.cli import run

if __name__ == "__main__":
    sys.exit(run(["verify", "--n", "256", "--seed", "7"] + sys.argv[1:]))
