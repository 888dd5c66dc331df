#!/usr/bin/env python3
"""Noise-free K_max versus ensemble size for all six measurement schemes.

Reproduces the scheme-comparison sweep: the central, single-state, parity
and normalized binnings keep or grow their violation with N, the extreme
binning saturates near 1.055, and the Lueders variant decays back to the
classical bound.  Writes one kmax-sweep CSV per scheme group.

Usage: python3 scripts/run_scheme_sweep.py [--n-max 40] [--out out/schemes]
"""

import argparse
import sys
from pathlib import Path

from lgspin import cli


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--n-max", type=int, default=40)
    parser.add_argument("--grid-points", type=int, default=2000)
    parser.add_argument("--out", type=Path, default=Path("out/schemes"))
    args = parser.parse_args()

    argv = ["kmax-sweep", "--n", f"1..{args.n_max}",
            "--grid-points", str(args.grid_points),
            "--backend", "dicke", "--out", str(args.out)]
    for sid in ("central-vn", "single-state-vn", "parity-vn", "extreme-vn",
                "normalized-jz-vn", "central-lueders"):
        argv += ["--scheme", sid]
    rc = cli.main(argv)
    if rc == 0:
        rc = cli.main(["plot-script", str(args.out / "kmax_sweep.csv"),
                       "--out", str(args.out / "plot_kmax.py")])
    return rc


if __name__ == "__main__":
    sys.exit(main())
