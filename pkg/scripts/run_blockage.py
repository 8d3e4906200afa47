#!/usr/bin/env python3
"""Blockage probability vs traffic density for both link distances.

Defaults: rho in {10, 20, 30, 40} cars/km/lane, r_d in {50, 100} m,
10^4 trials per point.  Extra CLI flags pass through, e.g.

    python3 scripts/run_blockage.py --trials 1000 --threads 4
"""

import sys

from conformal_v2v.cli import main

if __name__ == "__main__":
    sys.exit(main(["blockage", "--out-dir", "results/blockage", *sys.argv[1:]]))
