#!/usr/bin/env python3
"""Incidence-angle statistics over candidate relay doors.

Defaults: rho = 30 cars/km/lane, 2000 scenes.  Extra CLI flags pass through:

    python3 scripts/run_angle_pdf.py --rho 40 --trials 500
"""

import sys

from conformal_v2v.cli import main

if __name__ == "__main__":
    sys.exit(main(["angle-pdf", "--out-dir", "results/angle_pdf", *sys.argv[1:]]))
