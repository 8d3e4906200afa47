#!/usr/bin/env python3
"""Angular gain sweeps: elevation and azimuth at R = 2 and 8 m, then the
frequency comparison at fixed aperture.  Extra CLI flags pass through, e.g.

    python3 scripts/run_gain_sweeps.py --set f_ghz=60
"""

import sys

from conformal_v2v.cli import main


def run(argv: list[str]) -> None:
    rc = main(argv)
    if rc != 0:
        sys.exit(rc)


if __name__ == "__main__":
    extra = sys.argv[1:]
    for radius in ("2", "8"):
        out = ["--out-dir", f"results/gain_R{radius}"]
        run(["gain-elevation", "--set", f"radius_m={radius}", *out, *extra])
        run(["gain-azimuth", "--set", f"radius_m={radius}",
             "--thetabar-deg", "60", *out, *extra])
    run(["gain-frequency", "--out-dir", "results/gain_frequency", *extra])
