#!/usr/bin/env python3
"""Regenerate the headline curves: visibility collapse/revival and detector
probabilities at T = 1e-3 K and 1e-4 K, with SVG plots next to the CSVs.

Thin driver over the CLI scenarios so the outputs match the documented
schemas byte for byte.
"""

import argparse
import sys

from hybridmirror.cli import RunConfig, run


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--out", default="out/figures", help="output directory")
    ap.add_argument("--points", type=int, default=2000)
    ap.add_argument("--no-svg", action="store_true", help="CSV only")
    args = ap.parse_args(argv)

    ok = True
    for scenario in ("visibility", "detect"):
        report = run(RunConfig(
            scenario=scenario,
            out=args.out,
            points=args.points,
            svg=not args.no_svg,
            temperatures=[1e-3, 1e-4],
        ))
        ok = ok and report.passed
        for entry in report.files:
            print(f"{args.out}/{entry['path']}  ({entry['bytes']} bytes)")
        for check in report.checks:
            status = "ok" if check.passed else "FAILED"
            print(f"  {check.name}: {status} (value {check.value:.3e})")
    return 0 if ok else 1


if __name__ == "__main__":
    sys.exit(main())
