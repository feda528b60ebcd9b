#!/usr/bin/env python3
"""Regenerate every study dataset (figures 1-6) plus the sensitivity budget.

Usage: python scripts/reproduce_figures.py [output_dir]

Equivalent to running `penning-gyro fig N` for N in 1..6 followed by
`penning-gyro budget`, all with the default configuration.
"""
import sys
import time

from penning_gyro.cli import main as cli_main


def main() -> int:
    outdir = sys.argv[1] if len(sys.argv) > 1 else "figures_out"
    for fig_id in range(1, 7):
        t0 = time.time()
        code = cli_main(["--output-dir", outdir, "fig", str(fig_id)])
        if code != 0:
            print(f"figure {fig_id} failed with exit code {code}",
                  file=sys.stderr)
            return code
        print(f"  figure {fig_id} done in {time.time() - t0:.1f} s")
    return cli_main(["--output-dir", outdir, "budget"])


if __name__ == "__main__":
    sys.exit(main())
