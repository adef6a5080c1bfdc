"""Diameter, maximum degree, controllability and steering energy over a (k, n) grid.

    python3 scripts/sweep_design_grid.py --k 3 8 --n 1 5 --extra
"""

import argparse
import csv
import sys

from genpath.experiments import SWEEP_COLUMNS, SweepCell, sweep_row


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--k", type=int, nargs=2, default=[3, 6], metavar=("LO", "HI"))
    parser.add_argument("--n", type=int, nargs=2, default=[1, 4], metavar=("LO", "HI"))
    parser.add_argument("--extra", action="store_true", help="append the extra input vertex")
    parser.add_argument("--t1", type=float, default=2.0)
    args = parser.parse_args()

    writer = csv.DictWriter(sys.stdout, SWEEP_COLUMNS, lineterminator="\n")
    writer.writeheader()
    for k in range(args.k[0], args.k[1] + 1):
        for n in range(args.n[0], args.n[1] + 1):
            writer.writerow(sweep_row(SweepCell(k, n, extra=args.extra, t1=args.t1)))


if __name__ == "__main__":
    main()
