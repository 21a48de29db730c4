"""Time the spatial and frequency merge engines side by side.

Usage:
    python scripts/run_bench.py [--sizes 64,128,256] [--layers 3] [--reps 5] [--seed N]
"""

import argparse
import sys

from specmerge.bench import run_bench
from specmerge.demos import DEFAULT_SEED


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--sizes", default="64,128,256")
    parser.add_argument("--layers", type=int, default=3)
    parser.add_argument("--reps", type=int, default=5)
    parser.add_argument("--seed", type=int, default=DEFAULT_SEED)
    args = parser.parse_args(argv)

    sizes = [int(s) for s in args.sizes.split(",") if s]
    report = run_bench(sizes, layers=args.layers, reps=args.reps, seed=args.seed)
    print(report.to_json())
    return 0


if __name__ == "__main__":
    sys.exit(main())
