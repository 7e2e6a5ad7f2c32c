#!/usr/bin/env python3
"""Generate random instance files for experiments.

By default rejection-samples until the instance is feasible in both stages
(so `tropsched solve` exits 0 on it); pass --any to skip that.
"""

import argparse
import sys

import numpy as np

from tropsched.instances import random_feasible_instance, random_instance
from tropsched.io_cli import write_instance


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("output", help="path of the instance JSON to write")
    parser.add_argument("-m", type=int, default=2, help="number of tasks")
    parser.add_argument("-n", type=int, default=3, help="number of workers")
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--any", action="store_true", help="do not require feasibility")
    args = parser.parse_args()

    rng = np.random.default_rng(args.seed)
    if args.any:
        inst = random_instance(rng, args.m, args.n)
    else:
        try:
            inst = random_feasible_instance(rng, args.m, args.n)
        except RuntimeError as exc:
            print(f"error: {exc}", file=sys.stderr)
            return 1
    write_instance(inst, args.output)
    print(f"wrote {args.m}x{args.n} instance to {args.output}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
