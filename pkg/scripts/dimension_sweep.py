#!/usr/bin/env python3
"""Sweep graded dimensions and radical sizes across the shipped root data.

Prints one table per datum: multidegree, word count, quotient dimension,
radical dimension.  Everything is exact; a nonzero radical row is where a
quantum Serre relation lives.
"""

import argparse
import itertools
import sys
import time

from uqbench.nichols import NicholsContext
from uqbench.rootdata import load_datum


def degree_range(rank, max_total):
    for total in range(max_total + 1):
        for parts in itertools.product(range(total + 1), repeat=rank):
            if sum(parts) == total:
                yield parts


def sweep(name, max_total):
    datum = load_datum(name)
    ctx = NicholsContext(datum, cap=max_total)
    print(f"== {datum.name} (rank {datum.rank}) ==")
    print(f"{'degree':>12} {'words':>7} {'dim':>5} {'radical':>8}")
    start = time.monotonic()
    for deg in degree_range(datum.rank, max_total):
        words = len(ctx.nichols_basis(deg).words)
        dim = ctx.nichols_dim(deg)
        rad = len(ctx.radical_basis(deg))
        print(f"{str(deg):>12} {words:>7} {dim:>5} {rad:>8}")
    print(f"elapsed {time.monotonic() - start:.2f}s")
    print()


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--data", default="A1,A2,B2",
                        help="comma list of datum names or preset paths")
    parser.add_argument("--max-total", type=int, default=5,
                        help="largest total degree to tabulate")
    args = parser.parse_args(argv)
    for name in args.data.split(","):
        sweep(name.strip(), args.max_total)
    return 0


if __name__ == "__main__":
    sys.exit(main())
