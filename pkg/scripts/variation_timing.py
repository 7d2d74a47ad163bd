"""Wall-clock of the subset DP for the variation as n grows (cost is 3^n)."""

import argparse
import time

import numpy as np

from nonadd.ground import GroundSpace
from nonadd.setfunc import Table, variation


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--max-n", type=int, default=14)
    ap.add_argument("--seed", type=int, default=7)
    args = ap.parse_args()
    rng = np.random.default_rng(args.seed)
    print(f"{'n':>3} {'seconds':>9} {'variation':>12}")
    for n in range(2, args.max_n + 1):
        v = rng.random(1 << n)
        v[0] = 0.0
        t0 = time.perf_counter()
        val = variation(Table(GroundSpace.finite(n), v))
        print(f"{n:>3} {time.perf_counter() - t0:>9.3f} {val:>12.6f}")


if __name__ == "__main__":
    main()
