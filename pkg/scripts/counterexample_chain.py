"""Reproduce the Section 3.2 counterexample on N and print the Gould witness chain.

nu(A) = 0 for finite A, 1 for infinite A; h = 1.  RL and Birkhoff-simple give 0,
while the residue-class chain P_k has k infinite blocks and sum exactly k.
"""

import argparse
import csv
import sys

from nonadd.ground import GroundSpace, NatFunction
from nonadd.rl_integral import compare_integrals
from nonadd.setfunc import CardinalityRule


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--csv", help="write the chain here")
    args = ap.parse_args()

    nu = CardinalityRule(GroundSpace.nat(), 0.0, 1.0)
    c = compare_integrals(NatFunction.constant(1.0), nu)
    print(f"RL       {c.rl.value!r}  ({c.rl.status})")
    print(f"Birkhoff {c.birkhoff.value!r}  ({c.birkhoff.status})")
    print(f"Gould    {c.gould.status}")
    print(f"agree    {c.agree}")
    chain = c.gould.witness["chain"]
    out = open(args.csv, "w", newline="") if args.csv else sys.stdout
    w = csv.writer(out)
    w.writerow(["k", "block_count", "sum_lo", "sum_hi"])
    for k, row in enumerate(chain, start=1):
        w.writerow([k, row["block_count"], row["sum_lo"], row["sum_hi"]])


if __name__ == "__main__":
    main()
