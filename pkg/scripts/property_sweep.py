"""Run the randomized theorem checks over several seeds and case counts."""

import argparse
import time

from nonadd.properties import run_properties


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--seeds", type=int, nargs="+", default=[1, 2, 3, 7])
    ap.add_argument("--cases", type=int, default=500)
    args = ap.parse_args()

    print(f"{'seed':>5} {'check':32s} {'cases':>6} {'viol':>5} {'max_err':>10}")
    total = 0
    for seed in args.seeds:
        t0 = time.perf_counter()
        res = run_properties(args.cases, seed)
        for name, c in res["checks"].items():
            total += c["violations"]
            print(f"{seed:>5} {name:32s} {c['cases']:>6} {c['violations']:>5} {c['max_error']:>10.2e}")
        print(f"# seed {seed}: {time.perf_counter() - t0:.2f} s")
    print(f"total violations: {total}")
    return 1 if total else 0


if __name__ == "__main__":
    raise SystemExit(main())
