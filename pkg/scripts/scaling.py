"""Wall time of Methods K and F on the Lyapunov-like family, with the log-log slope.

Usage: python3 scripts/scaling.py [--sizes 25 50 100 200] [--csv out.csv]
"""

import argparse
import csv
import time

import numpy as np

from riccati_verify.bench import loglog_slope, verify
from riccati_verify.problems import gen_lyapunov


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--sizes", type=int, nargs="+", default=[25, 50, 100, 200])
    ap.add_argument("--methods", nargs="+", default=["K", "F"])
    ap.add_argument("--csv")
    args = ap.parse_args()

    rows = []
    for m in args.methods:
        times = []
        for n in args.sizes:
            p = gen_lyapunov(n)
            t0 = time.perf_counter()
            enc = verify(p, m, certify=False)
            t = time.perf_counter() - t0
            times.append(t)
            rows.append({"method": m, "n": n, "time": t, "iterations": enc.iterations})
            print(f"{m} n={n:<5d} k={enc.iterations}  {t:.3f}s")
        print(f"{m}: log-log slope {loglog_slope(np.array(args.sizes), times):.2f}")
    if args.csv:
        with open(args.csv, "w", newline="") as fh:
            w = csv.DictWriter(fh, fieldnames=["method", "n", "time", "iterations"])
            w.writeheader()
            w.writerows(rows)


if __name__ == "__main__":
    main()
