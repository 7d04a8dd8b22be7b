"""Verify the 2x2 benchmark problem with Methods H, K and F and print a table row per method."""

import numpy as np

from riccati_verify.approx import approx_solution
from riccati_verify.bench import run_one
from riccati_verify.problems import EXPERIMENT1_SOLUTION, gen_experiment1


def main():
    p = gen_experiment1()
    s = approx_solution(p)
    print(f"cond(V) = {np.linalg.cond(s.V):.3g}, |X_check - X_s| = {np.max(np.abs(s.X_check - EXPERIMENT1_SOLUTION)):.2e}")
    print(f"{'method':<7}{'status':<18}{'nre':<11}{'k':<6}{'stabilizing':<12}")
    for m in ("H", "K", "F"):
        r = run_one("experiment1", p, m, X_ref=EXPERIMENT1_SOLUTION)
        nre = f"{r.nre:.2e}" if r.nre is not None else "NaN"
        print(f"{m:<7}{r.status:<18}{nre:<11}{r.iterations!s:<6}{r.stabilizing!s:<12}")


if __name__ == "__main__":
    main()
