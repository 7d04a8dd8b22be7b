"""Command-line interface: ``riccati-verify {verify,bench,gen}``."""

from __future__ import annotations

import argparse
import json
import logging
import sys

from .bench import METHODS, SUITES, SuiteConfig, make_problem, reports_to_json, run_one, run_suite, write_csv
from .krawczyk import K_MAX
from .permuted import TAU
from .problems import default_seed, gen_experiment1, gen_known_solution, gen_lyapunov, load_problem, problem_to_dict


def _methods(arg):
    return METHODS if arg.lower() == "all" else (arg.upper(),)


def cmd_verify(args) -> int:
    if args.input:
        p, X_ref = load_problem(args.input)
        pid = p.name or args.input
    else:
        pid, p, X_ref = make_problem(args.problem, args.seed)
    reports = [run_one(pid, p, m, args.kmax, args.tau, X_ref) for m in _methods(args.method)]
    text = reports_to_json(reports)
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(text)
    for r in reports:
        nre = f"{r.nre:.2e}" if r.nre is not None else "-"
        print(f"{r.problem_id}  method {r.method}: {r.status}  k={r.iterations}  nre={nre}  stabilizing={r.stabilizing}")
    return 0 if all(r.success for r in reports) else 1


def cmd_bench(args) -> int:
    base = SUITES[args.suite]
    cfg = SuiteConfig(list(base.problems), base.methods if args.method is None else _methods(args.method),
                      args.kmax, args.tau, args.seed)
    reports = run_suite(cfg)
    if args.csv:
        write_csv(reports, args.csv)
    if args.json:
        with open(args.json, "w") as fh:
            fh.write(reports_to_json(reports))
    for r in reports:
        nre = f"{r.nre:.2e}" if r.nre is not None else "-"
        garp = f"{r.garp:.2e}" if r.garp is not None else "-"
        print(f"{r.problem_id:<16} {r.method:<2} {r.status:<18} nre={nre:<9} k={r.iterations!s:<3} "
              f"garp={garp:<9} t={r.wall_time:.3f}s")
    return 0 if all(r.success for r in reports) else 1


def cmd_gen(args) -> int:
    X_s = None
    if args.kind == "experiment1":
        p = gen_experiment1()
    elif args.kind == "lyapunov":
        p = gen_lyapunov(args.n)
    else:
        p, X_s = gen_known_solution(args.n, args.seed, defective=args.defective)
    text = json.dumps(problem_to_dict(p, X_s))
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(text)
    else:
        print(text)
    return 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="riccati-verify", description="Verified enclosures for CARE stabilizing solutions.")
    ap.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--kmax", type=int, default=K_MAX, help="iteration budget (default %(default)s)")
        sp.add_argument("--tau", type=float, default=TAU, help="entry bound for the permuted basis (default %(default)s)")
        sp.add_argument("--seed", type=int, default=None, help="RNG seed (default: $RICCATI_SEED or built-in)")

    v = sub.add_parser("verify", help="verify one problem")
    v.add_argument("--method", default="all", help="h, k, f, f-direct or all")
    v.add_argument("--input", help="problem JSON file")
    v.add_argument("--problem", default="experiment1", help="generated problem if no --input, e.g. known:10:3")
    v.add_argument("--output", help="write report JSON here")
    common(v)
    v.set_defaults(func=cmd_verify)

    b = sub.add_parser("bench", help="run a benchmark suite")
    b.add_argument("--suite", default="default", choices=sorted(SUITES))
    b.add_argument("--method", default=None, help="restrict to one method (h, k, f) or all")
    b.add_argument("--csv")
    b.add_argument("--json")
    common(b)
    b.set_defaults(func=cmd_bench)

    g = sub.add_parser("gen", help="write a problem as JSON")
    g.add_argument("--kind", required=True, choices=["experiment1", "lyapunov", "known"])
    g.add_argument("--n", type=int, default=4)
    g.add_argument("--seed", type=int, default=None)
    g.add_argument("--defective", action="store_true", help="known: plant a Jordan block in the closed loop")
    g.add_argument("--output", "-o")
    g.set_defaults(func=cmd_gen)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING, format="%(name)s: %(message)s")
    if getattr(args, "seed", None) is None and args.command != "gen":
        args.seed = default_seed()
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
