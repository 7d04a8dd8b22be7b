"""Run verification methods over problem suites and report the results."""

from __future__ import annotations

import csv
import json
import logging
import time
from dataclasses import asdict, dataclass, field, fields

import numpy as np

from .approx import CareProblem, approx_solution
from .enclosure import Enclosure, residual_contains_zero
from .errors import VerificationError, VerificationFailed
from .fixedpoint import method_f
from .krawczyk import K_MAX, method_h
from .metrics import metric_garp, metric_nre
from .permuted import TAU, method_f_permuted, method_k
from .problems import (
    EXPERIMENT1_SOLUTION,
    FORMAT_VERSION,
    default_seed,
    gen_experiment1,
    gen_known_solution,
    gen_lyapunov,
)
from .stability import certify_enclosure

log = logging.getLogger(__name__)

METHODS = ("H", "K", "F")


def verify(p: CareProblem, method: str = "K", k_max: int = K_MAX, tau: float = TAU, certify: bool = True, **kw) -> Enclosure:
    """Compute a verified enclosure of the stabilizing solution of ``p``.

    Parameters
    ----------
    method : {"H", "K", "F", "F-direct"}
        ``H``: Krawczyk in the original basis.  ``K``: Krawczyk on the
        eigenvector-transformed map, applied to the permuted CARE.  ``F``:
        fixed-point iteration on the permuted CARE.  ``F-direct``: the
        fixed-point iteration without the permutation step.
    certify : bool
        Also run the Hurwitz check on A - G X.

    Raises
    ------
    VerificationError
        (or a subclass) naming the stage that failed.
    """
    m = method.upper()
    if m == "H":
        enc = method_h(p, approx_solution(p, **kw), k_max)
    elif m == "K":
        enc = method_k(p, k_max, tau, **kw)
    elif m == "F":
        enc = method_f_permuted(p, k_max, tau, **kw)
    elif m == "F-DIRECT":
        enc = method_f(p, approx_solution(p), k_max, **kw)
    else:
        raise ValueError(f"unknown method {method!r}")
    if certify:
        enc = certify_enclosure(p, enc)
    return enc


@dataclass
class VerificationReport:
    problem_id: str
    n: int
    method: str
    status: str
    iterations: int | None = None
    nre: float | None = None
    garp: float | None = None
    stabilizing: bool | None = None
    wall_time: float = 0.0
    cond_V: float | None = None
    cond_VP: float | None = None
    contains_reference: bool | None = None
    message: str = ""

    @property
    def success(self) -> bool:
        return self.status == "success"

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, d: dict) -> "VerificationReport":
        names = {f.name for f in fields(cls)}
        return cls(**{k: v for k, v in d.items() if k in names})


CSV_COLUMNS = ["problem_id", "n", "method", "status", "nre", "iterations", "garp", "wall_time",
               "stabilizing", "cond_V", "cond_VP", "contains_reference", "message"]


def _cond(M):
    with np.errstate(all="ignore"):
        c = float(np.linalg.cond(M))
    return c if np.isfinite(c) else float("inf")


def run_one(problem_id: str, p: CareProblem, method: str, k_max=K_MAX, tau=TAU, X_ref=None, cond_V=None):
    """Verify one problem with one method; failures become report statuses."""
    t0 = time.perf_counter()
    try:
        enc = verify(p, method, k_max, tau)
    except VerificationFailed as exc:
        return VerificationReport(problem_id, p.n, method, "failure", wall_time=time.perf_counter() - t0,
                                  cond_V=cond_V, message=str(exc))
    except VerificationError as exc:
        return VerificationReport(problem_id, p.n, method, f"error:{exc.stage}", wall_time=time.perf_counter() - t0,
                                  cond_V=cond_V, message=f"{type(exc).__name__}: {exc}")
    wall = time.perf_counter() - t0
    rep = VerificationReport(problem_id, p.n, method, "success", enc.iterations, wall_time=wall, cond_V=cond_V,
                             stabilizing=enc.stabilizing_certified, cond_VP=enc.info.get("cond_VP"))
    if not residual_contains_zero(p, enc.X):
        # Should be impossible for a sound enclosure; never report it as a success.
        rep.status = "error:postcheck"
        rep.message = "residual enclosure over X does not contain zero"
        return rep
    try:
        rep.nre = metric_nre(enc.X)
    except VerificationError:
        rep.nre = float("inf")
    rep.garp = metric_garp(enc.X)
    if X_ref is not None:
        rep.contains_reference = enc.X.contains(X_ref)
    return rep


@dataclass
class SuiteConfig:
    """Problems are given as strings: ``experiment1``, ``lyapunov:N``,
    ``known:N[:SEED]`` or ``defective:N[:SEED]``."""

    problems: list = field(default_factory=lambda: ["experiment1", "lyapunov:8", "known:10"])
    methods: tuple = METHODS
    k_max: int = K_MAX
    tau: float = TAU
    seed: int | None = None


SUITES = {
    "default": SuiteConfig(),
    "scaling": SuiteConfig(problems=[f"lyapunov:{n}" for n in (25, 50, 100, 200)], methods=("K", "F")),
    "planted": SuiteConfig(problems=[f"known:{n}:{s}" for n in (2, 5, 10, 20) for s in range(5)]),
    "defective": SuiteConfig(problems=[f"defective:{n}:{s}" for n, s in zip((2, 3, 4, 5, 6), range(5))]),
}


def make_problem(spec: str, seed: int | None = None):
    """Returns ``(problem_id, problem, reference solution or None)``."""
    parts = spec.split(":")
    kind = parts[0]
    seed = default_seed() if seed is None else seed
    if kind == "experiment1":
        return spec, gen_experiment1(), EXPERIMENT1_SOLUTION
    n = int(parts[1])
    if kind == "lyapunov":
        return spec, gen_lyapunov(n), None
    if kind in ("known", "defective"):
        s = int(parts[2]) if len(parts) > 2 else seed
        p, X_s = gen_known_solution(n, s, defective=kind == "defective")
        return f"{kind}:{n}:{s}", p, X_s
    raise ValueError(f"unknown problem spec {spec!r}")


def run_suite(config: SuiteConfig) -> list[VerificationReport]:
    reports = []
    for spec in config.problems:
        pid, p, X_ref = make_problem(spec, config.seed)
        try:
            cond_V = _cond(approx_solution(p).V)
        except VerificationError:
            cond_V = None
        for m in config.methods:
            rep = run_one(pid, p, m, config.k_max, config.tau, X_ref, cond_V)
            log.info("%s %s: %s", pid, m, rep.status)
            reports.append(rep)
    return reports


def write_csv(reports, path):
    with open(path, "w", newline="") as fh:
        w = csv.DictWriter(fh, fieldnames=CSV_COLUMNS)
        w.writeheader()
        for r in reports:
            w.writerow({k: getattr(r, k) for k in CSV_COLUMNS})


def reports_to_json(reports) -> str:
    return json.dumps({"format": FORMAT_VERSION, "reports": [r.to_dict() for r in reports]}, indent=2)


def reports_from_json(text: str) -> list[VerificationReport]:
    d = json.loads(text)
    if str(d.get("format")) != FORMAT_VERSION:
        raise ValueError(f"unsupported report format {d.get('format')!r}")
    return [VerificationReport.from_dict(r) for r in d["reports"]]


def loglog_slope(ns, times) -> float:
    """Least-squares slope of log(time) against log(n)."""
    return float(np.polyfit(np.log(ns), np.log(times), 1)[0])
