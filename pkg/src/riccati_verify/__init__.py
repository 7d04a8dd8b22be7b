"""Verified enclosures for the stabilizing solution of A^* X + X A + Q = X G X."""

from .approx import ApproxSolution, CareProblem, approx_solution, build_hamiltonian, stable_subspace
from .bench import VerificationReport, run_suite, verify
from .enclosure import Enclosure, residual_contains_zero, residual_enclosure
from .errors import VerificationError, VerificationFailed
from .fixedpoint import method_f
from .imatrix import IntervalMatrix, RealInterval, enclose_inverse, fro_norm, verified_solve_right
from .intervals import ComplexDisc
from .krawczyk import method_h, method_k_inner
from .metrics import metric_garp, metric_nre
from .permuted import SwapSet, algorithm5_driver, method_f_permuted, method_k, select_index_set, transform_coefficients
from .problems import gen_experiment1, gen_known_solution, gen_lyapunov
from .stability import StabilityCertificate, certify_enclosure, verify_hurwitz

__version__ = "0.1.0"

__all__ = [
    "ApproxSolution", "CareProblem", "ComplexDisc", "Enclosure", "IntervalMatrix", "RealInterval",
    "StabilityCertificate", "SwapSet", "VerificationError", "VerificationFailed", "VerificationReport",
    "algorithm5_driver", "approx_solution", "build_hamiltonian", "certify_enclosure", "enclose_inverse",
    "fro_norm", "gen_experiment1", "gen_known_solution", "gen_lyapunov", "method_f", "method_f_permuted",
    "method_h", "method_k", "method_k_inner", "metric_garp", "metric_nre", "residual_contains_zero",
    "residual_enclosure", "run_suite", "select_index_set", "stable_subspace", "transform_coefficients",
    "verified_solve_right", "verify", "verify_hurwitz",
]
