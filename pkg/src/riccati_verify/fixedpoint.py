"""Verification through a shifted fixed-point form of the residual equation.

Writing X = X_check + Z turns the CARE into
A~^* Z + Z A~ + Q~ = Z G Z with A~ = A - G X_check and Q~ = F(X_check).
After the change of basis Z_V = V^* Z V and a shift s, a solution is a fixed
point of

    Z_V = (A_V - s I)^-* (Z_V G_V Z_V - Q_V - Z_V (A_V + s I)),

so an interval Z_V mapped into its own interior contains one (Brouwer).
No eigendecomposition of A~ is used beyond choosing s, which keeps the
method usable when the closed loop is defective.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .approx import ApproxSolution, CareProblem
from .enclosure import Enclosure, closed_loop, epsilon_inflate, residual_enclosure
from .errors import EigFailure, UnstableClosedLoop, VerificationFailed
from .imatrix import IntervalMatrix, enclose_inverse, verified_solve_right
from .krawczyk import K_MAX

log = logging.getLogger(__name__)


def choose_shift_and_basis(A_tilde, basis: str = "schur"):
    """Shift s = -min Re(lambda) and unitary V from the complex Schur form.

    Raises :class:`UnstableClosedLoop` unless every computed eigenvalue of
    ``A_tilde`` has negative real part.
    """
    A_tilde = np.asarray(A_tilde)
    if basis == "schur":
        try:
            T, V = scipy.linalg.schur(A_tilde, output="complex")
        except (np.linalg.LinAlgError, ValueError) as exc:
            raise EigFailure(f"Schur factorization failed: {exc}") from exc
        lam = np.diag(T)
    elif basis == "identity":
        V = np.eye(A_tilde.shape[0], dtype=complex)
        lam = np.linalg.eigvals(A_tilde)
    else:
        raise ValueError(f"unknown basis {basis!r}")
    if not np.all(np.isfinite(lam)):
        raise EigFailure("non-finite eigenvalues")
    if np.max(lam.real) >= 0:
        raise UnstableClosedLoop(
            f"approximate closed loop is not Hurwitz (max Re lambda = {np.max(lam.real):.3g})"
        )
    s = float(-np.min(lam.real))
    return s, V


@dataclass
class FixedPointSetup:
    A_tilde: IntervalMatrix
    Q_tilde: IntervalMatrix
    s: float
    V: np.ndarray
    I_V: IntervalMatrix
    A_V: IntervalMatrix
    G_V: IntervalMatrix
    Q_V: IntervalMatrix
    I_s: IntervalMatrix


def fixed_point_setup(p: CareProblem, X_check, shift=None, basis="schur") -> FixedPointSetup:
    A_t = closed_loop(p, X_check)
    Q_t = residual_enclosure(p, X_check)
    s, V = choose_shift_and_basis(p.A - p.G @ X_check, basis)
    if shift is not None:
        s = float(shift)
        if not s > 0:
            raise UnstableClosedLoop(f"shift must be positive, got {s}")
    n = p.n
    I_V = enclose_inverse(V)
    A_V = I_V @ A_t @ V
    Q_V = V.conj().T @ Q_t @ V
    G_V = I_V @ p.G @ I_V.H
    I_s = verified_solve_right(A_V.H - s * np.eye(n), np.eye(n))
    return FixedPointSetup(A_t, Q_t, s, V, I_V, A_V, G_V, Q_V, I_s)


def method_f(p: CareProblem, approx: ApproxSolution, k_max: int = K_MAX, shift=None, basis="schur") -> Enclosure:
    """Fixed-point verification around ``approx.X_check``.

    Raises
    ------
    UnstableClosedLoop, InverseEnclosureFailed, SingularInterval
        When the shifted, basis-changed problem cannot be set up.
    VerificationFailed
        When no self-inclusion is found within ``k_max`` iterations.
    """
    st = fixed_point_setup(p, approx.X_check, shift, basis)
    n = p.n
    shifted = st.A_V + st.s * np.eye(n)
    Z_V = -(st.I_s @ st.Q_V)
    for k in range(1, k_max + 1):
        Z_V = epsilon_inflate(Z_V)
        Y = st.I_s @ (-st.Q_V - Z_V @ (shifted - st.G_V @ Z_V))
        if Y.subset_interior(Z_V):
            log.debug("method F: self-inclusion after %d iterations", k)
            X = approx.X_check + st.I_V.H @ Z_V @ st.I_V
            info = {"shift": st.s, "basis": basis}
            return Enclosure(X, k, "F", info=info)
        Z_V = Y
    raise VerificationFailed(f"no self-inclusion within {k_max} iterations")
