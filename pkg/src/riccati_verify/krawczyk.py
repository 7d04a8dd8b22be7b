"""Modified Krawczyk verification in the original and the eigenvector basis.

Both methods precondition with the approximate diagonalization
A - G X ~ V Lambda W, so the n^2 x n^2 Krawczyk operator reduces to
n x n interval products and an entrywise division by D.  Unparenthesized
products are evaluated left to right; this changes the enclosure widths,
not their validity.
"""

from __future__ import annotations

import logging

import numpy as np

from .approx import ApproxSolution, CareProblem
from .enclosure import Enclosure, closed_loop, epsilon_inflate, residual_enclosure
from .errors import VerificationFailed, ZeroDivisor
from .imatrix import IntervalMatrix, enclose_inverse, hadamard_div

log = logging.getLogger(__name__)

K_MAX = 50


def _setup(s: ApproxSolution):
    if np.any(s.D == 0):
        raise ZeroDivisor("divisor matrix has a zero entry")
    I_V = enclose_inverse(s.V)
    I_W = enclose_inverse(s.W)
    return I_V, I_W


def krawczyk_step_h(p, s, I_V, I_W, L, Z):
    """Image K of the candidate Z under the operator in the original basis."""
    V, W, Lam = s.V, s.W, s.Lambda
    M = I_W.H @ Z @ V
    CL = closed_loop(p, s.X_check + Z)
    N = W @ CL @ I_W
    O = I_V @ CL @ V
    P = (Lam - N).H @ M + M @ (Lam - O)
    U = W.conj().T @ hadamard_div(P, s.D) @ I_V
    return L + U


def method_h(p: CareProblem, s: ApproxSolution, k_max: int = K_MAX) -> Enclosure:
    """Krawczyk verification with the preconditioner built from V, Lambda, W.

    Raises
    ------
    ZeroDivisor, InverseEnclosureFailed
        Before iterating, when the preconditioner cannot be set up.
    VerificationFailed
        When no strict inclusion is reached within ``k_max`` iterations.
    """
    I_V, I_W = _setup(s)
    F = residual_enclosure(p, s.X_check)
    L = -(s.W.conj().T @ hadamard_div(I_W.H @ F @ s.V, s.D) @ I_V)
    Z = L
    for k in range(1, k_max + 1):
        Z = epsilon_inflate(Z)
        K = krawczyk_step_h(p, s, I_V, I_W, L, Z)
        if K.subset_interior(Z):
            log.debug("method H: inclusion after %d iterations", k)
            return Enclosure(s.X_check + K, k, "H")
        Z = K
    raise VerificationFailed(f"no inclusion within {k_max} iterations")


def krawczyk_step_k(p, s, I_V, I_W, L_hat, Z_hat, N_hat=None):
    """Image of Z_hat in the transformed coordinates.

    ``M_hat = W^* Z_hat I_V`` is the candidate correction seen in the
    original basis.  The conjugated slope factor ``N_hat`` is taken at the
    point X_check, which proves existence (not uniqueness) of a zero; it
    does not depend on Z_hat and may be passed in precomputed.
    """
    V, W, Lam = s.V, s.W, s.Lambda
    if N_hat is None:
        N_hat = I_W.H @ closed_loop(p, s.X_check).H @ W.conj().T
    M_hat = W.conj().T @ Z_hat @ I_V
    O_hat = I_V @ closed_loop(p, s.X_check + M_hat) @ V
    P_hat = (Lam.conj().T - N_hat) @ Z_hat + Z_hat @ (Lam - O_hat)
    return L_hat + hadamard_div(P_hat, s.D)


def method_k_inner(p: CareProblem, s: ApproxSolution, k_max: int = K_MAX) -> Enclosure:
    """Krawczyk verification on the eigenvector-transformed residual map.

    Same failure modes as :func:`method_h`.  A successful result contains a
    solution, but neither uniqueness nor the stabilizing property is
    implied; see :mod:`riccati_verify.stability`.
    """
    I_V, I_W = _setup(s)
    F = residual_enclosure(p, s.X_check)
    L_hat = -hadamard_div(I_W.H @ F @ s.V, s.D)
    N_hat = I_W.H @ closed_loop(p, s.X_check).H @ s.W.conj().T
    Z_hat = L_hat
    for k in range(1, k_max + 1):
        Z_hat = epsilon_inflate(Z_hat)
        K_hat = krawczyk_step_k(p, s, I_V, I_W, L_hat, Z_hat, N_hat)
        if K_hat.subset_interior(Z_hat):
            log.debug("method K: inclusion after %d iterations", k)
            X = s.X_check + s.W.conj().T @ K_hat @ I_V
            return Enclosure(X, k, "K")
        Z_hat = K_hat
    raise VerificationFailed(f"no inclusion within {k_max} iterations")


# -- slope supersets (small n, Kronecker form) --------------------------------


def _kron_interval(A: IntervalMatrix, B: IntervalMatrix) -> IntervalMatrix:
    """Kronecker product where one factor is a point 0/1 matrix (exact)."""
    if not (A.is_point or B.is_point):
        raise ValueError("one Kronecker factor must be a point matrix")
    rad = np.kron(A.rad, np.abs(B.mid)) + np.kron(np.abs(A.mid), B.rad)
    return IntervalMatrix(np.kron(A.mid, B.mid), rad)


def slope_supersets(p: CareProblem, X_check, X_box: IntervalMatrix):
    """The two slope supersets over X_box, materialized (n <= 6).

    Returns ``(wide, tight)`` with
    ``wide  = I kron (A - G X)^* + (A - G X)^T kron I`` and
    ``tight = I kron (A - G X_check)^* + (A - G X)^T kron I``.
    """
    n = p.n
    I = IntervalMatrix(np.eye(n))
    CL_box = closed_loop(p, X_box)
    CL_pt = closed_loop(p, X_check)
    right = _kron_interval(CL_box.T, I)
    wide = _kron_interval(I, CL_box.H) + right
    tight = _kron_interval(I, CL_pt.H) + right
    return wide, tight


def point_slope(p: CareProblem, Y, Yp):
    """S(f; y, y') = I kron (A - G Y)^* + (A - G Y')^T kron I for Hermitian Y."""
    n = p.n
    I = np.eye(n)
    return np.kron(I, (p.A - p.G @ Y).conj().T) + np.kron((p.A - p.G @ Yp).T, I)


def compute_slope_superset_check(p: CareProblem, X_check, X_box: IntervalMatrix, n_samples=100, rng=None) -> bool:
    """Sample slopes S(f; X_check, Y') for Y' in X_box and test containment.

    Also checks that the tightened superset is nowhere wider than the
    general one.  Intended for tests; cost is O(n^4) memory.
    """
    rng = np.random.default_rng(rng)
    wide, tight = slope_supersets(p, X_check, X_box)
    if np.any(tight.rad > wide.rad):
        return False
    for _ in range(n_samples):
        Yp = sample_interval_matrix(X_box, rng)
        S = point_slope(p, X_check, Yp)
        if not (tight.contains(S) and wide.contains(S)):
            return False
    return True


def sample_interval_matrix(X: IntervalMatrix, rng, shrink=1.0 - 1e-9):
    """A random point of X (uniform angle, radius shrunk slightly off the boundary)."""
    shape = X.shape
    r = X.rad * np.sqrt(rng.random(shape)) * shrink
    if np.iscomplexobj(X.mid):
        return X.mid + r * np.exp(2j * np.pi * rng.random(shape))
    return X.mid + r * rng.choice([-1.0, 1.0], size=shape)
