"""Floating-point (non-verified) CARE solution and spectral preconditioning data.

Nothing here is rigorous.  The outputs only steer the verification
routines; a poor approximation costs success rate, never soundness.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import scipy.linalg

from .eft import compensated_residual
from .errors import DimensionMismatch, EigFailure, NoSplitting, SingularU1, ZeroDivisor


def hermitianize(M):
    return (M + M.conj().T) / 2


def _clean(M):
    """Drop an identically zero imaginary part so real problems stay real."""
    M = np.asarray(M)
    if np.iscomplexobj(M) and not np.any(M.imag):
        return M.real.copy()
    if M.dtype.kind not in "fc":
        return M.astype(float)
    return M.copy()


@dataclass
class CareProblem:
    """Coefficients of A^* X + X A + Q = X G X.

    G and Q are hermitianized on construction; a relative asymmetry above
    ``1e-12`` is treated as an input error rather than silently averaged away.
    """

    A: np.ndarray
    G: np.ndarray
    Q: np.ndarray
    name: str = ""

    def __post_init__(self):
        self.A = _clean(self.A)
        G = _clean(self.G)
        Q = _clean(self.Q)
        n = self.A.shape[0]
        for label, M in (("A", self.A), ("G", G), ("Q", Q)):
            if M.ndim != 2 or M.shape != (n, n):
                raise DimensionMismatch(f"{label} has shape {M.shape}, expected ({n}, {n})")
        for label, M in (("G", G), ("Q", Q)):
            asym = np.max(np.abs(M - M.conj().T), initial=0.0)
            if asym > 1e-12 * max(1.0, np.max(np.abs(M), initial=0.0)):
                raise ValueError(f"{label} is not Hermitian (asymmetry {asym:.3g})")
        self.G = hermitianize(G)
        self.Q = hermitianize(Q)

    @property
    def n(self) -> int:
        return self.A.shape[0]

    @property
    def is_real(self) -> bool:
        return not any(np.iscomplexobj(M) for M in (self.A, self.G, self.Q))

    def residual(self, X):
        """Plain floating-point F(X) = A^* X + X A + Q - X G X."""
        return self.A.conj().T @ X + X @ self.A + self.Q - X @ self.G @ X


@dataclass
class HamiltonianMatrix:
    H: np.ndarray

    @property
    def n(self) -> int:
        return self.H.shape[0] // 2

    def blocks(self):
        n = self.n
        H = self.H
        return H[:n, :n], -H[:n, n:], -H[n:, :n]


def build_hamiltonian(p: CareProblem) -> HamiltonianMatrix:
    n = p.n
    dtype = np.result_type(p.A, p.G, p.Q)
    H = np.empty((2 * n, 2 * n), dtype=dtype)
    H[:n, :n] = p.A
    H[:n, n:] = -p.G
    H[n:, :n] = -p.Q
    H[n:, n:] = -p.A.conj().T
    return HamiltonianMatrix(H)


def matrix_sign(H, max_iter=100, tol=None):
    """Newton iteration for sign(H) with determinant scaling.

    Raises :class:`NoSplitting` when an iterate is singular or the iteration
    stagnates, which happens when eigenvalues sit on (or next to) the
    imaginary axis.
    """
    N = H.shape[0]
    tol = 10 * N * np.finfo(float).eps if tol is None else tol
    S = np.array(H, dtype=np.result_type(H, float))
    scale = True
    prev = np.inf
    for _ in range(max_iter):
        try:
            Si = np.linalg.inv(S)
        except np.linalg.LinAlgError as exc:
            raise NoSplitting("sign iteration hit a singular iterate") from exc
        if scale:
            _, logdet = np.linalg.slogdet(S)
            c = np.exp(-logdet / N)
            if not np.isfinite(c) or c <= 0:
                c = 1.0
        else:
            c = 1.0
        S_new = 0.5 * (c * S + Si / c)
        if not np.all(np.isfinite(S_new)):
            raise NoSplitting("sign iteration diverged")
        delta = np.linalg.norm(S_new - S, 1)
        S = S_new
        size = np.linalg.norm(S, 1)
        if delta <= 1e-2 * size:
            scale = False  # plain Newton converges quadratically from here
        # Converged, or stagnating at rounding level: quadratic convergence
        # would have at least halved the update.
        if delta <= tol * size or (not scale and delta <= 1e-8 * size and delta > 0.5 * prev):
            # one extra unscaled step cleans up the last digits
            return 0.5 * (S + np.linalg.inv(S))
        prev = delta
    raise NoSplitting(f"sign iteration did not converge in {max_iter} steps")


def stable_subspace(H, method: str = "sign"):
    """Orthonormal basis [U1; U2] of the stable invariant subspace of H.

    Parameters
    ----------
    H : HamiltonianMatrix or ndarray
    method : {"sign", "schur"}
        ``"sign"`` projects onto the range of (I - sign(H)) / 2 using a
        column-pivoted QR; ``"schur"`` uses an ordered complex Schur form.
    """
    H = H.H if isinstance(H, HamiltonianMatrix) else np.asarray(H)
    N = H.shape[0]
    n = N // 2
    if method == "sign":
        S = matrix_sign(H)
        P = 0.5 * (np.eye(N) - S)
        Qf, Rf, _ = scipy.linalg.qr(P, pivoting=True)
        diag = np.abs(np.diag(Rf))
        if n and diag[n - 1] <= 1e-8 * max(diag[0], 1.0):
            raise NoSplitting("stable projector does not have rank n")
        if n < N and diag[n] > 1e-6 * max(diag[0], 1.0):
            raise NoSplitting("stable projector has rank above n")
        U = Qf[:, :n]
    elif method == "schur":
        try:
            _, Z, sdim = scipy.linalg.schur(H, output="complex", sort="lhp")
        except (np.linalg.LinAlgError, ValueError) as exc:
            raise NoSplitting(f"ordered Schur form failed: {exc}") from exc
        if sdim != n:
            raise NoSplitting(f"found {sdim} stable eigenvalues, expected {n}")
        U = Z[:, :n]
        if not np.iscomplexobj(H):
            # a real basis of the same (real, conjugation-closed) subspace
            Qf, _, _ = scipy.linalg.qr(np.hstack([U.real, U.imag]), pivoting=True)
            U = Qf[:, :n]
    else:
        raise ValueError(f"unknown subspace method {method!r}")
    return U[:n], U[n:]


def approx_eig(M):
    """Floating-point eigendecomposition M ~ V diag(lam) W with W = inv(V)."""
    M = np.asarray(M)
    try:
        lam, V = np.linalg.eig(M)
        W = np.linalg.inv(V)
    except np.linalg.LinAlgError as exc:
        raise EigFailure(str(exc)) from exc
    if not (np.all(np.isfinite(lam)) and np.all(np.isfinite(W))):
        raise EigFailure("eigendecomposition produced non-finite values")
    V = V.astype(complex)
    return V, np.diag(lam.astype(complex)), W.astype(complex)


def divisor_matrix(Lambda):
    lam = np.diag(Lambda)
    return lam.conj()[:, None] + lam[None, :]


@dataclass
class ApproxSolution:
    X_check: np.ndarray
    V: np.ndarray
    Lambda: np.ndarray
    W: np.ndarray
    D: np.ndarray
    U1: np.ndarray | None = None
    U2: np.ndarray | None = None
    refined: bool = False
    info: dict = field(default_factory=dict)

    @property
    def lam(self):
        return np.diag(self.Lambda)


def _spectral(p: CareProblem, X):
    V, Lam, W = approx_eig(p.A - p.G @ X)
    return V, Lam, W, divisor_matrix(Lam)


def newton_refine(p: CareProblem, X, V, Lambda, W):
    """One Newton step on F(X) = 0 with a doubled-precision residual.

    The Newton correction E solves the Lyapunov equation
    (A - G X)^* E + E (A - G X) = -F(X), which the diagonalization
    A - G X ~ V Lambda W turns into an entrywise division by D.
    """
    D = divisor_matrix(Lambda)
    if np.any(D == 0):
        raise ZeroDivisor("divisor matrix has a zero entry")
    F = compensated_residual(p.A, p.G, p.Q, X)
    Eh = -(V.conj().T @ F @ V) / D
    E = W.conj().T @ Eh @ W
    if not np.iscomplexobj(X) and p.is_real:
        E = E.real
    return hermitianize(X + E)


def _res_norm(p, X):
    return float(np.linalg.norm(compensated_residual(p.A, p.G, p.Q, X)))


def approx_from_subspace(p: CareProblem, U1, U2, refine: bool = True) -> ApproxSolution:
    """X = U2 U1^-1 (hermitianized), optionally refined, plus eigendata."""
    n = p.n
    if n == 0:
        raise DimensionMismatch("empty problem")
    if np.linalg.cond(U1) > 1e14:
        raise SingularU1("U1 is numerically singular; the solution is unbounded or missing")
    try:
        X = np.linalg.solve(U1.T, U2.T).T
    except np.linalg.LinAlgError as exc:
        raise SingularU1(str(exc)) from exc
    X = hermitianize(_clean(X) if p.is_real else X)
    if p.is_real and np.iscomplexobj(X):
        X = X.real.copy()
    V, Lam, W, D = _spectral(p, X)
    refined = False
    info = {}
    if refine:
        try:
            X1 = newton_refine(p, X, V, Lam, W)
        except ZeroDivisor:
            X1 = None
        if X1 is not None and np.all(np.isfinite(X1)):
            r0, r1 = _res_norm(p, X), _res_norm(p, X1)
            info["residual_before"] = r0
            info["residual_after"] = r1
            if r1 <= r0:
                X = X1
                refined = True
                V, Lam, W, D = _spectral(p, X)
    return ApproxSolution(X, V, Lam, W, D, U1, U2, refined, info)


def approx_solution(p: CareProblem, method: str = "sign", refine: bool = True) -> ApproxSolution:
    U1, U2 = stable_subspace(build_hamiltonian(p), method)
    return approx_from_subspace(p, U1, U2, refine)
