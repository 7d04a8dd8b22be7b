"""Certify that every matrix in an interval matrix is Hurwitz stable.

With an approximate eigendecomposition mid(M) ~ V Lambda W, every
eigenvalue of every member of M lies in a union of discs centred at the
Lambda_ii with radii r_i computed below.  If all discs stay in the open left
half plane, every member is Hurwitz.  Applied to A - G X for a solution
enclosure X this proves the enclosed solution is the unique stabilizing one.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .approx import CareProblem, approx_eig
from .enclosure import Enclosure, closed_loop
from .errors import VerificationError
from .imatrix import IntervalMatrix
from .intervals import EPS, upper


@dataclass(frozen=True)
class StabilityCertificate:
    success: bool
    mu: float = float("nan")
    t_max: float = float("nan")
    spectral_bound: float = float("nan")
    reason: str = ""


def _row_sums_up(M):
    n = M.shape[1]
    return upper(np.sum(M, axis=1), n + 2)


def verify_hurwitz(M) -> StabilityCertificate:
    """Attempt to prove that every M0 in M has all eigenvalues in Re z < 0."""
    M = M if isinstance(M, IntervalMatrix) else IntervalMatrix(M)
    n = M.shape[0]
    if M.shape != (n, n):
        raise ValueError(f"expected a square matrix, got {M.shape}")
    V, Lam, W = approx_eig(M.mid)
    Vi = IntervalMatrix(V)
    R = (W @ (M @ Vi - Vi @ Lam)).mag()
    S = (np.eye(n) - Vi @ W).mag()
    u = _row_sums_up(R)
    t = _row_sums_up(S)
    t_max = float(np.max(t))
    if not t_max < 1.0:
        return StabilityCertificate(False, t_max=t_max, reason="eigenvector matrix too ill-conditioned (max t >= 1)")
    denom = (1.0 - t) * (1.0 - 2 * EPS)
    mu = float(np.max(upper(u / denom, 4)))
    r = upper(u + mu * t, 4)
    max_re = float(np.max(Lam.diagonal().real))
    bound = float(np.max(r) + max_re)
    # fl(r + m) < 0 exactly when r + m < 0, so this comparison is rigorous.
    ok = bool(np.all(r + max_re < 0))
    return StabilityCertificate(ok, mu, t_max, bound, "" if ok else "inclusion discs reach Re z >= 0")


def certify_enclosure(p: CareProblem, enc: Enclosure) -> Enclosure:
    """Run :func:`verify_hurwitz` on A - G X and record the outcome."""
    try:
        cert = verify_hurwitz(closed_loop(p, enc.X))
    except VerificationError as exc:
        cert = StabilityCertificate(False, reason=f"{type(exc).__name__}: {exc}")
    info = dict(enc.info)
    info["stability"] = cert
    return replace(enc, stabilizing_certified=cert.success, info=info)
