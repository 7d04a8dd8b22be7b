"""Permuted Riccati bases.

For k in a swap set I, the symplectic swap S_k exchanges the k-th
coordinates of the two halves of a 2n-vector, (u1_k, u2_k) -> (u2_k, -u1_k).
With P the product of these swaps, P^T H P is again Hamiltonian, so it
defines a CARE with coefficients (A_P, G_P, Q_P).  Its stabilizing solution
Y satisfies [U1; U2] = P [I; Y] for the stable subspace of H, and a good
choice of I bounds every |Y_ij| by tau.  Everything here is a signed
permutation: coefficients move without rounding.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Callable

import numpy as np
import scipy.linalg

from .approx import ApproxSolution, CareProblem, approx_from_subspace, build_hamiltonian, stable_subspace
from .enclosure import Enclosure
from .errors import SelectionFailed
from .fixedpoint import method_f
from .imatrix import IntervalMatrix, verified_solve_right
from .krawczyk import K_MAX, method_k_inner

log = logging.getLogger(__name__)

TAU = 3.0


@dataclass(frozen=True)
class SwapSet:
    """Swap indices (0-based) and the entry bound tau they were chosen for."""

    indices: tuple = ()
    tau: float = TAU
    n: int | None = None

    def __post_init__(self):
        idx = tuple(sorted(int(i) for i in self.indices))
        if len(set(idx)) != len(idx):
            raise ValueError("swap indices must be distinct")
        if idx and (idx[0] < 0 or (self.n is not None and idx[-1] >= self.n)):
            raise ValueError(f"swap index out of range: {idx}")
        if not self.tau > np.sqrt(2):
            raise ValueError(f"tau must exceed sqrt(2), got {self.tau}")
        object.__setattr__(self, "indices", idx)

    def mask(self, n):
        m = np.zeros(n, dtype=bool)
        m[list(self.indices)] = True
        return m


def signed_permutation(swap: SwapSet, n: int):
    """(perm, sign) with P e_j = sign[j] * e_{perm[j]}."""
    perm = np.arange(2 * n)
    sign = np.ones(2 * n)
    for k in swap.indices:
        perm[k], perm[n + k] = n + k, k
        sign[k] = -1.0
    return perm, sign


def permutation_matrix(swap: SwapSet, n: int):
    perm, sign = signed_permutation(swap, n)
    P = np.zeros((2 * n, 2 * n))
    P[perm, np.arange(2 * n)] = sign
    return P


def conjugate_hamiltonian(H, swap: SwapSet, inverse: bool = False):
    """P^T H P (or P H P^T with ``inverse``) by index arithmetic only."""
    n = H.shape[0] // 2
    perm, sign = signed_permutation(swap, n)
    if inverse:
        inv = np.empty_like(perm)
        inv[perm] = np.arange(2 * n)
        perm, sign = inv, sign[inv]
    # (P^T H P)_ij = sign_i sign_j H[perm_i, perm_j]
    return H[np.ix_(perm, perm)] * np.outer(sign, sign)


def permute_basis(U1, U2, swap: SwapSet, inverse: bool = False):
    """P^T [U1; U2] (or P [U1; U2] with ``inverse``), exactly."""
    mask = swap.mask(U1.shape[0])
    T1, T2 = U1.copy(), U2.copy()
    if inverse:
        T1[mask], T2[mask] = U2[mask], -U1[mask]
    else:
        T1[mask], T2[mask] = -U2[mask], U1[mask]
    return T1, T2


@dataclass
class TransformedProblem:
    problem: CareProblem
    swap: SwapSet

    @property
    def A_P(self):
        return self.problem.A

    @property
    def G_P(self):
        return self.problem.G

    @property
    def Q_P(self):
        return self.problem.Q


def transform_coefficients(p: CareProblem, swap: SwapSet, inverse: bool = False) -> TransformedProblem:
    """Coefficients of the CARE whose Hamiltonian is P^T H P.

    With ``inverse`` the map is undone: ``transform_coefficients(
    transform_coefficients(p, S).problem, S, inverse=True)`` returns p
    bit for bit.
    """
    n = p.n
    HP = conjugate_hamiltonian(build_hamiltonian(p).H, swap, inverse)
    A_P = HP[:n, :n]
    G_P = -HP[:n, n:]
    Q_P = -HP[n:, :n]
    return TransformedProblem(CareProblem(A_P, G_P, Q_P, name=p.name), swap)


def _graph(T1, T2):
    """Y with T2 = Y T1, or None if T1 is numerically singular."""
    if np.linalg.cond(T1) > 1e12:
        return None
    return np.linalg.solve(T1.T, T2.T).T


def _initial_swap(U1, U2, tau):
    n = U1.shape[0]
    for cand in ((), tuple(range(n))):
        sw = SwapSet(cand, tau, n)
        if _graph(*permute_basis(U1, U2, sw)) is not None:
            return sw
    # Greedy row choice from a column-pivoted QR of the basis rows.
    _, _, piv = scipy.linalg.qr(np.vstack([U1, U2]).conj().T, pivoting=True)
    chosen = {}
    for r in piv:
        k = r % n
        if k not in chosen:
            chosen[k] = r >= n
        if len(chosen) == n:
            break
    return SwapSet(tuple(k for k, from_second in chosen.items() if from_second), tau, n)


def select_index_set(U1, U2, tau: float = TAU, budget: int | None = None) -> SwapSet:
    """Choose I so that the transformed subspace is [I; Y] M with max|Y_ij| <= tau.

    Pivoting rule: swap the index with the largest diagonal |Y_kk| while it
    exceeds tau; otherwise swap the pair (i, j) of the largest off-diagonal
    entry while it exceeds tau.  Each swap is a principal pivot on Y; for
    Hermitian Y the 2x2 pivot block is nonsingular because
    |Y_ij|^2 > tau^2 >= |Y_ii Y_jj|.  Ties go to the lowest index.

    Raises :class:`SelectionFailed` if ``budget`` (default 4n) swaps do not
    suffice.
    """
    U1 = np.asarray(U1)
    U2 = np.asarray(U2)
    n = U1.shape[0]
    budget = 4 * n if budget is None else budget
    swap = _initial_swap(U1, U2, tau)
    current = set(swap.indices)
    for _ in range(budget + 1):
        Y = _graph(*permute_basis(U1, U2, SwapSet(tuple(current), tau, n)))
        if Y is None:
            raise SelectionFailed("transformed first block became singular")
        absY = np.abs(Y)
        d = np.diag(absY)
        k = int(np.argmax(d))
        if d[k] > tau:
            current ^= {k}
            continue
        off = absY - np.diag(d)
        i, j = np.unravel_index(int(np.argmax(off)), off.shape)
        if off[i, j] > tau:
            current ^= {int(i), int(j)}
            continue
        return SwapSet(tuple(current), tau, n)
    raise SelectionFailed(f"no admissible swap set within {budget} swaps (tau={tau})")


def recover_solution(Y_enc: IntervalMatrix, swap: SwapSet) -> IntervalMatrix:
    """Enclosure of X = U2 U1^-1 where [U1; U2] = P [I; Y], Y in Y_enc.

    The rows of U1 and U2 are copied (with signs) from [I; Y_enc], so no
    interval arithmetic is spent before the final verified solve.
    """
    n = Y_enc.shape[0]
    if not swap.indices:
        return Y_enc
    mask = swap.mask(n)
    I = np.eye(n)
    dtype = np.result_type(Y_enc.mid, float)
    U1m, U1r = I.astype(dtype), np.zeros((n, n))
    U2m, U2r = Y_enc.mid.copy(), Y_enc.rad.copy()
    U1m[mask], U1r[mask] = Y_enc.mid[mask], Y_enc.rad[mask]
    U2m[mask], U2r[mask] = -I[mask], 0.0
    return verified_solve_right(IntervalMatrix(U1m, U1r), IntervalMatrix(U2m, U2r))


@dataclass
class PermutedRun:
    swap: SwapSet
    transformed: TransformedProblem
    approx: ApproxSolution
    info: dict = field(default_factory=dict)


def prepare_permuted(p: CareProblem, tau: float = TAU, subspace: str = "sign") -> PermutedRun:
    """Approximate subspace, swap selection, transform and approximate Y."""
    U1, U2 = stable_subspace(build_hamiltonian(p), subspace)
    swap = select_index_set(U1, U2, tau)
    tp = transform_coefficients(p, swap)
    T1, T2 = permute_basis(U1, U2, swap)
    approx = approx_from_subspace(tp.problem, T1, T2)
    return PermutedRun(swap, tp, approx)


def algorithm5_driver(
    p: CareProblem,
    inner: Callable[..., Enclosure] = method_k_inner,
    k_max: int = K_MAX,
    tau: float = TAU,
    subspace: str = "sign",
    tag: str | None = None,
    **inner_kwargs,
) -> Enclosure:
    """Verify p through the permuted CARE and map the enclosure back."""
    run = prepare_permuted(p, tau, subspace)
    enc_Y = inner(run.transformed.problem, run.approx, k_max, **inner_kwargs)
    X = recover_solution(enc_Y.X, run.swap)
    info = dict(enc_Y.info)
    info["swap"] = list(run.swap.indices)
    info["cond_VP"] = float(np.linalg.cond(run.approx.V))
    log.debug("permuted run: swap=%s, inner iterations=%d", run.swap.indices, enc_Y.iterations)
    return Enclosure(X, enc_Y.iterations, tag or enc_Y.method, info=info)


def method_k(p: CareProblem, k_max: int = K_MAX, tau: float = TAU, subspace: str = "sign") -> Enclosure:
    return algorithm5_driver(p, method_k_inner, k_max, tau, subspace, tag="K")


def method_f_permuted(p: CareProblem, k_max: int = K_MAX, tau: float = TAU, subspace: str = "sign", **kw) -> Enclosure:
    return algorithm5_driver(p, method_f, k_max, tau, subspace, tag="F", **kw)
