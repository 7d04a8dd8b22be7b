"""Test and benchmark problems, plus JSON (de)serialization.

Planted-solution problems are built in integer arithmetic on dyadic
scalings, so A, G, Q and the planted X_s are exact doubles and X_s solves
the equation exactly.  The closed loop A - G X_s is the chosen Hurwitz F.
"""

from __future__ import annotations

import json
import os

import numpy as np

from .approx import CareProblem

FORMAT_VERSION = "1"
DEFAULT_SEED = 20160817


def default_seed() -> int:
    return int(os.environ.get("RICCATI_SEED", DEFAULT_SEED))


def gen_experiment1() -> CareProblem:
    """The 2x2 benchmark problem; its closed loop has a defective double eigenvalue -1."""
    A = np.array([[0.0, 1.0], [0.0, 0.0]])
    G = np.array([[0.0, 0.0], [0.0, 1.0]])
    Q = np.array([[1.0, 0.0], [0.0, 2.0]])
    return CareProblem(A, G, Q, name="experiment1")


EXPERIMENT1_SOLUTION = np.array([[2.0, 1.0], [1.0, 2.0]])


def gen_lyapunov(n: int, g: float = 0.125) -> CareProblem:
    """A = -tridiag(-1, 4, -1), G = g I, Q = I.

    A is symmetric with eigenvalues in (-6, -2).  With ``g = 0`` this is the
    Lyapunov equation A X + X A + I = 0 with a positive definite solution.
    """
    A = -(4.0 * np.eye(n) - np.eye(n, k=1) - np.eye(n, k=-1))
    return CareProblem(A, g * np.eye(n), np.eye(n), name=f"lyapunov{n}" if g else f"lyapunov{n}-g0")


# -- exact integer helpers ----------------------------------------------------
# Complex integer matrices are (re, im) pairs of int64 arrays.


def _imul(a, b):
    ar, ai = a
    br, bi = b
    return ar @ br - ai @ bi, ar @ bi + ai @ br


def _iadd(a, b, sb=1):
    return a[0] + sb * b[0], a[1] + sb * b[1]


def _iscale(a, k):
    return a[0] * k, a[1] * k


def _iH(a):
    return a[0].T.copy(), -a[1].T


def _to_float(a, denom):
    limit = 2**53
    if np.max(np.abs(a[0]), initial=0) >= limit or np.max(np.abs(a[1]), initial=0) >= limit:
        raise OverflowError("planted problem entries are not exactly representable")
    re = a[0].astype(float) / denom
    if not np.any(a[1]):
        return re
    return re + 1j * (a[1].astype(float) / denom)


def _closed_loop_int(n, rng, defective, c_shift, complex_, density):
    """Integer numerator (over 8) of F = Pi (-D + 2**c_shift N) Pi^T.

    -D has the distinct eigenvalues -1/2, -3/4, -1, ... (a repeated one
    with a Jordan coupling when ``defective``); N is a sparse strictly upper
    triangular matrix with entries in {-1/8, 1/8}.
    """
    diag = 4 + 2 * np.arange(n)
    if defective and n >= 2:
        diag[1] = diag[0]
    Fr = np.zeros((n, n), dtype=np.int64)
    Fi = np.zeros((n, n), dtype=np.int64)
    Fr[np.diag_indices(n)] = -diag
    mask = np.triu(rng.random((n, n)) < density, 1)
    coupling = rng.choice([-1, 1], size=(n, n)) * mask
    if defective and n >= 2:
        coupling[0, 1] = 1  # Jordan coupling of the repeated eigenvalue
    Fr += coupling * 2**c_shift
    if complex_:
        Fi += rng.choice([-1, 1], size=(n, n)) * np.triu(rng.random((n, n)) < density, 1) * 2**c_shift
        Fi[np.diag_indices(n)] = rng.integers(-2, 3, size=n)
    perm = rng.permutation(n)
    return (Fr[np.ix_(perm, perm)], Fi[np.ix_(perm, perm)]), 8


def gen_known_solution(
    n: int,
    seed: int | None = None,
    defective: bool = False,
    cond_target: float | None = None,
    complex_: bool = False,
    rank_g: int | None = None,
):
    """Random CARE with an exactly known stabilizing solution.

    Parameters
    ----------
    n : int
    seed : int, optional
        Defaults to ``RICCATI_SEED`` or a fixed value.
    defective : bool
        Plant a 2x2 Jordan block in the closed loop (needs ``n >= 2``).
    cond_target : float, optional
        Double the off-diagonal coupling of the closed loop until its
        eigenvector matrix has at least this condition number.
    complex_ : bool
        Complex Hermitian data.
    rank_g : int, optional
        Rank of G (default ``max(1, n // 2)``).

    Returns
    -------
    (CareProblem, ndarray)
        The problem and its stabilizing solution X_s.
    """
    if n < 1:
        raise ValueError("n must be positive")
    if defective and n < 2:
        raise ValueError("a defective closed loop needs n >= 2")
    seed = default_seed() if seed is None else seed
    rng = np.random.default_rng(seed)
    m = max(1, n // 2) if rank_g is None else rank_g
    zero = np.zeros((n, n), dtype=np.int64)

    def rand_int(shape):
        re = rng.integers(-2, 3, size=shape)
        im = rng.integers(-2, 3, size=shape) if complex_ else np.zeros(shape, dtype=np.int64)
        return re.astype(np.int64), im.astype(np.int64)

    # Entries of X_s and G are kept O(1) by a power-of-two scaling.
    e = max(0, int(np.ceil(np.log2(n))) - 1)
    xden = gden = 4 * 2**e
    B = rand_int((n, n))
    Xi = _iadd(_imul(B, _iH(B)), (4 * np.eye(n, dtype=np.int64), zero))  # X_s = Xi / xden
    C = rand_int((n, m))
    Gi = _imul(C, _iH(C))  # G = Gi / gden

    density = min(1.0, 2.0 / max(n - 1, 1))
    c_shift = 0
    while True:
        Fi, fs = _closed_loop_int(n, np.random.default_rng([seed, 1]), defective, c_shift, complex_, density)
        if defective or cond_target is None or c_shift >= 30:
            break
        if np.linalg.cond(np.linalg.eig(_to_float(Fi, fs))[1]) >= cond_target:
            break
        c_shift += 1
    # A = F + G X_s over den; Q = X G X - A^* X - X A over qden = den * xden.
    # All denominators are powers of two, so these are exact.
    den = fs * gden * xden
    Ai = _iadd(_iscale(Fi, gden * xden), _iscale(_imul(Gi, Xi), fs))
    qden = den * xden
    Qi = _iscale(_imul(_imul(Xi, Gi), Xi), fs)
    Qi = _iadd(Qi, _imul(_iH(Ai), Xi), -1)
    Qi = _iadd(Qi, _imul(Xi, Ai), -1)
    tag = "defective" if defective else "known"
    p = CareProblem(_to_float(Ai, den), _to_float(Gi, gden), _to_float(Qi, qden), name=f"{tag}{n}-s{seed}")
    return p, _to_float(Xi, xden)


# -- JSON ---------------------------------------------------------------------


def _mat_to_json(M):
    M = np.asarray(M)
    return {"re": M.real.tolist(), "im": (M.imag if np.iscomplexobj(M) else np.zeros(M.shape)).tolist()}


def _mat_from_json(d):
    re = np.array(d["re"], dtype=float)
    im = np.array(d.get("im", np.zeros(re.shape)), dtype=float)
    return re + 1j * im if np.any(im) else re


def problem_to_dict(p: CareProblem, X_s=None) -> dict:
    d = {"format": FORMAT_VERSION, "name": p.name, "n": p.n}
    for k in ("A", "G", "Q"):
        d[k] = _mat_to_json(getattr(p, k))
    if X_s is not None:
        d["X_s"] = _mat_to_json(X_s)
    return d


def problem_from_dict(d: dict):
    """Returns ``(problem, X_s or None)``."""
    fmt = str(d.get("format", FORMAT_VERSION))
    if fmt != FORMAT_VERSION:
        raise ValueError(f"unsupported problem format {fmt!r}")
    p = CareProblem(_mat_from_json(d["A"]), _mat_from_json(d["G"]), _mat_from_json(d["Q"]), name=d.get("name", ""))
    if "n" in d and int(d["n"]) != p.n:
        raise ValueError(f"declared n={d['n']} but matrices are {p.n}x{p.n}")
    X_s = _mat_from_json(d["X_s"]) if "X_s" in d else None
    return p, X_s


def save_problem(path, p: CareProblem, X_s=None):
    with open(path, "w") as fh:
        json.dump(problem_to_dict(p, X_s), fh)


def load_problem(path):
    with open(path) as fh:
        return problem_from_dict(json.load(fh))
