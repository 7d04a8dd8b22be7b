"""Dense interval matrices over circular complex discs.

Products use midpoint-radius arithmetic: the midpoint is a single BLAS
product and the radius is assembled from products of nonnegative real
matrices.  For inner dimension k the floating-point error of a (complex)
dot product is below ``2 * (k + 2) * EPS`` times the dot product of the
absolute values, whatever the summation order or FMA usage, so that term
is folded into the radius before the final upward inflation.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch, InverseEnclosureFailed, SingularInterval, ZeroDivisor
from .intervals import (
    EPS,
    ComplexDisc,
    add_mr,
    checked,
    hull_mr,
    mag_mr,
    mul_mr,
    recip_mr,
    sub_mr,
    subset_interior_mr,
    contains_mr,
    upper,
)


@dataclass(frozen=True)
class RealInterval:
    lo: float
    hi: float

    def __post_init__(self):
        if not (np.isfinite(self.lo) and np.isfinite(self.hi)) or self.lo > self.hi:
            raise ValueError(f"invalid real interval [{self.lo}, {self.hi}]")

    def __contains__(self, x):
        return self.lo <= x <= self.hi


def _as_mid(x):
    x = np.asarray(x)
    if x.dtype.kind not in "fc":
        x = x.astype(float)
    return x


class IntervalMatrix:
    """A matrix of discs <mid_ij, rad_ij>.

    ``mid`` is a float or complex array, ``rad`` a nonnegative float array of
    the same shape.  Plain numpy arrays are accepted wherever an interval
    operand is expected and are treated as point matrices.
    """

    __array_priority__ = 1000

    def __init__(self, mid, rad=None):
        mid = _as_mid(mid)
        if mid.ndim != 2:
            raise DimensionMismatch(f"expected a 2-D matrix, got shape {mid.shape}")
        if rad is None:
            rad = np.zeros(mid.shape)
        else:
            rad = np.broadcast_to(np.asarray(rad, dtype=float), mid.shape).copy()
        if np.any(rad < 0):
            raise ValueError("negative radius")
        checked(mid, rad)
        self.mid = mid
        self.rad = rad

    @classmethod
    def point(cls, m):
        return cls(m)

    @classmethod
    def identity(cls, n):
        return cls(np.eye(n))

    @property
    def shape(self):
        return self.mid.shape

    @property
    def is_point(self):
        return not np.any(self.rad)

    def __repr__(self):
        return f"IntervalMatrix(shape={self.shape}, max_rad={self.rad.max(initial=0.0):.3g})"

    def __getitem__(self, idx):
        return ComplexDisc(complex(self.mid[idx]), float(self.rad[idx]))

    @property
    def H(self):
        return IntervalMatrix(self.mid.conj().T, self.rad.T)

    @property
    def T(self):
        return IntervalMatrix(self.mid.T, self.rad.T)

    def conj(self):
        return IntervalMatrix(self.mid.conj(), self.rad)

    @staticmethod
    def _parts(x):
        if isinstance(x, IntervalMatrix):
            return x.mid, x.rad
        if isinstance(x, ComplexDisc):
            return np.asarray(x.mid if x.mid.imag else x.mid.real), np.asarray(x.rad)
        m = _as_mid(x)
        return m, np.zeros(m.shape)

    def _check_same(self, m):
        if m.ndim == 2 and m.shape != self.shape:
            raise DimensionMismatch(f"shapes {self.shape} and {m.shape} differ")

    def __add__(self, other):
        m, r = self._parts(other)
        self._check_same(m)
        return IntervalMatrix(*add_mr(self.mid, self.rad, m, r))

    __radd__ = __add__

    def __sub__(self, other):
        m, r = self._parts(other)
        self._check_same(m)
        return IntervalMatrix(*sub_mr(self.mid, self.rad, m, r))

    def __rsub__(self, other):
        m, r = self._parts(other)
        self._check_same(m)
        return IntervalMatrix(*sub_mr(m, r, self.mid, self.rad))

    def __neg__(self):
        return IntervalMatrix(-self.mid, self.rad)

    def __mul__(self, other):
        """Entrywise product (broadcasting scalars and discs)."""
        m, r = self._parts(other)
        self._check_same(m)
        return IntervalMatrix(*mul_mr(self.mid, self.rad, m, r))

    __rmul__ = __mul__

    def __matmul__(self, other):
        m, r = self._parts(other)
        return IntervalMatrix(*matmul_mr(self.mid, self.rad, m, r))

    def __rmatmul__(self, other):
        m, r = self._parts(other)
        return IntervalMatrix(*matmul_mr(m, r, self.mid, self.rad))

    def mag(self):
        return mag_mr(self.mid, self.rad)

    def hull(self, other):
        m, r = self._parts(other)
        return IntervalMatrix(*hull_mr(self.mid, self.rad, m, r))

    def subset_interior(self, other) -> bool:
        """True only if every entry of self lies in the interior of other's."""
        m, r = self._parts(other)
        return bool(np.all(subset_interior_mr(self.mid, self.rad, m, r)))

    def contains(self, point) -> bool:
        return bool(np.all(contains_mr(self.mid, self.rad, np.asarray(point))))


def matmul_mr(mA, rA, mB, rB):
    if mA.ndim != 2 or mB.ndim != 2 or mA.shape[1] != mB.shape[0]:
        raise DimensionMismatch(f"cannot multiply {mA.shape} by {mB.shape}")
    k = mA.shape[1]
    with np.errstate(over="ignore", invalid="ignore"):
        return _matmul_mr(mA, rA, mB, rB, k)


def _matmul_mr(mA, rA, mB, rB, k):
    mid = mA @ mB
    aA = np.abs(mA)
    aB = np.abs(mB)
    g = 2 * (k + 2) * EPS
    if np.any(rB):
        rad = aA @ (g * aB + rB)
    else:
        rad = aA @ (g * aB)
    if np.any(rA):
        rad = rad + rA @ (aB + rB)
    return checked(mid, upper(rad, 2 * (k + 6)))


def imat_add(A, B):
    return IntervalMatrix(A) + B if not isinstance(A, IntervalMatrix) else A + B


def imat_sub(A, B):
    return IntervalMatrix(A) - B if not isinstance(A, IntervalMatrix) else A - B


def imat_mul(A, B):
    return IntervalMatrix(A) @ B if not isinstance(A, IntervalMatrix) else A @ B


def hadamard_div(A, D) -> IntervalMatrix:
    """Entrywise A ./ D for a point divisor D without zero entries."""
    A = A if isinstance(A, IntervalMatrix) else IntervalMatrix(A)
    D = _as_mid(D)
    if D.shape != A.shape:
        raise DimensionMismatch(f"divisor shape {D.shape} differs from {A.shape}")
    if np.any(D == 0):
        raise ZeroDivisor("divisor matrix has a zero entry")
    im, ir = recip_mr(D, np.zeros(D.shape))
    return IntervalMatrix(*mul_mr(A.mid, A.rad, im, ir))


def fro_norm(A) -> RealInterval:
    """Interval containing ||A0||_F for every A0 in A."""
    A = A if isinstance(A, IntervalMatrix) else IntervalMatrix(A)
    N = A.mid.size
    am = np.abs(A.mid)
    if not (np.any(am) or np.any(A.rad)):
        return RealInterval(0.0, 0.0)
    lo_entries = np.maximum(am * (1 - 2 * EPS) - A.rad, 0.0) * (1 - 2 * EPS)
    lo = float(np.sqrt(float(np.sum(lo_entries**2)) * (1 - (N + 4) * EPS)) * (1 - 2 * EPS))
    hi_entries = upper(am + A.rad, 4)
    hi = float(upper(np.sqrt(upper(float(np.sum(hi_entries**2)), N + 6)), 3))
    return RealInterval(max(lo, 0.0), hi)


def verified_solve_right(U1, U2) -> IntervalMatrix:
    """Enclose every X with X @ A0 = B0 for A0 in U1, B0 in U2.

    With R ~ mid(U1)^-1 and E = I - U1 R, ||E||_inf < 1 proves every member
    of U1 nonsingular.  Writing X = B R + X E gives
    X = B R + B R E + X E^2, and the last term is bounded row-wise through
    ||x_i||_1 <= ||(B R)_i||_1 / (1 - ||E||_inf).
    """
    U1 = U1 if isinstance(U1, IntervalMatrix) else IntervalMatrix(U1)
    U2 = U2 if isinstance(U2, IntervalMatrix) else IntervalMatrix(U2)
    n, n2 = U1.shape
    if n != n2 or U2.shape[1] != n:
        raise DimensionMismatch(f"cannot solve X U1 = U2 with U1 {U1.shape}, U2 {U2.shape}")
    try:
        R = np.linalg.inv(U1.mid)
    except np.linalg.LinAlgError as exc:
        raise SingularInterval("midpoint matrix is singular") from exc
    if not np.all(np.isfinite(R)):
        raise SingularInterval("midpoint inverse is not finite")
    E = np.eye(n) - U1 @ R
    magE = E.mag()
    beta = float(upper(np.max(np.sum(magE, axis=1)), n + 4))
    if not beta < 1.0:
        raise SingularInterval(
            f"cannot certify nonsingularity (||I - U1 R|| <= {beta:.3g})"
        )
    B = U2 @ R
    X = B + B @ E
    b1 = upper(np.sum(B.mag(), axis=1), n + 4)
    rb = upper(b1 / ((1.0 - beta) * (1 - 2 * EPS)), 4)
    colsum = upper(np.sum(magE, axis=0), n + 4)
    w = upper(colsum @ magE, 2 * (n + 4))
    extra = upper(np.outer(rb, w), 2)
    return IntervalMatrix(X.mid, upper(X.rad + extra, 2))


def enclose_inverse(M) -> IntervalMatrix:
    """Interval matrix certified to contain the exact inverse of the point matrix M."""
    M = _as_mid(M)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise DimensionMismatch(f"expected a square matrix, got {M.shape}")
    try:
        return verified_solve_right(IntervalMatrix(M), IntervalMatrix(np.eye(M.shape[0])))
    except SingularInterval as exc:
        raise InverseEnclosureFailed(str(exc)) from exc


def vec(M):
    """Column-stacking vectorization."""
    return np.asarray(M).reshape(-1, order="F")


def kron_vec_oracle(A, B, C):
    """Both sides of vec(A B C) = (C^T kron A) vec(B); small sizes only."""
    return vec(A @ B @ C), np.kron(C.T, A) @ vec(B)
