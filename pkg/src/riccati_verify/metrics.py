"""Quality measures for solution enclosures."""

from __future__ import annotations

import numpy as np

from .errors import ZeroNorm
from .imatrix import IntervalMatrix, fro_norm
from .intervals import EPS, rp_mr, upper

GARP_FLOOR = EPS**2


def metric_nre(X: IntervalMatrix) -> float:
    """Upper bound of ||rad X||_F / ||X||_F (norm-wise relative error).

    The denominator is the lower end of the interval Frobenius norm of X.
    """
    num = fro_norm(IntervalMatrix(X.rad)).hi
    den = fro_norm(X).lo
    if not den > 0:
        raise ZeroNorm("the Frobenius norm interval of X contains zero")
    if X.is_point:
        return 0.0
    return float(upper(num / den, 2))


def metric_garp(X: IntervalMatrix) -> float:
    """Geometric mean of the entrywise relative precisions rp(X_ij).

    Entries with rp = 0 (point entries) count as ``EPS**2`` so that one
    exact entry does not zero the average; the result is 0 only when every
    entry is a point.
    """
    rp = rp_mr(X.mid, X.rad)
    if not np.any(rp):
        return 0.0
    g = float(np.exp(np.mean(np.log(np.maximum(rp, GARP_FLOOR)))))
    return min(max(g, 0.0), 1.0)
