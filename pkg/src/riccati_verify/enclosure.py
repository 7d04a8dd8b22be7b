"""Result type and helpers shared by every verification method."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .approx import CareProblem
from .imatrix import IntervalMatrix
from .intervals import ETA, ComplexDisc

INFLATE_FACTOR = ComplexDisc(1.0, 0.1)
INFLATE_ADD = ComplexDisc(0.0, ETA)


@dataclass
class Enclosure:
    """An interval matrix proven to contain a solution of the CARE.

    ``stabilizing_certified`` stays ``None`` until the stability check has
    run; ``True`` additionally means the enclosed solution is the unique
    stabilizing one.
    """

    X: IntervalMatrix
    iterations: int
    method: str
    stabilizing_certified: bool | None = None
    info: dict = field(default_factory=dict)


def epsilon_inflate(Z: IntervalMatrix) -> IntervalMatrix:
    """hull(0, Z * <1, 0.1> + <0, realmin>), entrywise."""
    W = Z * INFLATE_FACTOR + INFLATE_ADD
    return W.hull(np.zeros(Z.shape))


def residual_enclosure(p: CareProblem, X) -> IntervalMatrix:
    """Interval evaluation of A^* X + Q + X (A - G X).

    ``X`` may be a point array (lifted to a zero-radius interval matrix) or
    an :class:`IntervalMatrix`.
    """
    Xi = X if isinstance(X, IntervalMatrix) else IntervalMatrix(X)
    AH = IntervalMatrix(p.A.conj().T)
    return AH @ Xi + p.Q + Xi @ (p.A - IntervalMatrix(p.G) @ Xi)


def residual_contains_zero(p: CareProblem, X: IntervalMatrix) -> bool:
    """Necessary condition for X to hold a solution: 0 in F(X) entrywise."""
    return residual_enclosure(p, X).contains(np.zeros(X.shape))


def closed_loop(p: CareProblem, X) -> IntervalMatrix:
    Xi = X if isinstance(X, IntervalMatrix) else IntervalMatrix(X)
    return p.A - IntervalMatrix(p.G) @ Xi
