from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from riccati_verify.eft import CompensatedSum, compensated_residual, split, two_prod, two_sum

doubles = st.floats(-1e150, 1e150, allow_nan=False, allow_infinity=False)


@given(doubles, doubles)
def test_two_sum_exact(a, b):
    s, e = two_sum(np.float64(a), np.float64(b))
    assert s == a + b
    assert Fraction(float(s)) + Fraction(float(e)) == Fraction(a) + Fraction(b)


@given(st.floats(-1e100, 1e100, allow_nan=False))
def test_split_exact(a):
    hi, lo = split(np.float64(a))
    assert Fraction(float(hi)) + Fraction(float(lo)) == Fraction(a)


@given(st.floats(-1e100, 1e100, allow_nan=False), st.floats(-1e100, 1e100, allow_nan=False))
def test_two_prod_exact(a, b):
    p, e = two_prod(np.float64(a), np.float64(b))
    exact = Fraction(a) * Fraction(b)
    if exact == 0 or abs(exact) > Fraction(2) ** -960:  # error term must not underflow
        assert Fraction(float(p)) + Fraction(float(e)) == exact


def test_compensated_sum_cancellation():
    acc = CompensatedSum(())
    for x in (1e16, 1.0, -1e16, 1.0):
        acc.add(np.float64(x))
    assert acc.value() == 2.0


def _exact_residual(A, G, Q, X):
    F = lambda M: [[Fraction(float(v)) for v in row] for row in M]
    A, G, Q, X = (F(M) for M in (A, G, Q, X))
    n = len(A)

    def mm(P, R):
        return [[sum(P[i][k] * R[k][j] for k in range(n)) for j in range(n)] for i in range(n)]

    AT = [[A[j][i] for j in range(n)] for i in range(n)]
    t1, t2, t3 = mm(AT, X), mm(X, A), mm(mm(X, G), X)
    return np.array([[float(t1[i][j] + t2[i][j] + Q[i][j] - t3[i][j]) for j in range(n)] for i in range(n)])


@pytest.mark.parametrize("seed", range(5))
def test_compensated_residual_matches_exact(seed):
    rng = np.random.default_rng(seed)
    n = 4
    A = rng.standard_normal((n, n))
    G = rng.standard_normal((n, n))
    G = G @ G.T
    X = rng.standard_normal((n, n))
    X = X + X.T
    # Q chosen so that the residual nearly cancels
    Q = -(A.T @ X + X @ A - X @ G @ X)
    exact = _exact_residual(A, G, Q, X)
    comp = compensated_residual(A, G, Q, X)
    naive = A.T @ X + X @ A + Q - X @ G @ X
    scale = np.max(np.abs(X @ G @ X))
    assert np.max(np.abs(comp - exact)) <= 1e-28 * scale + 1e-300
    assert np.max(np.abs(comp - exact)) <= np.max(np.abs(naive - exact)) + 1e-300


def test_compensated_residual_complex():
    rng = np.random.default_rng(3)
    n = 3
    A = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    X = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    X = X + X.conj().T
    G = np.eye(n)
    Q = -(A.conj().T @ X + X @ A - X @ G @ X)
    Q = (Q + Q.conj().T) / 2
    r = compensated_residual(A, G, Q, X)
    naive = A.conj().T @ X + X @ A + Q - X @ G @ X
    assert np.max(np.abs(r)) <= 10 * np.max(np.abs(naive)) + 1e-14
    assert np.allclose(r, naive, atol=1e-13)
