from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from riccati_verify.approx import CareProblem, build_hamiltonian, stable_subspace
from riccati_verify.errors import VerificationError
from riccati_verify.imatrix import IntervalMatrix
from riccati_verify.metrics import metric_nre
from riccati_verify.permuted import (
    SwapSet,
    algorithm5_driver,
    conjugate_hamiltonian,
    method_f_permuted,
    method_k,
    permutation_matrix,
    permute_basis,
    prepare_permuted,
    recover_solution,
    select_index_set,
    transform_coefficients,
)
from riccati_verify.problems import EXPERIMENT1_SOLUTION, gen_known_solution


def random_problem(rng, n, complex_=False):
    A = rng.standard_normal((n, n))
    G = rng.standard_normal((n, n))
    Q = rng.standard_normal((n, n))
    if complex_:
        A = A + 1j * rng.standard_normal((n, n))
        G = G + 1j * rng.standard_normal((n, n))
        Q = Q + 1j * rng.standard_normal((n, n))
    return CareProblem(A, (G + G.conj().T) / 2, (Q + Q.conj().T) / 2)


def random_swap(rng, n):
    return SwapSet(tuple(np.flatnonzero(rng.random(n) < 0.5)), n=n)


def same(P, R):
    return np.array_equal(P.A, R.A) and np.array_equal(P.G, R.G) and np.array_equal(P.Q, R.Q)


# -- coefficient transform ----------------------------------------------------


def test_empty_swap_is_identity(rng):
    p = random_problem(rng, 4)
    assert same(transform_coefficients(p, SwapSet()).problem, p)


@pytest.mark.parametrize("complex_", [False, True])
def test_full_swap_closed_form(rng, complex_):
    p = random_problem(rng, 5, complex_)
    tp = transform_coefficients(p, SwapSet(tuple(range(5))))
    assert np.array_equal(tp.A_P, -p.A.conj().T)
    assert np.array_equal(tp.G_P, -p.Q)
    assert np.array_equal(tp.Q_P, -p.G)


@pytest.mark.parametrize("seed", range(10))
def test_structure_matches_explicit_conjugation(seed):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(1, 7))
    p = random_problem(rng, n, complex_=bool(seed % 2))
    swap = random_swap(rng, n)
    tp = transform_coefficients(p, swap)
    P = permutation_matrix(swap, n)
    # products with a signed permutation matrix are exact in floating point
    HP = P.T @ build_hamiltonian(p).H @ P
    assert np.array_equal(build_hamiltonian(tp.problem).H, HP)
    assert np.array_equal(P @ P.T, np.eye(2 * n))


@pytest.mark.parametrize("seed", range(10))
def test_forward_then_inverse_bit_exact(seed):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(1, 7))
    p = random_problem(rng, n, complex_=bool(seed % 2))
    swap = random_swap(rng, n)
    back = transform_coefficients(transform_coefficients(p, swap).problem, swap, inverse=True).problem
    assert same(back, p)


@pytest.mark.parametrize("seed", range(10))
def test_double_application_bit_exact(seed):
    # P^2 = diag(d, d) with d = -1 on the swap set, so two applications
    # conjugate the coefficients by d; the identity holds exactly for
    # the empty and the full swap set.
    rng = np.random.default_rng(seed)
    n = int(rng.integers(1, 7))
    p = random_problem(rng, n, complex_=bool(seed % 2))
    swap = random_swap(rng, n)
    twice = transform_coefficients(transform_coefficients(p, swap).problem, swap).problem
    d = np.where(swap.mask(n), -1.0, 1.0)
    Dm = np.outer(d, d)
    assert np.array_equal(twice.A, Dm * p.A)
    assert np.array_equal(twice.G, Dm * p.G)
    assert np.array_equal(twice.Q, Dm * p.Q)
    for full in (SwapSet(), SwapSet(tuple(range(n)))):
        assert same(transform_coefficients(transform_coefficients(p, full).problem, full).problem, p)


@pytest.mark.parametrize("seed", range(5))
def test_hermitian_preserved(seed):
    rng = np.random.default_rng(seed)
    p = random_problem(rng, 5, complex_=True)
    tp = transform_coefficients(p, random_swap(rng, 5))
    assert np.array_equal(tp.G_P, tp.G_P.conj().T)
    assert np.array_equal(tp.Q_P, tp.Q_P.conj().T)


def test_conjugate_inverse_roundtrip(rng):
    H = rng.standard_normal((8, 8))
    swap = SwapSet((0, 2), n=4)
    assert np.array_equal(conjugate_hamiltonian(conjugate_hamiltonian(H, swap), swap, inverse=True), H)


def test_permute_basis_matches_matrix(rng):
    n = 4
    U1, U2 = rng.standard_normal((n, n)), rng.standard_normal((n, n))
    swap = SwapSet((1, 3), n=n)
    T1, T2 = permute_basis(U1, U2, swap)
    P = permutation_matrix(swap, n)
    assert np.array_equal(np.vstack([T1, T2]), P.T @ np.vstack([U1, U2]))
    B1, B2 = permute_basis(T1, T2, swap, inverse=True)
    assert np.array_equal(B1, U1) and np.array_equal(B2, U2)


def test_swapset_validation():
    with pytest.raises(ValueError):
        SwapSet((1, 1))
    with pytest.raises(ValueError):
        SwapSet((3,), n=2)
    with pytest.raises(ValueError):
        SwapSet(tau=1.0)


# -- index selection ------------------------------------------------------------


def test_select_bounded_graph_keeps_empty():
    X = np.array([[2.0, -1.0], [-1.0, 0.5]])
    assert select_index_set(np.eye(2), X).indices == ()


def test_select_scalar_large():
    swap = select_index_set(np.array([[1.0]]), np.array([[1e6]]))
    assert swap.indices == (0,)
    T1, T2 = permute_basis(np.array([[1.0]]), np.array([[1e6]]), swap)
    assert (T2 / T1)[0, 0] == pytest.approx(-1e-6, rel=1e-15)


def test_experiment1_selection(experiment1):
    run = prepare_permuted(experiment1)
    assert np.max(np.abs(run.approx.X_check)) <= 3


def test_experiment1_full_swap_closed_loop(experiment1):
    # Y_s = -X_s^-1 for the full swap; compare the closed loop exactly
    tp = transform_coefficients(experiment1, SwapSet((0, 1)))
    F = lambda M: [[Fraction(float(v)) for v in row] for row in M]
    A, G = F(tp.A_P), F(tp.G_P)
    Y = [[Fraction(-2, 3), Fraction(1, 3)], [Fraction(1, 3), Fraction(-2, 3)]]
    CL = [[A[i][j] - sum(G[i][k] * Y[k][j] for k in range(2)) for j in range(2)] for i in range(2)]
    assert CL == [[Fraction(-2, 3), Fraction(1, 3)], [Fraction(-1, 3), Fraction(-4, 3)]]


def random_lagrangian(rng, n, scale):
    """Orthonormal basis of the graph of a Hermitian matrix with large entries."""
    X = rng.standard_normal((n, n)) * scale
    X = X + X.T
    U, _ = np.linalg.qr(np.vstack([np.eye(n), X]))
    return U[:n], U[n:]


@pytest.mark.parametrize("seed", range(20))
def test_selected_graph_bounded(seed):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(1, 9))
    U1, U2 = random_lagrangian(rng, n, 10.0 ** rng.uniform(-2, 6))
    swap = select_index_set(U1, U2, tau=3.0)
    T1, T2 = permute_basis(U1, U2, swap)
    Y = np.linalg.solve(T1.T, T2.T).T
    assert np.max(np.abs(Y)) <= 3.0


@settings(max_examples=30, deadline=None)
@given(st.integers(1, 6), st.integers(0, 2**31), st.floats(1.5, 10))
def test_selected_graph_bounded_any_tau(n, seed, tau):
    rng = np.random.default_rng(seed)
    U1, U2 = random_lagrangian(rng, n, 100.0)
    swap = select_index_set(U1, U2, tau=tau)
    T1, T2 = permute_basis(U1, U2, swap)
    assert np.max(np.abs(np.linalg.solve(T1.T, T2.T).T)) <= tau


# -- recovery and end-to-end --------------------------------------------------


def test_recover_empty_swap():
    Y = IntervalMatrix(np.array([[1.0, 2.0], [2.0, 3.0]]), 1e-10)
    X = recover_solution(Y, SwapSet())
    assert np.array_equal(X.mid, Y.mid) and np.array_equal(X.rad, Y.rad)


def test_recover_scalar():
    X = recover_solution(IntervalMatrix(np.array([[-1e-6]])), SwapSet((0,)))
    assert X.contains(np.array([[1e6]]))
    assert X.rad[0, 0] <= 1e-14 * 1e6


def test_recover_contains_preimage(rng):
    n = 4
    X_s, _ = np.linalg.qr(rng.standard_normal((n, n)))
    X_s = X_s @ np.diag([50.0, -20.0, 1.0, 0.3]) @ X_s.T
    swap = SwapSet((0, 2), n=n)
    T1, T2 = permute_basis(np.eye(n), X_s, swap)
    Y = np.linalg.solve(T1.T, T2.T).T
    X = recover_solution(IntervalMatrix(Y, 1e-9 * np.abs(Y) + 1e-12), swap)
    assert np.max(np.abs(X.mid - X_s)) < 1e-6 * np.max(np.abs(X_s))


def test_experiment1_k_fails_f_succeeds(experiment1):
    with pytest.raises(VerificationError):
        method_k(experiment1)
    enc = method_f_permuted(experiment1)
    assert enc.X.contains(EXPERIMENT1_SOLUTION)
    assert metric_nre(enc.X) <= 1e-10


@pytest.mark.parametrize("method", [method_k, method_f_permuted])
def test_lyapunov_both_inners(lyap2, method):
    enc = method(lyap2)
    assert enc.X.contains(0.5 * np.eye(2))


@pytest.mark.parametrize("method", [method_k, method_f_permuted])
@pytest.mark.parametrize("n,seed", [(3, 0), (6, 1), (12, 2)])
def test_planted_end_to_end(method, n, seed):
    p, X_s = gen_known_solution(n, seed)
    enc = method(p)
    assert enc.X.contains(X_s)
    assert "swap" in enc.info and "cond_VP" in enc.info


def test_nonempty_swap_end_to_end():
    # scaling the planted solution forces a swap
    p, X_s = gen_known_solution(4, 3)
    scale = 64.0
    q = CareProblem(p.A, p.G / scale, p.Q * scale)
    enc = algorithm5_driver(q, tau=3.0)
    assert enc.info["swap"]
    assert enc.X.contains(X_s * scale)


def test_schur_subspace_option():
    p, X_s = gen_known_solution(5, 6)
    enc = method_f_permuted(p, subspace="schur")
    assert enc.X.contains(X_s)


def test_stable_subspace_options_agree():
    p, X_s = gen_known_solution(5, 6)
    for m in ("sign", "schur"):
        U1, U2 = stable_subspace(build_hamiltonian(p), m)
        assert np.allclose(np.linalg.solve(U1.T, U2.T).T, X_s, atol=1e-9)
