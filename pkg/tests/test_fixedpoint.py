import numpy as np
import pytest

from riccati_verify.approx import CareProblem, approx_solution
from riccati_verify.errors import UnstableClosedLoop, VerificationFailed
from riccati_verify.fixedpoint import choose_shift_and_basis, fixed_point_setup, method_f
from riccati_verify.metrics import metric_nre
from riccati_verify.problems import EXPERIMENT1_SOLUTION, gen_known_solution


def test_shift_diagonal():
    # s = -min Re(lambda): the shift sits at the far end of the spectrum
    s, V = choose_shift_and_basis(np.diag([-1.0, -3.0]))
    assert s == pytest.approx(3.0)
    assert np.allclose(np.abs(V), np.eye(2))


def test_shift_experiment1_closed_loop():
    At = np.array([[0.0, 1.0], [-1.0, -2.0]])
    s, V = choose_shift_and_basis(At)
    # double eigenvalue -1, perturbed by O(sqrt(eps)) in floating point
    assert s == pytest.approx(1.0, abs=1e-7)
    assert np.allclose(V.conj().T @ V, np.eye(2), atol=1e-14)
    T = V.conj().T @ At @ V
    assert abs(T[1, 0]) <= 1e-12


def test_shift_unstable():
    with pytest.raises(UnstableClosedLoop):
        choose_shift_and_basis(np.diag([-1.0, 0.5]))


def test_explicit_nonpositive_shift_rejected(lyap2):
    with pytest.raises(UnstableClosedLoop):
        fixed_point_setup(lyap2, 0.5 * np.eye(2), shift=-1.0)


def test_setup_encloses_shifted_inverse():
    p, X_s = gen_known_solution(4, 3)
    st = fixed_point_setup(p, approx_solution(p).X_check)
    # I_s @ (A_V^* - s I) should enclose the identity for the midpoint A_V
    prod = st.I_s @ (st.A_V.mid.conj().T - st.s * np.eye(4))
    assert prod.contains(np.eye(4))


def test_experiment1_direct(experiment1):
    enc = method_f(experiment1, approx_solution(experiment1))
    assert enc.iterations <= 5
    assert enc.X.contains(EXPERIMENT1_SOLUTION)
    assert metric_nre(enc.X) <= 1e-10


def test_lyapunov(lyap2):
    enc = method_f(lyap2, approx_solution(lyap2))
    assert enc.X.contains(0.5 * np.eye(2))


@pytest.mark.parametrize("n,seed", [(2, 0), (5, 1), (10, 2)])
def test_planted(n, seed):
    p, X_s = gen_known_solution(n, seed)
    enc = method_f(p, approx_solution(p))
    assert enc.X.contains(X_s)
    assert enc.info["shift"] > 0


@pytest.mark.parametrize("seed", range(3))
def test_defective_planted(seed):
    p, X_s = gen_known_solution(4, seed, defective=True)
    enc = method_f(p, approx_solution(p))
    assert enc.X.contains(X_s)


def test_complex_planted():
    p, X_s = gen_known_solution(5, 8, complex_=True)
    enc = method_f(p, approx_solution(p))
    assert enc.X.contains(X_s)


def test_identity_basis_option():
    p, X_s = gen_known_solution(3, 4)
    enc = method_f(p, approx_solution(p), basis="identity")
    assert enc.X.contains(X_s)
    assert enc.info["basis"] == "identity"


def test_budget_exhausted(experiment1):
    with pytest.raises(VerificationFailed):
        method_f(experiment1, approx_solution(experiment1), k_max=1)


def test_enclosure_is_around_approximation():
    p = CareProblem(np.array([[-2.0]]), np.array([[1.0]]), np.array([[3.0]]))
    # scalar: x^2 + 4x - 3 = 0, stabilizing root -2 + sqrt(7)
    enc = method_f(p, approx_solution(p))
    x = -2 + np.sqrt(np.longdouble(7))
    assert abs(np.clongdouble(enc.X.mid[0, 0]) - x) <= enc.X.rad[0, 0]
