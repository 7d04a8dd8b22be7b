import numpy as np
import pytest

from riccati_verify.problems import gen_experiment1, gen_known_solution

LD = np.longdouble
CLD = np.clongdouble


def random_discs(rng, size, complex_=True, zero_free=False):
    """Midpoints spread over several binades, radii from 0 up to order |mid|."""
    mag = 2.0 ** rng.uniform(-20, 20, size)
    mid = mag * rng.uniform(-1, 1, size)
    if complex_:
        mid = mid + 1j * mag * rng.uniform(-1, 1, size)
    kind = rng.integers(0, 4, size)
    rad = np.where(kind == 0, 0.0, np.abs(mid) * 10.0 ** rng.uniform(-16, 0.3, size))
    if zero_free:
        rad = np.minimum(rad, 0.99 * np.abs(mid))
    return mid, rad


def sample_points(mid, rad, rng):
    """Extended-precision points of <mid, rad>, with a mask of those verified inside."""
    m = np.asarray(mid).astype(CLD)
    r = np.asarray(rad).astype(LD)
    rho = r * np.sqrt(rng.random(np.shape(mid))).astype(LD)
    theta = 2 * np.pi * rng.random(np.shape(mid))
    z = m + rho * (np.cos(theta).astype(LD) + 1j * np.sin(theta).astype(LD))
    ok = np.abs(z - m) <= r
    return z, ok


def ld_inside(c, rad, w):
    return np.abs(np.asarray(w, dtype=CLD) - np.asarray(c).astype(CLD)) <= np.asarray(rad).astype(LD)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture(scope="session")
def experiment1():
    return gen_experiment1()


@pytest.fixture(scope="session")
def lyap2():
    from riccati_verify.approx import CareProblem

    return CareProblem(-np.eye(2), np.zeros((2, 2)), np.eye(2), name="lyap2")


@pytest.fixture(scope="session", params=[2, 5, 10])
def planted(request):
    return gen_known_solution(request.param, seed=7)
