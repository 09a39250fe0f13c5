import sys

import gmpy2
import numpy as np
import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from twospectra import JacobiMatrix, PerturbationParams

settings.register_profile("default", deadline=None, max_examples=60,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

MP_BITS = 256


@pytest.fixture
def mp():
    """Run the test body at MP_BITS of working precision."""
    with mp_context():
        yield gmpy2.mpfr


def mp_context(bits=MP_BITS):
    return gmpy2.context(gmpy2.get_context(), precision=bits)


def to_mp(values):
    return [gmpy2.mpfr(float(v)) for v in np.atleast_1d(values)]


def mp_jacobi(J):
    return JacobiMatrix(q=to_mp(J.q), b=to_mp(J.b))


def mp_params(p):
    return PerturbationParams(theta=gmpy2.mpfr(float(p.theta)), h=gmpy2.mpfr(float(p.h)))


def as_float(x):
    return np.asarray(x).astype(float) if np.ndim(x) else float(x)


@st.composite
def jacobi_matrices(draw, min_n=1, max_n=10, q_bound=10.0, b_range=(0.5, 5.0)):
    n = draw(st.integers(min_n, max_n))
    q = draw(st.lists(st.floats(-q_bound, q_bound), min_size=n, max_size=n))
    b = draw(st.lists(st.floats(*b_range), min_size=n - 1, max_size=n - 1))
    return JacobiMatrix(q=q, b=b)


@st.composite
def perturbations(draw, theta_range=(0.25, 4.0), h_bound=5.0):
    theta = draw(st.floats(*theta_range).filter(lambda t: abs(t - 1) > 1e-2))
    h = draw(st.floats(-h_bound, h_bound))
    return PerturbationParams(theta=theta, h=h)


def random_jacobi(rng, n, q_bound=10.0, b_range=(0.5, 5.0)):
    return JacobiMatrix(q=rng.uniform(-q_bound, q_bound, n), b=rng.uniform(*b_range, n - 1))


def random_complex_points(rng, count, scale=10.0):
    re = rng.uniform(-scale, scale, count)
    im = rng.uniform(0.1, scale, count) * rng.choice([-1, 1], count)
    return [complex(a, b) for a, b in zip(re, im)]


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is not None and mod.LINES:
        terminalreporter.section("acceptance criteria")
        for line in mod.LINES:
            terminalreporter.write_line(line)
