import math

import numpy as np
import pytest
from hypothesis import strategies as st

from dimer_eet import DimerParams

ACCEPTANCE_LINES = []


def random_params(rng, t_max=200.0, equal_baths=False):
    theta = rng.uniform(0.02, 0.98) * math.pi
    t1, t2 = rng.uniform(0, t_max, size=2)
    g1, g2 = rng.uniform(0.1, 3.0, size=2)
    e1, e2 = rng.uniform(0, 0.05, size=2)
    if equal_baths:
        g2, e2 = g1, e1
    return DimerParams(xi=rng.uniform(0.5, 20.0), theta=theta, gamma1=g1, gamma2=g2,
                       eta1=e1, eta2=e2, T1=t1, T2=t2)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@st.composite
def dimer_params(draw, max_temp=200.0):
    theta = draw(st.floats(0.02 * math.pi, 0.98 * math.pi))
    return DimerParams(
        xi=draw(st.floats(0.5, 20.0)),
        theta=theta,
        gamma1=draw(st.floats(0.05, 3.0)),
        gamma2=draw(st.floats(0.05, 3.0)),
        eta1=draw(st.floats(0.0, 0.05)),
        eta2=draw(st.floats(0.0, 0.05)),
        T1=draw(st.floats(0.0, max_temp)),
        T2=draw(st.floats(0.0, max_temp)),
    )


def random_density_matrix(rng, dim=4, rank=None):
    rank = rank or dim
    a = rng.normal(size=(dim, rank)) + 1j * rng.normal(size=(dim, rank))
    rho = a @ a.conj().T
    return rho / np.trace(rho).real


def random_x_state(rng):
    p = rng.dirichlet(np.ones(4))
    rho = np.diag(p).astype(complex)
    u = rng.uniform(0, 1, size=2)
    ph = np.exp(2j * math.pi * rng.uniform(size=2))
    rho[1, 2] = u[0] * math.sqrt(p[1] * p[2]) * ph[0]
    rho[2, 1] = np.conj(rho[1, 2])
    rho[0, 3] = u[1] * math.sqrt(p[0] * p[3]) * ph[1]
    rho[3, 0] = np.conj(rho[0, 3])
    return rho


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
