import math

import numpy as np
import pytest
from scipy.linalg import expm
from scipy.stats import unitary_group

from dimer_eet import BARE, EIGEN, DensityMatrix, DimerParams
from dimer_eet import analytic as an
from dimer_eet import numeric as nm
from dimer_eet.exceptions import NegativeEigenvalue, ParameterError
from dimer_eet.model import eigen_to_bare_unitary

from conftest import random_density_matrix, random_params, random_x_state

PI = math.pi


def proj(n, m):
    out = np.zeros((4, 4), complex)
    out[n, m] = 1.0
    return out


def resonant_cold():
    return DimerParams(xi=5.0, theta=PI / 2)


# ------------------------------------------------------------ Liouvillian


def test_liouvillian_invariants_random(rng):
    for _ in range(100):
        L = nm.build_liouvillian(random_params(rng))
        mat = L.matrix
        scale = max(1.0, np.abs(mat).max())
        # Tr L(rho) = 0 for every rho
        assert np.abs(nm.vec(np.eye(4)) @ mat).max() < 1e-12 * scale
        h = random_density_matrix(rng)
        h = h + h.conj().T - np.trace(h) * np.eye(4) / 2
        out = L.apply(h)
        assert np.abs(out - out.conj().T).max() < 1e-12 * scale
        assert np.linalg.eigvals(mat).real.max() <= 1e-10 * scale
        for n in (0, 3):
            assert np.abs(mat @ nm.vec(proj(n, n))).max() < 1e-12


def test_generated_channel_completely_positive(rng):
    # Choi matrix of exp(L t) is positive semidefinite for a CP evolution
    for _ in range(100):
        L = nm.build_liouvillian(random_params(rng))
        channel = expm(L.matrix * rng.uniform(0.01, 2.0))
        choi = np.zeros((16, 16), complex)
        for n in range(4):
            for m in range(4):
                choi += np.kron(proj(n, m), nm.unvec(channel @ nm.vec(proj(n, m))))
        assert np.linalg.eigvalsh(choi).min() > -1e-10


def test_liouvillian_actions():
    p = DimerParams.from_mean_temperature(xi=5.0, t_mean=10.0, theta=0.3 * PI)
    L = nm.build_liouvillian(p)
    r = L.rates
    assert np.abs(L.apply(proj(0, 0))).max() == 0.0
    d = L.apply(proj(1, 1))
    assert d[1, 1].real == pytest.approx(-2 * r.gamma23, abs=1e-14)
    assert d[2, 2].real == pytest.approx(2 * r.gamma23, abs=1e-14)
    # sigma_32 = |lambda_3><lambda_2| is an eigenvector; <sigma_32> = rho[1, 2]
    d = L.apply(proj(1, 2))
    rate = -1j * L.eig.epsilon - (r.pi2 + r.pi3 + r.gamma23 + r.gamma32 - 2 * r.x23)
    assert abs(d[1, 2] - rate) < 1e-13
    mask = np.ones((4, 4), bool)
    mask[1, 2] = False
    assert np.abs(d[mask]).max() < 1e-14


def test_vec_round_trip(rng):
    rho = random_density_matrix(rng)
    assert np.array_equal(nm.unvec(nm.vec(rho)), rho)
    a, b = rng.normal(size=(2, 4, 4))
    assert np.allclose(nm.vec(a @ rho @ b), nm._sandwich(a, b) @ nm.vec(rho), atol=1e-14)


# ------------------------------------------------------------ propagation


def test_propagate_zero_time(rng):
    p = random_params(rng)
    L = nm.build_liouvillian(p)
    rho0 = DensityMatrix(random_density_matrix(rng), BARE)
    out = nm.propagate(rho0, L, 0.0)
    assert out.basis == BARE
    assert np.allclose(out.entries, rho0.entries, atol=1e-15)


def test_propagate_resonant_probability():
    p = resonant_cold()
    L = nm.build_liouvillian(p)
    rho = nm.propagate(DensityMatrix.basis_state(1, BARE), L, 5.0)
    p_num = (rho.entries[0, 0] + rho.entries[2, 2]).real
    p_res = an.transfer_probability_limit(an.Regime.RESONANT, 5.0, p)
    assert abs(p_num - p_res) < 1e-7


def test_maximally_mixed_relaxes_to_bloch_steady(rng):
    for _ in range(5):
        p = random_params(rng)
        L = nm.build_liouvillian(p)
        rho0 = DensityMatrix(np.eye(4) / 4, EIGEN)
        t_end = an.long_time(p) / 50
        rho = nm.propagate(rho0, L, t_end).entries
        ref = an.bloch_steady(an.SigmaMoments(0.25, 0.25, 0.25, 0.25), L.rates)
        got = np.real(np.diag(rho))
        assert np.allclose(got, [ref.s11, ref.s22, ref.s33, ref.s44], atol=1e-9, rtol=0)


def test_semigroup(rng):
    for _ in range(10):
        p = random_params(rng)
        L = nm.build_liouvillian(p)
        rho0 = DensityMatrix(random_density_matrix(rng), BARE)
        t1, t2 = rng.uniform(0, 3, size=2)
        direct = nm.propagate(rho0, L, t1 + t2).entries
        two = nm.propagate(nm.propagate(rho0, L, t1), L, t2).entries
        assert np.abs(direct - two).max() < 1e-8


def test_x_structure_preserved(rng):
    times = np.linspace(0, 10, 101)
    x_mask = np.zeros((4, 4), bool)
    x_mask[np.diag_indices(4)] = True
    x_mask[1, 2] = x_mask[2, 1] = x_mask[0, 3] = x_mask[3, 0] = True
    for _ in range(10):
        p = random_params(rng)
        L = nm.build_liouvillian(p)
        states = nm.propagate_series(DensityMatrix.basis_state(1, BARE), L, times)
        u = eigen_to_bare_unitary(L.eig.theta)
        bare = u @ states @ u.T
        assert np.abs(bare[:, ~x_mask]).max() < 1e-9


def test_propagate_matches_bloch(rng):
    times = np.linspace(0, 10, 51)
    for _ in range(10):
        p = random_params(rng)
        L = nm.build_liouvillian(p)
        states = nm.propagate_series(DensityMatrix.basis_state(1, BARE), L, times)
        s = an.bloch_transient(an.eg_sigma(L.eig.theta), L.rates, L.eig, times)
        assert np.abs(states[:, 1, 1].real - s.s22).max() < 1e-7
        assert np.abs(states[:, 1, 2] - s.s32).max() < 1e-7


def test_propagate_rejects_bad_input():
    L = nm.build_liouvillian(resonant_cold())
    rho0 = DensityMatrix.basis_state(1)
    with pytest.raises(ParameterError):
        nm.propagate(rho0, L, -1.0)
    with pytest.raises(ParameterError):
        nm.propagate_series(rho0, L, [1.0, 0.5])


def test_integrator_config_validation():
    nm.IntegratorConfig(method="RK45")
    with pytest.raises(ParameterError):
        nm.IntegratorConfig(rel_tol=0.0)
    with pytest.raises(ParameterError):
        nm.IntegratorConfig(max_step=-1.0)
    with pytest.raises(ParameterError):
        nm.IntegratorConfig(method="Radau")


# ------------------------------------------------------------ steady state


def test_steady_state_from_eg(rng):
    for _ in range(20):
        p = random_params(rng)
        L = nm.build_liouvillian(p)
        ss = nm.steady_state(L, DensityMatrix.basis_state(1, BARE)).to_eigen(L.eig.theta).entries
        r = L.rates
        expected = np.diag([0.0, r.gamma32, r.gamma23, 0.0]) / r.relaxation
        assert np.abs(ss - expected).max() < 1e-10
        assert np.abs(L.matrix @ nm.vec(ss)).max() < 1e-10


def test_steady_state_keeps_conserved_charges():
    L = nm.build_liouvillian(DimerParams.from_mean_temperature(xi=5.0, t_mean=10.0, theta=1.0))
    ss = nm.steady_state(L, DensityMatrix.basis_state(0, EIGEN))
    assert np.abs(ss.entries - proj(0, 0)).max() < 1e-12
    ss = nm.steady_state(L, DensityMatrix.basis_state(3, EIGEN))
    assert np.abs(ss.entries - proj(3, 3)).max() < 1e-12


def test_steady_state_zero_temperature_is_lambda3():
    L = nm.build_liouvillian(DimerParams(xi=5.0, theta=0.3 * PI))
    ss = nm.steady_state(L, DensityMatrix.basis_state(1, BARE)).to_eigen(L.eig.theta)
    assert np.abs(ss.entries - proj(2, 2)).max() < 1e-12


# ------------------------------------------------------------- concurrence


def test_wootters_examples():
    bell = DensityMatrix.pure([0, 1, 1, 0])
    assert nm.wootters_concurrence(bell) == pytest.approx(1.0, abs=1e-12)
    product = DensityMatrix.pure(np.kron([0.6, 0.8j], [1 / math.sqrt(2), -1 / math.sqrt(2)]))
    assert nm.wootters_concurrence(product) == pytest.approx(0.0, abs=1e-7)
    assert nm.wootters_concurrence(np.eye(4) / 4) == 0.0


def test_wootters_matches_x_formula(rng):
    for _ in range(200):
        rho = random_x_state(rng)
        assert nm.wootters_concurrence(rho) == pytest.approx(an.x_state_concurrence(rho), abs=1e-10)


def test_wootters_matches_pure_state_formula(rng):
    # C = 2 |ad - bc| for a|ee> + b|eg> + c|ge> + d|gg>
    for _ in range(100):
        psi = rng.normal(size=4) + 1j * rng.normal(size=4)
        psi /= np.linalg.norm(psi)
        expected = 2 * abs(psi[0] * psi[3] - psi[1] * psi[2])
        assert nm.wootters_concurrence(np.outer(psi, psi.conj())) == pytest.approx(expected, abs=1e-7)


def test_wootters_local_unitary_invariance(rng):
    for _ in range(50):
        rho = random_density_matrix(rng, rank=2)
        u = np.kron(unitary_group.rvs(2, random_state=rng), unitary_group.rvs(2, random_state=rng))
        rotated = u @ rho @ u.conj().T
        assert abs(nm.wootters_concurrence(rho) - nm.wootters_concurrence(rotated)) < 1e-9


def test_wootters_rejects_negative_state():
    bad = np.diag([0.6, 0.5, 0.0, -0.1])
    with pytest.raises(NegativeEigenvalue):
        nm.wootters_concurrence(bad)
    with pytest.raises(ParameterError):
        nm.wootters_concurrence(DensityMatrix.basis_state(1, EIGEN))


# -------------------------------------------------------- cross validation


def test_cross_validate_rejects_empty():
    with pytest.raises(ParameterError):
        nm.cross_validate([], np.linspace(0, 1, 5))


def test_cross_validate_single_point():
    report = nm.cross_validate([resonant_cold()], np.linspace(0, 10, 201), tol=1e-7)
    assert report.passed, report.deviations
    assert set(report.deviations) == {"populations", "s32", "P(t)", "C(t)", "P_ss", "C_ss"}
    doc = report.to_dict()
    assert doc["status"] == "PASS"


def test_default_grid_shape():
    grid = nm.default_validation_grid()
    assert len(grid) == 9 * 4 * 2
    assert len(nm.default_validation_grid(include_zero=True)) == 9 * 5 * 2 - 9
