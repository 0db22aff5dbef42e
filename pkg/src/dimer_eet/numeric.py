"""Numerical reference for the analytic layer.

The eigenbasis master equation is assembled term by term as a 16x16
superoperator on column-stacked density matrices, integrated with an
embedded Runge-Kutta pair, and its steady state is obtained by projecting
onto the Liouvillian kernel.  Entanglement is measured with the general
Wootters concurrence.

The generator is written in the frame rotating at the mean TLS frequency
omega_m, so E_1 = E_4 = 0.  The frame change is exact because every jump
operator conserves the excitation number; it only rotates the phase of
<ee|rho|gg>.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

import numpy as np
from scipy.integrate import solve_ivp

from . import analytic
from .exceptions import (
    DimerError,
    InvariantViolation,
    KernelResolutionFailure,
    NegativeEigenvalue,
    ParameterError,
    StepSizeUnderflow,
)
from .model import (
    BARE,
    EIGEN,
    DensityMatrix,
    DimerParams,
    Eigensystem,
    RateSet,
    effective_rates,
    eigen_to_bare_unitary,
    eigensystem,
)

__all__ = [
    "Liouvillian",
    "IntegratorConfig",
    "ValidationReport",
    "vec",
    "unvec",
    "build_liouvillian",
    "propagate",
    "propagate_series",
    "steady_state",
    "wootters_concurrence",
    "cross_validate",
    "default_validation_grid",
]

TRACE_DRIFT = 1e-10
HERMITIAN_DRIFT = 1e-10
POSITIVITY_FLOOR = -1e-9
KERNEL_TOL = 1e-8
RESIDUAL_TOL = 1e-10
WOOTTERS_CLAMP = -1e-10

_SIGMA_Y2 = np.array([[0, 0, 0, -1],
                      [0, 0, 1, 0],
                      [0, 1, 0, 0],
                      [-1, 0, 0, 0]], dtype=complex)


def vec(rho: np.ndarray) -> np.ndarray:
    """Column-stack a square matrix."""
    return np.asarray(rho).reshape(-1, order="F")


def unvec(v: np.ndarray, dim: int = 4) -> np.ndarray:
    return np.asarray(v).reshape(dim, dim, order="F")


def _sandwich(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Superoperator of rho -> a rho b for column stacking."""
    return np.kron(b.T, a)


def _proj(n: int, m: int) -> np.ndarray:
    op = np.zeros((4, 4), dtype=complex)
    op[n, m] = 1.0
    return op


def _dissipator(jump: np.ndarray) -> np.ndarray:
    """rho -> 2 J rho J^+ - J^+J rho - rho J^+J."""
    jj = jump.conj().T @ jump
    eye = np.eye(4)
    return 2 * _sandwich(jump, jump.conj().T) - _sandwich(jj, eye) - _sandwich(eye, jj)


@dataclass(frozen=True)
class Liouvillian:
    matrix: np.ndarray
    rates: RateSet
    eig: Eigensystem

    def apply(self, rho: np.ndarray) -> np.ndarray:
        return unvec(self.matrix @ vec(rho))


@dataclass(frozen=True)
class IntegratorConfig:
    rel_tol: float = 1e-9
    abs_tol: float = 1e-11
    max_step: float = math.inf
    method: str = "DOP853"

    def __post_init__(self):
        if not (self.rel_tol > 0 and self.abs_tol > 0):
            raise ParameterError("integrator tolerances must be > 0")
        if not self.max_step > 0:
            raise ParameterError("max_step must be > 0")
        if self.method not in ("RK45", "DOP853"):
            raise ParameterError(f"method must be RK45 or DOP853, got {self.method!r}")


def build_liouvillian(params: DimerParams) -> Liouvillian:
    """Eigenbasis generator with dephasing, thermal transfer and cross terms."""
    eig = eigensystem(params)
    r = effective_rates(params, eig)
    eye = np.eye(4)
    s = [[_proj(n, m) for m in range(4)] for n in range(4)]

    h = np.diag([0.0, eig.epsilon / 2, -eig.epsilon / 2, 0.0]).astype(complex)
    lv = 1j * (_sandwich(eye, h) - _sandwich(h, eye))

    for n, rate in ((0, r.pi1), (1, r.pi2), (2, r.pi3)):
        lv += rate * _dissipator(s[n][n])
    # pumping lambda_3 -> lambda_2 and decay lambda_2 -> lambda_3
    lv += r.gamma32 * _dissipator(s[1][2])
    lv += r.gamma23 * _dissipator(s[2][1])
    for (n, m), rate in (((0, 1), r.x12), ((0, 2), r.x13), ((2, 1), r.x23)):
        lv += 2 * rate * (_sandwich(s[n][n], s[m][m]) + _sandwich(s[m][m], s[n][n]))
    return Liouvillian(matrix=lv, rates=r, eig=eig)


def _as_eigen(rho0: DensityMatrix, theta: float) -> np.ndarray:
    return rho0.to_eigen(theta).entries


def _check_invariants(states: np.ndarray, where: str = ""):
    for rho in np.atleast_3d(states).reshape(-1, 4, 4):
        trace_drift = abs(np.trace(rho) - 1.0)
        herm_drift = np.abs(rho - rho.conj().T).max()
        if trace_drift > TRACE_DRIFT:
            raise InvariantViolation(f"trace drift {trace_drift:.3e}{where}")
        if herm_drift > HERMITIAN_DRIFT:
            raise InvariantViolation(f"Hermiticity drift {herm_drift:.3e}{where}")
        lowest = np.linalg.eigvalsh(0.5 * (rho + rho.conj().T)).min()
        if lowest < POSITIVITY_FLOOR:
            raise InvariantViolation(f"negative eigenvalue {lowest:.3e}{where}")


def propagate_series(rho0: DensityMatrix, L: Liouvillian, times: Sequence[float],
                     cfg: Optional[IntegratorConfig] = None) -> np.ndarray:
    """Eigenbasis density matrices at each of ``times`` (shape (n, 4, 4)).

    Raises
    ------
    StepSizeUnderflow
        If the adaptive controller cannot make progress.
    InvariantViolation
        If trace, Hermiticity or positivity drift beyond tolerance.
    """
    cfg = cfg or IntegratorConfig()
    times = np.asarray(times, dtype=float)
    if times.ndim != 1 or times.size == 0:
        raise ParameterError("times must be a nonempty 1-d sequence")
    if np.any(times < 0) or np.any(np.diff(times) < 0):
        raise ParameterError("times must be >= 0 and sorted ascending")
    y0 = vec(_as_eigen(rho0, L.eig.theta))
    t_end = float(times[-1])
    if t_end == 0:
        return np.repeat(unvec(y0)[None], times.size, axis=0)

    mat = L.matrix
    sol = solve_ivp(lambda _t, y: mat @ y, (0.0, t_end), y0,
                    method=cfg.method, t_eval=times, rtol=cfg.rel_tol,
                    atol=cfg.abs_tol, max_step=cfg.max_step)
    if sol.status != 0:
        raise StepSizeUnderflow(f"integration failed at t={sol.t[-1] if sol.t.size else 0}: "
                                f"{sol.message}")
    states = sol.y.T.reshape(-1, 4, 4).transpose(0, 2, 1)
    _check_invariants(states)
    return states


def propagate(rho0: DensityMatrix, L: Liouvillian, t: float,
              cfg: Optional[IntegratorConfig] = None) -> DensityMatrix:
    """State at time ``t`` in the basis of ``rho0``."""
    if t < 0:
        raise ParameterError("time must be >= 0")
    rho = propagate_series(rho0, L, [t], cfg)[0]
    out = DensityMatrix(rho, EIGEN)
    return out.to_bare(L.eig.theta) if rho0.basis == BARE else out


def _null_space(mat: np.ndarray, scale: float, tol: float):
    _, sv, vh = np.linalg.svd(mat)
    small = sv <= tol * scale
    band = (sv > tol * scale) & (sv <= 10 * tol * scale)
    if np.any(band):
        raise KernelResolutionFailure(
            f"singular values {sv[band]} are too close to the kernel threshold")
    return vh[small].conj().T


def steady_state(L: Liouvillian, rho0: DensityMatrix, tol: float = KERNEL_TOL) -> DensityMatrix:
    """Long-time limit of ``rho0`` by spectral projection onto ker L.

    The kernel is at least three dimensional (sigma_11, sigma_44 and the
    single-excitation block are separately conserved), so the limit keeps
    the conserved charges of ``rho0``.
    """
    mat = L.matrix
    scale = max(1.0, np.linalg.norm(mat, 2))
    right = _null_space(mat, scale, tol)
    left = _null_space(mat.conj().T, scale, tol)
    if right.shape[1] != left.shape[1] or right.shape[1] < 3:
        raise KernelResolutionFailure(
            f"kernel dimensions disagree or too small: {right.shape[1]}, {left.shape[1]}")
    overlap = left.conj().T @ right
    if np.linalg.cond(overlap) > 1e8:
        raise KernelResolutionFailure("zero eigenvalue is not semisimple")
    y0 = vec(_as_eigen(rho0, L.eig.theta))
    y = right @ np.linalg.solve(overlap, left.conj().T @ y0)
    residual = np.abs(mat @ y).max()
    if residual > RESIDUAL_TOL:
        raise KernelResolutionFailure(f"steady-state residual {residual:.3e}")
    out = DensityMatrix(unvec(y), EIGEN)
    return out.to_bare(L.eig.theta) if rho0.basis == BARE else out


def wootters_concurrence(rho) -> float:
    """General two-qubit concurrence of a bare-basis state.

    The values sqrt(s_i) are the singular values of sqrt(rho) Y sqrt(rho)^*
    with Y = sigma_y (x) sigma_y, i.e. the square roots of the eigenvalues
    of the Hermitian sqrt(rho) rho~ sqrt(rho).
    """
    if isinstance(rho, DensityMatrix):
        if rho.basis != BARE:
            raise ParameterError("concurrence needs a bare-basis matrix")
        m = rho.entries
    else:
        m = np.asarray(rho, dtype=complex)
    w, v = np.linalg.eigh(0.5 * (m + m.conj().T))
    if w.min() < WOOTTERS_CLAMP:
        raise NegativeEigenvalue(f"density matrix eigenvalue {w.min():.3e}")
    root = (v * np.sqrt(np.clip(w, 0.0, None))) @ v.conj().T
    lam = np.linalg.svd(root @ _SIGMA_Y2 @ root.conj(), compute_uv=False)
    return float(min(1.0, max(0.0, lam[0] - lam[1] - lam[2] - lam[3])))


@dataclass
class ValidationReport:
    """Worst analytic-vs-numeric deviation per quantity."""

    tol: float
    deviations: dict = field(default_factory=dict)
    worst_points: dict = field(default_factory=dict)
    n_points: int = 0
    n_times: int = 0

    @property
    def passed(self) -> bool:
        return all(d < self.tol for d in self.deviations.values())

    @property
    def worst(self):
        """(quantity, deviation, point) of the largest deviation."""
        key = max(self.deviations, key=self.deviations.get)
        return key, self.deviations[key], self.worst_points.get(key)

    def to_records(self) -> list:
        rows = []
        for key, dev in self.deviations.items():
            rows.append({"quantity": key, "max_abs_deviation": dev, "tol": self.tol,
                         "pass": dev < self.tol,
                         "worst_point": json.dumps(self.worst_points.get(key), sort_keys=True)})
        return rows

    def to_dict(self) -> dict:
        return {"status": "PASS" if self.passed else "FAIL", "tol": self.tol,
                "n_points": self.n_points, "n_times": self.n_times,
                "records": self.to_records()}


def _point_label(p: DimerParams) -> dict:
    return {"theta": p.mixing_angle, "xi": p.xi, "T1": p.T1, "T2": p.T2,
            "gamma1": p.gamma1, "gamma2": p.gamma2, "eta1": p.eta1, "eta2": p.eta2}


def default_validation_grid(include_zero: bool = False) -> list:
    """theta in {0.1pi..0.9pi}, T_m in {0.1, 1, 10, 100}, Delta T in {0, T_m/2}."""
    t_means = [0.1, 1.0, 10.0, 100.0]
    if include_zero:
        t_means = [0.0] + t_means
    grid = []
    for k in range(1, 10):
        for tm in t_means:
            for dt in sorted({0.0, tm / 2}):
                grid.append(DimerParams.from_mean_temperature(
                    xi=5.0, t_mean=tm, t_diff=dt, theta=k * math.pi / 10))
    return grid


def _compare_point(params: DimerParams, times: np.ndarray, cfg: IntegratorConfig) -> dict:
    L = build_liouvillian(params)
    theta = L.eig.theta
    u = eigen_to_bare_unitary(theta)
    rho0 = DensityMatrix.basis_state(1, BARE)
    states = propagate_series(rho0, L, times, cfg)

    sigma = analytic.bloch_transient(analytic.eg_sigma(theta), L.rates, L.eig, times)
    pops_a = np.stack([sigma.s11, sigma.s22, sigma.s33, sigma.s44], axis=1)
    pops_n = np.real(np.einsum("tii->ti", states))
    bare = u @ states @ u.T
    p_num = np.real(bare[:, 0, 0] + bare[:, 2, 2])
    c_num = np.array([wootters_concurrence(b) for b in bare])

    ss = steady_state(L, rho0)
    return {
        "populations": np.abs(pops_a - pops_n).max(),
        "s32": np.abs(sigma.s32 - states[:, 1, 2]).max(),
        "P(t)": np.abs(analytic.transfer_probability(times, params) - p_num).max(),
        "C(t)": np.abs(analytic.concurrence_transient(times, params) - c_num).max(),
        "P_ss": abs(analytic.steady_transfer_probability(params)
                    - np.real(ss.entries[0, 0] + ss.entries[2, 2])),
        "C_ss": abs(analytic.steady_concurrence(params) - wootters_concurrence(ss)),
    }


def cross_validate(params_grid: Iterable[DimerParams], times: Sequence[float],
                   cfg: Optional[IntegratorConfig] = None, tol: float = 1e-6) -> ValidationReport:
    """Compare every closed form against Liouvillian propagation on a grid.

    The initial state is |eg> at every grid point.
    """
    params_grid = list(params_grid)
    times = np.asarray(times, dtype=float)
    if not params_grid or times.size == 0:
        raise ParameterError("cross_validate needs nonempty parameter and time grids")
    if not tol > 0:
        raise ParameterError("tol must be > 0")
    cfg = cfg or IntegratorConfig()
    report = ValidationReport(tol=tol, n_points=len(params_grid), n_times=int(times.size))
    for params in params_grid:
        try:
            devs = _compare_point(params, times, cfg)
        except DimerError as exc:
            raise type(exc)(f"{exc} [grid point {_point_label(params)}]") from exc
        for key, dev in devs.items():
            if dev >= report.deviations.get(key, -1.0):
                report.deviations[key] = float(dev)
                report.worst_points[key] = _point_label(params)
    return report
