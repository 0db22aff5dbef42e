"""Physical parameters, dimer eigensystem and effective bath rates.

Natural units are used throughout (hbar = k_B = 1) and every frequency,
rate and temperature is expressed in units of the bath coupling rate gamma.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .exceptions import InvalidState, ParameterError

__all__ = [
    "DimerParams",
    "Eigensystem",
    "RateSet",
    "DensityMatrix",
    "BARE",
    "EIGEN",
    "mixing_angle",
    "eigensystem",
    "thermal_occupation",
    "effective_rates",
    "eigen_to_bare_unitary",
]

BARE = "bare"
EIGEN = "eigen"

HERMITIAN_RTOL = 1e-12
TRACE_TOL = 1e-12
POSITIVITY_FLOOR = -1e-9


@dataclass(frozen=True)
class DimerParams:
    """Inputs of the dissipative donor-acceptor dimer.

    Exactly one of ``delta_omega`` (energy detuning omega_1 - omega_2) and
    ``theta`` (mixing angle in (0, pi)) must be supplied; the other is
    derived.  ``omega_m`` only feeds the reported eigenenergies E_1 and E_4.
    """

    xi: float
    delta_omega: Optional[float] = None
    theta: Optional[float] = None
    gamma1: float = 1.0
    gamma2: float = 1.0
    eta1: float = 0.005
    eta2: float = 0.005
    T1: float = 0.0
    T2: float = 0.0
    omega_m: Optional[float] = None
    _theta: float = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if not self.xi > 0:
            raise ParameterError(f"coupling xi must be > 0, got {self.xi}")
        if (self.delta_omega is None) == (self.theta is None):
            raise ParameterError("give exactly one of delta_omega and theta")
        for name in ("gamma1", "gamma2", "eta1", "eta2", "T1", "T2"):
            value = getattr(self, name)
            if not (value >= 0 and math.isfinite(value)):
                raise ParameterError(f"{name} must be finite and >= 0, got {value}")
        if self.theta is not None:
            if not 0 < self.theta < math.pi:
                raise ParameterError(f"theta must lie in (0, pi), got {self.theta}")
            theta = float(self.theta)
        else:
            theta = _angle_from_detuning(self.delta_omega, self.xi)
        object.__setattr__(self, "_theta", theta)

    @classmethod
    def from_mean_temperature(cls, xi, t_mean, t_diff=0.0, gamma=1.0,
                              eta=0.005, **kwargs):
        """Build parameters from T_m = (T1+T2)/2 and Delta T = T1-T2.

        ``gamma`` and ``eta`` are shared by both baths.
        """
        T1 = t_mean + t_diff / 2.0
        T2 = t_mean - t_diff / 2.0
        if T1 < 0 or T2 < 0:
            raise ParameterError(
                f"|t_diff| / 2 must not exceed t_mean (T1={T1}, T2={T2})")
        return cls(xi=xi, gamma1=gamma, gamma2=gamma, eta1=eta, eta2=eta,
                   T1=T1, T2=T2, **kwargs)

    @property
    def mixing_angle(self) -> float:
        return self._theta

    @property
    def detuning(self) -> float:
        """Delta omega, derived from theta when theta was given."""
        if self.delta_omega is not None:
            return float(self.delta_omega)
        return 2.0 * self.xi * math.cos(self._theta) / math.sin(self._theta)

    @property
    def epsilon(self) -> float:
        """Dressed gap E_2 - E_3."""
        if self.delta_omega is not None:
            return 2.0 * math.hypot(self.delta_omega / 2.0, self.xi)
        return 2.0 * self.xi / math.sin(self._theta)

    @property
    def t_mean(self) -> float:
        return 0.5 * (self.T1 + self.T2)

    @property
    def t_diff(self) -> float:
        return self.T1 - self.T2

    @property
    def is_resonant(self) -> bool:
        if self.delta_omega is not None:
            return self.delta_omega == 0
        return abs(self._theta - math.pi / 2) <= 1e-12


def _angle_from_detuning(delta_omega: float, xi: float) -> float:
    if delta_omega > 0:
        return math.atan(2.0 * xi / delta_omega)
    if delta_omega < 0:
        return math.atan(2.0 * xi / delta_omega) + math.pi
    return math.pi / 2


@dataclass(frozen=True)
class Eigensystem:
    theta: float
    epsilon: float
    energies: Optional[tuple] = None


@dataclass(frozen=True)
class RateSet:
    """Effective rates of the eigenbasis master equation (units of gamma)."""

    chi1: float
    chi2: float
    pi1: float
    pi2: float
    pi3: float
    gamma32: float
    gamma23: float
    x12: float
    x13: float
    x23: float
    n_eps_1: float
    n_eps_2: float
    N_eps: float

    @property
    def relaxation(self) -> float:
        """Gamma_23 + Gamma_32."""
        return self.gamma23 + self.gamma32


def mixing_angle(params: DimerParams) -> float:
    """Mixing angle theta in (0, pi) with tan(theta) = 2 xi / delta_omega."""
    if not params.xi > 0:
        raise ParameterError("xi must be > 0")
    return params.mixing_angle


def eigensystem(params: DimerParams) -> Eigensystem:
    eps = params.epsilon
    energies = None
    if params.omega_m is not None:
        energies = (params.omega_m, eps / 2.0, -eps / 2.0, -params.omega_m)
    return Eigensystem(theta=mixing_angle(params), epsilon=eps, energies=energies)


def thermal_occupation(omega: float, T: float) -> float:
    """Bose-Einstein occupation 1 / (exp(omega/T) - 1), exactly 0 at T = 0."""
    if not omega > 0:
        raise ParameterError(f"omega must be > 0, got {omega}")
    if T < 0:
        raise ParameterError(f"temperature must be >= 0, got {T}")
    if T == 0:
        return 0.0
    x = omega / T
    if x > 700.0:
        return 0.0
    return 1.0 / math.expm1(x)


def effective_rates(params: DimerParams, eig: Optional[Eigensystem] = None) -> RateSet:
    """Dephasing, cross-dephasing and thermal transfer rates for an Ohmic bath."""
    if eig is None:
        eig = eigensystem(params)
    theta, eps = eig.theta, eig.epsilon
    c2 = math.cos(theta / 2) ** 2
    s2 = math.sin(theta / 2) ** 2
    sin2 = math.sin(theta) ** 2

    chi1 = 2.0 * params.eta1 * params.T1
    chi2 = 2.0 * params.eta2 * params.T2
    n1 = thermal_occupation(eps, params.T1)
    n2 = thermal_occupation(eps, params.T2)
    g1, g2 = params.gamma1, params.gamma2

    return RateSet(
        chi1=chi1,
        chi2=chi2,
        pi1=chi1 + chi2,
        pi2=c2 * c2 * chi1 + s2 * s2 * chi2,
        pi3=s2 * s2 * chi1 + c2 * c2 * chi2,
        gamma32=0.25 * sin2 * (g1 * n1 + g2 * n2),
        gamma23=0.25 * sin2 * (g1 * (n1 + 1.0) + g2 * (n2 + 1.0)),
        x12=c2 * chi1 + s2 * chi2,
        x13=s2 * chi1 + c2 * chi2,
        x23=0.25 * sin2 * (chi1 + chi2),
        n_eps_1=n1,
        n_eps_2=n2,
        N_eps=n1 + n2 + 1.0,
    )


def eigen_to_bare_unitary(theta: float) -> np.ndarray:
    """Real orthogonal U whose columns are |lambda_n> in the bare basis.

    Bare order is |ee>, |eg>, |ge>, |gg>; rho_bare = U rho_eigen U^T.
    """
    c = math.cos(theta / 2)
    s = math.sin(theta / 2)
    return np.array([
        [1.0, 0.0, 0.0, 0.0],
        [0.0, c, -s, 0.0],
        [0.0, s, c, 0.0],
        [0.0, 0.0, 0.0, 1.0],
    ])


class DensityMatrix:
    """4x4 Hermitian unit-trace matrix tagged with its basis.

    Positivity is not enforced here; :attr:`min_eigenvalue` exposes it so
    callers can monitor it.
    """

    def __init__(self, entries, basis: str = BARE):
        if basis not in (BARE, EIGEN):
            raise ParameterError(f"unknown basis {basis!r}")
        m = np.array(entries, dtype=complex)
        if m.shape != (4, 4):
            raise InvalidState(f"expected a 4x4 matrix, got shape {m.shape}")
        scale = max(1.0, float(np.abs(m).max()))
        if np.abs(m - m.conj().T).max() > HERMITIAN_RTOL * scale:
            raise InvalidState("density matrix is not Hermitian")
        if abs(np.trace(m) - 1.0) > TRACE_TOL:
            raise InvalidState(f"trace is {np.trace(m).real!r}, expected 1")
        self.entries = m
        self.basis = basis

    @classmethod
    def pure(cls, psi, basis: str = BARE) -> "DensityMatrix":
        psi = np.asarray(psi, dtype=complex)
        psi = psi / np.linalg.norm(psi)
        return cls(np.outer(psi, psi.conj()), basis)

    @classmethod
    def basis_state(cls, index: int, basis: str = BARE) -> "DensityMatrix":
        m = np.zeros((4, 4), dtype=complex)
        m[index, index] = 1.0
        return cls(m, basis)

    @property
    def min_eigenvalue(self) -> float:
        return float(np.linalg.eigvalsh(self.entries).min())

    def to_bare(self, theta: float) -> "DensityMatrix":
        if self.basis == BARE:
            return self
        u = eigen_to_bare_unitary(theta)
        return DensityMatrix(u @ self.entries @ u.T, BARE)

    def to_eigen(self, theta: float) -> "DensityMatrix":
        if self.basis == EIGEN:
            return self
        u = eigen_to_bare_unitary(theta)
        return DensityMatrix(u.T @ self.entries @ u, EIGEN)

    def __repr__(self):
        return f"DensityMatrix(basis={self.basis!r}, entries=\n{self.entries})"
