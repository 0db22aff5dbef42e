"""Closed-form dynamics of the dimer.

Everything here is a direct evaluation of analytic expressions: the Bloch
solutions in the eigenbasis, the donor-to-acceptor transfer probability,
the eigen/bare representation maps and the concurrence of the X-shaped
state reached from the initial excitation |eg>.

Functions taking a time ``t`` accept scalars or arrays and return the same
shape.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .exceptions import DegenerateRelaxation, InvalidState, ParameterError
from .model import (
    BARE,
    DensityMatrix,
    DimerParams,
    Eigensystem,
    RateSet,
    effective_rates,
    eigensystem,
    thermal_occupation,
)

__all__ = [
    "SigmaMoments",
    "TauMoments",
    "Regime",
    "eg_sigma",
    "long_time",
    "bloch_transient",
    "bloch_steady",
    "thermal_contrast",
    "transfer_probability",
    "transfer_probability_limit",
    "steady_transfer_probability",
    "sigma_from_tau",
    "tau_from_sigma",
    "tau23_evolution",
    "x_state_concurrence",
    "concurrence_transient",
    "concurrence_resonant_approx",
    "concurrence_limit",
    "steady_concurrence",
]

_CLAMP = 1e-12
_X_TOL = 1e-10


class Regime(enum.Enum):
    RESONANT = "res"
    HIGH_TEMPERATURE = "htl"
    LOW_TEMPERATURE = "ltl"


@dataclass(frozen=True)
class SigmaMoments:
    """Eigenbasis moments <sigma_nn> and the coherence <sigma_32>.

    ``s32`` is Tr[rho |lambda_3><lambda_2|], i.e. the matrix element
    <lambda_2|rho|lambda_3>; <sigma_23> is its conjugate.
    """

    s11: float
    s22: float
    s33: float
    s44: float
    s32: complex = 0j

    def __post_init__(self):
        pops = (self.s11, self.s22, self.s33, self.s44)
        if np.ndim(self.s22) == 0:
            if abs(sum(pops) - 1.0) > 1e-12:
                raise InvalidState(f"populations sum to {sum(pops)!r}")
            if min(pops) < -1e-12 or max(pops) > 1 + 1e-12:
                raise InvalidState(f"population out of [0, 1]: {pops}")
            if abs(self.s32) ** 2 > self.s22 * self.s33 + 1e-9:
                raise InvalidState("coherence |s32| exceeds sqrt(s22 s33)")

    @property
    def s23(self):
        return np.conj(self.s32)

    def to_matrix(self) -> np.ndarray:
        """Eigenbasis density matrix carrying only these moments."""
        m = np.diag([self.s11, self.s22, self.s33, self.s44]).astype(complex)
        m[1, 2] = self.s32
        m[2, 1] = np.conj(self.s32)
        return m


@dataclass(frozen=True)
class TauMoments:
    """Bare-basis moments; ``t23`` is <tau_23> = <ge|rho|eg>."""

    t11: float
    t22: float
    t33: float
    t44: float
    t23: complex = 0j

    def __post_init__(self):
        if np.ndim(self.t22) == 0:
            total = self.t11 + self.t22 + self.t33 + self.t44
            if abs(total - 1.0) > 1e-12:
                raise InvalidState(f"populations sum to {total!r}")
            if abs(self.t23) ** 2 > self.t22 * self.t33 + 1e-9:
                raise InvalidState("coherence |t23| exceeds sqrt(t22 t33)")

    @property
    def t32(self):
        return np.conj(self.t23)

    @classmethod
    def eg(cls) -> "TauMoments":
        """The donor-excited product state |eg>."""
        return cls(0.0, 1.0, 0.0, 0.0, 0j)


def _check_time(t):
    arr = np.asarray(t, dtype=float)
    if np.any(arr < 0) or np.any(~np.isfinite(arr)):
        raise ParameterError("time must be finite and >= 0")
    return arr


def _out(value, t):
    return float(value) if np.ndim(t) == 0 else value


def _clamp_unit(value):
    """Clip rounding noise into [0, 1]; anything larger is a bug."""
    v = np.asarray(value, dtype=float)
    if np.any(v < -_CLAMP) or np.any(v > 1 + _CLAMP):
        raise InvalidState(f"value outside [0, 1] beyond rounding: {v}")
    return np.clip(v, 0.0, 1.0)


def _half_angles(theta):
    return math.cos(theta / 2) ** 2, math.sin(theta / 2) ** 2


def _require_relaxation(rates: RateSet) -> float:
    total = rates.relaxation
    if total <= 0:
        raise DegenerateRelaxation(
            "Gamma_23 + Gamma_32 = 0; populations of lambda_2/lambda_3 never relax")
    return total


def _coherence_rate(rates: RateSet, theta: float) -> float:
    return rates.relaxation + math.cos(theta) ** 2 * rates.pi1


def eg_sigma(theta: float) -> SigmaMoments:
    """Eigenbasis moments of the initial excitation |eg>."""
    c2, s2 = _half_angles(theta)
    return SigmaMoments(0.0, c2, s2, 0.0, -0.5 * math.sin(theta) + 0j)


def long_time(params: DimerParams) -> float:
    """A time after which every analytic transient is below double precision.

    Defined as 1e3 over the smallest nonzero decay rate.
    """
    eig = eigensystem(params)
    rates = effective_rates(params, eig)
    candidates = [2 * rates.relaxation, _coherence_rate(rates, eig.theta)]
    positive = [r for r in candidates if r > 0]
    if not positive:
        raise DegenerateRelaxation("no relaxation channel is active")
    return 1e3 / min(positive)


def bloch_transient(init: SigmaMoments, rates: RateSet, eig: Eigensystem, t):
    """Evolve eigenbasis moments under the optical Bloch equations."""
    t = _check_time(t)
    total = rates.relaxation
    pair = init.s22 + init.s33
    if total > 0:
        decay = np.exp(-2 * total * t)
        s22 = (pair * rates.gamma32
               + (init.s22 * rates.gamma23 - init.s33 * rates.gamma32) * decay) / total
        s33 = (pair * rates.gamma23
               + (init.s33 * rates.gamma32 - init.s22 * rates.gamma23) * decay) / total
    else:
        s22 = np.full_like(t, init.s22)
        s33 = np.full_like(t, init.s33)
    s32 = init.s32 * np.exp(-(_coherence_rate(rates, eig.theta) + 1j * eig.epsilon) * t)
    if np.ndim(t) == 0:
        return SigmaMoments(init.s11, float(s22), float(s33), init.s44, complex(s32))
    ones = np.ones_like(t)
    return SigmaMoments(init.s11 * ones, s22, s33, init.s44 * ones, s32)


def bloch_steady(init: SigmaMoments, rates: RateSet) -> SigmaMoments:
    total = _require_relaxation(rates)
    pair = init.s22 + init.s33
    return SigmaMoments(init.s11, pair * rates.gamma32 / total,
                        pair * rates.gamma23 / total, init.s44, 0j)


def transfer_probability(t, params: DimerParams):
    """Probability of finding the acceptor excited, starting from |eg>."""
    t = _check_time(t)
    eig = eigensystem(params)
    rates = effective_rates(params, eig)
    total = _require_relaxation(rates)
    theta = eig.theta
    c2, s2 = _half_angles(theta)
    g23, g32 = rates.gamma23, rates.gamma32

    steady = (g32 * s2 + g23 * c2) / total
    population = math.cos(theta) * (g32 * s2 - g23 * c2) / total * np.exp(-2 * total * t)
    coherence = (-0.5 * math.sin(theta) ** 2 * np.cos(eig.epsilon * t)
                 * np.exp(-_coherence_rate(rates, theta) * t))
    return _out(_clamp_unit(steady + population + coherence), t)


def _mean_bath(params: DimerParams, rates: RateSet):
    gamma = 0.5 * (params.gamma1 + params.gamma2)
    chi = 0.5 * (rates.chi1 + rates.chi2)
    return gamma, chi


def _check_regime(regime: Regime, params: DimerParams):
    if not isinstance(regime, Regime):
        raise ParameterError(f"unknown regime {regime!r}")
    if regime is Regime.RESONANT and not params.is_resonant:
        raise ParameterError("resonant closed form requires delta_omega = 0")


def transfer_probability_limit(regime: Regime, t, params: DimerParams):
    """Regime-specific closed form of the transfer probability.

    Unequal baths enter through the mean coupling (gamma1+gamma2)/2 and the
    mean dephasing strength (chi1+chi2)/2.  The high- and low-temperature
    forms are approximations and are returned without clipping to [0, 1].
    """
    _check_regime(regime, params)
    t = _check_time(t)
    eig = eigensystem(params)
    rates = effective_rates(params, eig)
    gamma, chi = _mean_bath(params, rates)
    theta, eps = eig.theta, eig.epsilon
    sin2 = math.sin(theta) ** 2
    cos2 = math.cos(theta) ** 2

    if regime is Regime.RESONANT:
        n_res = (thermal_occupation(2 * params.xi, params.T1)
                 + thermal_occupation(2 * params.xi, params.T2) + 1.0)
        p = 0.5 - 0.5 * np.cos(2 * params.xi * t) * np.exp(-0.5 * n_res * gamma * t)
    elif regime is Regime.HIGH_TEMPERATURE:
        n_eps = rates.N_eps
        p = (0.5 - 0.5 * cos2 * np.exp(-sin2 * n_eps * gamma * t)
             - 0.5 * sin2 * np.cos(eps * t)
             * np.exp(-(2 * cos2 * chi + 0.5 * sin2 * n_eps * gamma) * t))
    else:
        c2 = math.cos(theta / 2) ** 2
        p = (c2 * (1 - math.cos(theta) * np.exp(-sin2 * gamma * t))
             - 0.5 * sin2 * np.cos(eps * t) * np.exp(-0.5 * sin2 * gamma * t))
    return _out(p, t)


def thermal_contrast(params: DimerParams, rates: RateSet) -> float:
    """(Gamma_23 - Gamma_32) / (Gamma_23 + Gamma_32) of the eigenbasis pair.

    Equals 1/N(eps) whenever gamma1 = gamma2 or T1 = T2.  For two different
    baths that also differ in temperature the occupations are weighted by
    the coupling rates, (g1 + g2) / (g1 (2 n1 + 1) + g2 (2 n2 + 1)).
    """
    g1, g2 = params.gamma1, params.gamma2
    denom = g1 * (2 * rates.n_eps_1 + 1) + g2 * (2 * rates.n_eps_2 + 1)
    if not denom > 0:
        raise DegenerateRelaxation("both bath couplings vanish")
    if g1 == g2:
        return 1.0 / rates.N_eps
    return (g1 + g2) / denom


def steady_transfer_probability(params: DimerParams, high_t_approx: bool = False) -> float:
    """Long-time transfer probability (1 + cos(theta)/N(eps)) / 2.

    For unequal couplings 1/N(eps) is replaced by :func:`thermal_contrast`.

    With ``high_t_approx`` the expansion (1 + eps cos(theta) / (2 T_m)) / 2
    is returned instead; it is only meaningful for T_m >> eps.
    """
    eig = eigensystem(params)
    if high_t_approx:
        if params.t_mean <= 0:
            raise ParameterError("high-temperature approximant needs T_m > 0")
        return 0.5 * (1 + eig.epsilon * math.cos(eig.theta) / (2 * params.t_mean))
    contrast = thermal_contrast(params, effective_rates(params, eig))
    return float(_clamp_unit(0.5 * (1 + math.cos(eig.theta) * contrast)))


def sigma_from_tau(tau: TauMoments, theta: float) -> SigmaMoments:
    c2, s2 = _half_angles(theta)
    half_sin = 0.5 * math.sin(theta)
    re_mix = tau.t23 + tau.t32
    s22 = c2 * tau.t22 + s2 * tau.t33 + half_sin * re_mix
    s33 = s2 * tau.t22 + c2 * tau.t33 - half_sin * re_mix
    s23 = half_sin * (tau.t33 - tau.t22) + c2 * tau.t23 - s2 * tau.t32
    return SigmaMoments(tau.t11, np.real(s22), np.real(s33), tau.t44, np.conj(s23))


def tau_from_sigma(sigma: SigmaMoments, theta: float) -> TauMoments:
    c2, s2 = _half_angles(theta)
    half_sin = 0.5 * math.sin(theta)
    re_mix = sigma.s23 + sigma.s32
    t22 = c2 * sigma.s22 + s2 * sigma.s33 - half_sin * re_mix
    t33 = s2 * sigma.s22 + c2 * sigma.s33 + half_sin * re_mix
    t23 = -s2 * sigma.s32 + c2 * sigma.s23 + half_sin * (sigma.s22 - sigma.s33)
    return TauMoments(sigma.s11, np.real(t22), np.real(t33), sigma.s44, t23)


def _tau23_coefficients(params: DimerParams, t):
    """Coefficients multiplying tau_22(0), tau_33(0), tau_23(0), tau_32(0)."""
    eig = eigensystem(params)
    rates = effective_rates(params, eig)
    total = _require_relaxation(rates)
    theta, eps = eig.theta, eig.epsilon
    c2, s2 = _half_angles(theta)
    sin_t = math.sin(theta)
    g23, g32 = rates.gamma23, rates.gamma32

    pop_decay = np.exp(-2 * total * t)
    coh_decay = np.exp(-_coherence_rate(rates, theta) * t)
    phase = np.exp(1j * eps * t) * c2 - np.exp(-1j * eps * t) * s2
    offset = 0.5 * sin_t * (g32 - g23) / total

    a22 = (offset + sin_t * (c2 * g23 - s2 * g32) / total * pop_decay
           - 0.5 * sin_t * coh_decay * phase)
    a33 = (offset + sin_t * (s2 * g23 - c2 * g32) / total * pop_decay
           + 0.5 * sin_t * coh_decay * phase)
    a23 = ((s2 * s2 * np.exp(-1j * eps * t) + c2 * c2 * np.exp(1j * eps * t)) * coh_decay
           + 0.5 * sin_t ** 2 * pop_decay)
    a32 = 0.5 * sin_t ** 2 * (pop_decay - coh_decay * np.cos(eps * t))
    return a22, a33, a23, a32


def tau23_evolution(init: TauMoments, params: DimerParams, t):
    """Bare-basis coherence <tau_23(t)> as a linear map of the initial moments."""
    t = _check_time(t)
    a22, a33, a23, a32 = _tau23_coefficients(params, t)
    value = a22 * init.t22 + a33 * init.t33 + a23 * init.t23 + a32 * init.t32
    return complex(value) if np.ndim(t) == 0 else value


def x_state_concurrence(rho) -> float:
    """Concurrence of a bare-basis X-shaped two-qubit state.

    Raises
    ------
    InvalidState
        If entries off the diagonal and anti-diagonal exceed 1e-10; use
        :func:`dimer_eet.numeric.wootters_concurrence` for general states.
    """
    if isinstance(rho, DensityMatrix):
        if rho.basis != BARE:
            raise ParameterError("X-state concurrence needs a bare-basis matrix")
        m = rho.entries
    else:
        m = np.asarray(rho, dtype=complex)
    mask = np.ones((4, 4), dtype=bool)
    mask[np.arange(4), np.arange(4)] = False
    mask[np.arange(4), 3 - np.arange(4)] = False
    if np.abs(m[mask]).max() > _X_TOL:
        raise InvalidState("not an X state; use numeric.wootters_concurrence")
    p = m.diagonal().real
    c = max(0.0,
            2 * (abs(m[1, 2]) - math.sqrt(max(p[0] * p[3], 0.0))),
            2 * (abs(m[0, 3]) - math.sqrt(max(p[1] * p[2], 0.0))))
    return float(_clamp_unit(c))


def concurrence_transient(t, params: DimerParams):
    """Concurrence 2|<tau_23(t)>| of the state evolved from |eg>."""
    t = _check_time(t)
    a22 = _tau23_coefficients(params, t)[0]
    return _out(_clamp_unit(2 * np.abs(a22)), t)


def concurrence_resonant_approx(t, params: DimerParams):
    """Resonant closed form |(1 - e^{-N g t})/N + i sin(eps t) e^{-N g t/2}|.

    N = N(2 xi) and g is the mean bath coupling.  For equal bath couplings
    this coincides with :func:`concurrence_transient`.
    """
    _check_regime(Regime.RESONANT, params)
    t = _check_time(t)
    gamma = 0.5 * (params.gamma1 + params.gamma2)
    n_res = (thermal_occupation(2 * params.xi, params.T1)
             + thermal_occupation(2 * params.xi, params.T2) + 1.0)
    eps = 2 * params.xi
    value = np.abs((1 - np.exp(-n_res * gamma * t)) / n_res
                   + 1j * np.sin(eps * t) * np.exp(-0.5 * n_res * gamma * t))
    return _out(_clamp_unit(value), t)


def concurrence_limit(regime: Regime, t, params: DimerParams):
    """Regime-specific closed form of the concurrence from |eg>."""
    _check_regime(regime, params)
    if regime is Regime.RESONANT:
        return concurrence_resonant_approx(t, params)
    t = _check_time(t)
    eig = eigensystem(params)
    rates = effective_rates(params, eig)
    gamma, chi = _mean_bath(params, rates)
    theta, eps = eig.theta, eig.epsilon
    sin_t = math.sin(theta)
    sin2 = sin_t ** 2
    c2, s2 = _half_angles(theta)
    phase = np.exp(1j * eps * t) * c2 - np.exp(-1j * eps * t) * s2

    if regime is Regime.HIGH_TEMPERATURE:
        n_eps = rates.N_eps
        value = np.abs(
            0.5 * math.sin(2 * theta) * np.exp(-sin2 * n_eps * gamma * t)
            - sin_t * np.exp(-(2 * math.cos(theta) ** 2 * chi + 0.5 * sin2 * n_eps * gamma) * t)
            * phase)
    else:
        value = sin_t * np.abs(1 - 2 * c2 * np.exp(-sin2 * gamma * t)
                               + np.exp(-0.5 * sin2 * gamma * t) * phase)
    return _out(value, t)


def steady_concurrence(params: DimerParams) -> float:
    """Long-time concurrence sin(theta) / N(eps) (see :func:`thermal_contrast`)."""
    eig = eigensystem(params)
    contrast = thermal_contrast(params, effective_rates(params, eig))
    return float(_clamp_unit(math.sin(eig.theta) * contrast))

