"""Energy transfer and entanglement in a dissipative donor-acceptor dimer."""
from .model import (
    BARE,
    EIGEN,
    DensityMatrix,
    DimerParams,
    Eigensystem,
    RateSet,
    effective_rates,
    eigensystem,
    mixing_angle,
    thermal_occupation,
)
from .analytic import (
    Regime,
    SigmaMoments,
    TauMoments,
    concurrence_limit,
    concurrence_transient,
    steady_concurrence,
    steady_transfer_probability,
    transfer_probability,
    transfer_probability_limit,
)

__version__ = "0.1.0"
