"""
Excitation transfer in a dimer
==============================

A donor starts excited and the acceptor in its ground state, |eg>.  We
follow the probability P(t) that the acceptor holds the excitation, first
at resonance and then for detuned pairs at high and low temperature.
"""
import math

import numpy as np

from dimer_eet import DimerParams, Regime
from dimer_eet import transfer_probability, transfer_probability_limit
from dimer_eet import steady_transfer_probability

t = np.linspace(0, 10, 11)

# Resonant dimer: xi = 5 sets the oscillation frequency 2 xi, the bath
# temperature sets how fast the swings damp out towards 1/2.
for tm in (0.1, 10.0, 100.0):
    p = DimerParams.from_mean_temperature(xi=5.0, t_mean=tm, theta=math.pi / 2)
    print(f"resonant, T_m={tm:>5}:", np.round(transfer_probability(t, p), 3))

###############################################################################
# Detuning is expressed through the mixing angle theta, tan(theta) = 2 xi / dw.
# At T = 0 the acceptor population settles at cos^2(theta/2): a donor that
# sits above the acceptor (theta < pi/2) transfers efficiently.

print()
for k in (0.1, 0.4, 0.6, 0.9):
    p = DimerParams(xi=5.0, theta=k * math.pi)
    print(f"T=0, theta={k}pi: P_ss={steady_transfer_probability(p):.4f}, "
          f"cos^2(theta/2)={math.cos(k * math.pi / 2) ** 2:.4f}")

###############################################################################
# Heating both baths washes out the asymmetry; the steady value creeps
# towards 1/2 as 1/N(eps) shrinks.

print()
for tm in (0.0, 1.0, 10.0, 100.0, 1000.0):
    p = DimerParams.from_mean_temperature(xi=5.0, t_mean=tm, theta=0.1 * math.pi)
    print(f"theta=0.1pi, T_m={tm:>6}: P_ss={steady_transfer_probability(p):.4f}")

###############################################################################
# The regime-specific closed forms are handy approximations of the general
# expression; here the low-temperature one at T_m = 0.01.

p = DimerParams.from_mean_temperature(xi=5.0, t_mean=0.01, theta=0.4 * math.pi)
gap = np.abs(transfer_probability(t, p) - transfer_probability_limit(Regime.LOW_TEMPERATURE, t, p))
print(f"\nlow-T form vs general, theta=0.4pi: max gap {gap.max():.2e}")
