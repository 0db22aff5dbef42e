"""
Entanglement generated by the transfer
======================================

The same |eg> start builds up donor-acceptor entanglement.  Because the
state stays of X form, the concurrence is 2 |<eg|rho|ge>|.
"""
import math

import numpy as np

from dimer_eet import DimerParams, TauMoments
from dimer_eet import concurrence_transient, steady_concurrence
from dimer_eet.analytic import tau23_evolution, long_time

t = np.linspace(0, 10, 11)

for tm in (0.1, 10.0, 100.0):
    p = DimerParams.from_mean_temperature(xi=5.0, t_mean=tm, theta=math.pi / 2)
    print(f"resonant, T_m={tm:>5}:", np.round(concurrence_transient(t, p), 3))

###############################################################################
# In the long run the dimer relaxes into the lower dressed state, partially
# mixed with the upper one by the baths.  Its concurrence is sin(theta)/N(eps).

print()
for k in (0.1, 0.3, 0.5):
    row = []
    for tm in (0.0, 1.0, 10.0, 100.0):
        p = DimerParams.from_mean_temperature(xi=5.0, t_mean=tm, theta=k * math.pi)
        row.append(steady_concurrence(p))
    print(f"theta={k}pi, C_ss at T_m = 0, 1, 10, 100:", np.round(row, 4))

###############################################################################
# The same number from the coherence itself, evolved far past every decay.

p = DimerParams.from_mean_temperature(xi=5.0, t_mean=10.0, theta=0.3 * math.pi)
tau = tau23_evolution(TauMoments.eg(), p, long_time(p))
print(f"\n2|tau23(inf)| = {2 * abs(tau):.10f},  C_ss = {steady_concurrence(p):.10f}")
