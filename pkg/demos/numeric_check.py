"""
Closed forms against the master equation
========================================

The analytic layer is checked against a brute-force route: build the
16x16 Liouvillian, integrate it, and read off populations, P(t) and the
Wootters concurrence of the full density matrix.
"""
import math

import numpy as np

from dimer_eet import BARE, DensityMatrix, DimerParams
from dimer_eet import concurrence_transient, transfer_probability
from dimer_eet import numeric
from dimer_eet.model import eigen_to_bare_unitary

p = DimerParams.from_mean_temperature(xi=5.0, t_mean=10.0, t_diff=5.0, theta=0.3 * math.pi)
L = numeric.build_liouvillian(p)
print("Liouvillian shape:", L.matrix.shape)
print("largest real part of its spectrum: %.1e" % np.linalg.eigvals(L.matrix).real.max())

times = np.linspace(0, 10, 6)
states = numeric.propagate_series(DensityMatrix.basis_state(1, BARE), L, times)
u = eigen_to_bare_unitary(L.eig.theta)
bare = u @ states @ u.T

p_num = np.real(bare[:, 0, 0] + bare[:, 2, 2])
c_num = [numeric.wootters_concurrence(b) for b in bare]
print("\n   t     P numeric   P closed    C numeric   C closed")
for row in zip(times, p_num, transfer_probability(times, p), c_num, concurrence_transient(times, p)):
    print("%5.1f  %10.7f  %10.7f  %10.7f  %10.7f" % row)

###############################################################################
# The steady state is the projection of the initial state onto the kernel
# of L; the kernel is three dimensional because |ee> and |gg> never move.

ss = numeric.steady_state(L, DensityMatrix.basis_state(1, BARE))
print("\nsteady state populations (bare basis):", np.round(np.real(np.diag(ss.entries)), 6))

###############################################################################
# A coarse version of the validation gate that the CLI runs with
# ``dimer-eet validate``.

grid = [DimerParams.from_mean_temperature(xi=5.0, t_mean=tm, theta=k * math.pi / 10)
        for k in (2, 5, 8) for tm in (0.1, 100.0)]
rep = numeric.cross_validate(grid, np.linspace(0, 10, 101))
for key, dev in rep.deviations.items():
    print(f"{key:>12}: {dev:.1e}")
print("status:", "PASS" if rep.passed else "FAIL")
