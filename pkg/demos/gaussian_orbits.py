"""
Gaussian states with prescribed moduli
======================================

Take psi(x) = exp(-x.(I + i A2).x / 2). Its momentum modulus is again a
Gaussian, with real part B1 of the inverse matrix. Asking for
B1 = diag(mu^2) forces A2^2 = diag((1 - mu^2) / mu^2), and every square
root of that diagonal matrix gives a solution.
"""

import numpy as np

from paulirecon import gaussian as gs

data = gs.GaussianMagnitudeData([0.6, 0.8])
orbits = gs.solve_gaussian_pauli(data)
print("lambda:", data.lam)
for signs, rep in zip(orbits.sign_patterns, orbits.representatives):
    v = gs.check_gaussian_solution(rep, data)
    print(signs, np.diag(rep), "ratio", round(v.amplitude_ratio, 12), "ok", v.passed)

###############################################################################
# Equal mu values give continuous families: mixed sign patterns can be
# rotated inside the degenerate block.
rng = np.random.default_rng(1)
degenerate = gs.GaussianMagnitudeData([0.6, 0.6])
orb = gs.solve_gaussian_pauli(degenerate)
k = orb.sign_patterns.index((1, -1))
print("orbit dimension:", orb.orbit_dimension(k))
for _ in range(3):
    a2 = orb.member(k, orb.random_commutant(rng))
    print(np.round(a2, 6).tolist(), gs.verify_gaussian_solution(a2, degenerate))

###############################################################################
# The closed-form transform agrees with the grid FFT.
from paulirecon.statespace import grid_fourier

G = gs.GaussianState(1.0, [[1.0]], [[1.0]])
h = grid_fourier(G.sample(1024, 12.0))
print("max error vs grid:", np.abs(h.values - gs.gaussian_fourier(G)(h.axis)).max())
