"""
Searching for members of A(b)
=============================

Alternating projections and relaxed reflections, run from seeded random
starts, on a planted profile, on the flat Gauss profile, and on position
and momentum moduli of a chirped Gaussian.
"""

import numpy as np

from paulirecon import solvers as sv
from paulirecon.measurement import forward
from paulirecon.statespace import GridFunction

fs = sv.character_pair(7)
x = sv.random_state(7, sv.rng_for(0, 999))
b = forward(x, fs)
for method in ("alternating", "raar"):
    rec = sv.reconstruct(fs, b, sv.SolverConfig(seed=0), method=method)
    print(method, rec.converged, f"{rec.residual:.1e}", rec.restart, rec.total_iterations)

###############################################################################
# The flat profile: the search turns up members other than the Gauss states.
members, _ = sv.gauss_witnesses(7)
found = sv.ambiguity_search(fs, sv.SolverConfig(restarts=40, max_iters=1000),
                            profile=forward(members[0], fs), method="raar")
print(len(found), "certified pairs; distances", np.round(sorted(w.distance for w in found), 3)[:5])

###############################################################################
# Position and momentum on a 64-point grid. Converged runs land on psi or on
# its reflect-conjugate partner.
fn = lambda t: np.exp(-t ** 2 / 2) * np.exp(1j * t ** 2)  # noqa: E731
psi = GridFunction.from_function(fn, 64, 6.0)
rep = sv.conjecture_probe(psi, sv.SolverConfig(max_iters=2000, restarts=20), psi_fn=fn, method="raar")
print(rep.counts, "flagged", rep.flagged)
