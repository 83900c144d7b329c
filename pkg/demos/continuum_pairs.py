"""
Continuum pairs on a grid
=========================

Three explicit constructions of two different states with equal position
and momentum moduli, sampled on centered grids.
"""

import numpy as np

from paulirecon import constructions as con
from paulirecon.statespace import GridFunction

# reflect and conjugate the phase: rho(x) exp(-i phi(-x)); needs rho even
psi = GridFunction.from_function(lambda x: np.exp(-x ** 2 / 2) * np.exp(1j * (x - x ** 2)), 1024, 12.0)
print(con.certify_reflection(psi))

###############################################################################
# Rotating a chirp in a plane where the envelope is round.
spec = con.KontsevichSpec(1.0, 1.0, con.rotation_x1(np.pi / 2))
print(con.certify_kontsevich(con.kontsevich_pair(spec, 32, 6.0)))

###############################################################################
# A radial state and its conjugate.
pair = con.spherical_conjugate_pair(lambda r: np.exp(-r ** 2 / 2 + 1j * r ** 2), 32, 6.0)
print(con.certify_spherical(pair))

###############################################################################
# The bare chirp is not square integrable. On a finite box its transform is
# only roughly flat over the band it sweeps.
res = con.chirp(con.ChirpSpec(1.0), 4096, 40.0)
print(con.chirp_flatness(res))
