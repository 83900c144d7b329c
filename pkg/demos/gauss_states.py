"""
Flat profiles on Z/pZ
=====================

Every Gauss state psi_a(m) = exp(2 pi i a m^2 / p), a = 1..p-1, has modulus 1
at each point and modulus 1/sqrt(p) on each character. So all p - 1 of
them share one magnitude profile, yet no two are proportional.
"""

import itertools

import numpy as np

from paulirecon.constructions import gauss_family, verify_prop2
from paulirecon.measurement import embedding_obstruction, forward
from paulirecon.solvers import character_pair
from paulirecon.statespace import projective_distance

p = 7
fs = character_pair(p)
states = gauss_family(p)
profiles = np.array([forward(s, fs).values for s in states])
print("profile spread across the family:", np.ptp(profiles, axis=0).max())

###############################################################################
# Pairwise distances are all sqrt(1 - 1/p): the overlap is a Gauss sum.
d = [projective_distance(a, b) for a, b in itertools.combinations(states, 2)]
print(f"{len(d)} pairs, distances in [{min(d):.12f}, {max(d):.12f}], sqrt(6/7) = {np.sqrt(6 / 7):.12f}")

for q in (3, 5, 97):
    r = verify_prop2(q)
    print(q, r.passed, r.max_dev_delta_basis, r.max_dev_char_basis)

###############################################################################
# Three bases in dimension n: dimension counting leaves room for a real
# embedding only while 3n - 1 > 4(n - 1) - 2 alpha(n - 1).
for n in range(2, 17):
    ob = embedding_obstruction(n)
    print(f"n={n:2d}  lhs={ob.lhs:3d}  rhs={ob.rhs:3d}  holds={ob.inequality_holds}")
# n = 5 and n = 7 already fail, since 5 - 1 and 7 - 1 have few binary ones.
