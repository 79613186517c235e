"""
From an accepting verifier to an identity check
================================================

A verifier that accepts some classical witness y is turned into a circuit Z
whose diagonal entry at z* = 0 y 0...0 is small. A verifier that rejects
every input gives a Z whose whole diagonal stays large.
"""
import math

import numpy as np

from qcma import build_Z, theorem_bounds, ReductionParams, z_star
from qcma.instances import accepting_verifier, rejecting_verifier
from qcma.simulator import diagonal

rng = np.random.default_rng(3)
phi = math.pi / 4

# an accepting verifier on 2 input bits and 2 ancillas
v, y = accepting_verifier(2, 2, rng, scramble_gates=5)
print(f"witness y = {y:02b}, measured rejection eps = {v.epsilon:.2e}, gates = {len(v.circuit)}")

z = build_Z(v, phi)
d = np.abs(diagonal(z)) ** 2
bounds = theorem_bounds(ReductionParams(phi, v.epsilon))
print(f"|<z*|Z|z*>|^2 = {d[z_star(y)]:.3e}   (upper bound {bounds.case1_upper:.3e})")

# now a verifier that accepts nothing
r = rejecting_verifier(2, 2, rng, scramble_gates=5)
d = np.abs(diagonal(build_Z(r, phi))) ** 2
bounds = theorem_bounds(ReductionParams(phi, r.epsilon))
print(f"\nrejecting verifier: max acceptance {r.epsilon:.2e}")
print(f"min_z |<z|Z|z>|^2 = {d.min():.3f}   (lower bound {bounds.case2_lower:.3f})")
