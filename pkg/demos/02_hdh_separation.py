"""
Basis states can miss a large operator-norm distance
=====================================================

H^n D H^n with D = diag(-1, 1, ..., 1) moves every basis state by only
2^(1 - n/2), yet sits at distance sqrt(2) from the identity for every
global phase.
"""
import math

import numpy as np

from qcma import hdh_circuit, norm_distance_to_identity
from qcma.simulator import evolve

print(" n   max_y |(1-U)|y>|   2^(1-n/2)   min_phi |U - e^(i phi)|")
for n in range(2, 9):
    c = hdh_circuit(n)
    dim = 2**n
    moved = np.linalg.norm(evolve(c, np.eye(dim, dtype=complex)) - np.eye(dim), axis=0)
    print(f"{n:2d}   {moved.max():.6f}           {2 ** (1 - n / 2):.6f}    {norm_distance_to_identity(c):.6f}")

print(f"\nsqrt(2) = {math.sqrt(2):.6f}")
