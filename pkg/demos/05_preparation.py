"""
Preparing low-energy states with few gates
==========================================

The history state of a witness has a short preparation circuit: write
the witness, climb a staircase of clock rotations, then run each gate
controlled on its clock qubit. For tiny registers a breadth-first search
finds the shortest circuit outright.
"""
import numpy as np

from qcma import build_tilde, compile_hamiltonian, history_state
from qcma.circuit import serialize
from qcma.clock import LowEnergyInstance, decide_low_energy, energy, history_prep_circuit
from qcma.idcheck import min_gates_prepare
from qcma.instances import toy_cx_verifier
from qcma.simulator import run

v = build_tilde(toy_cx_verifier())
prep = history_prep_circuit(v, 1)
eta = history_state(v, 1)
print(serialize(prep))
print(f"{len(prep)} gates, fidelity {abs(run(prep).inner(eta)) ** 2:.12f}")

h = compile_hamiltonian(v)
print(f"energy of the prepared state: {energy(h, run(prep)):.2e}")
res = decide_low_energy(LowEnergyInstance(h, 1e-9, 0.1, len(prep)), prep)
print(f"decision with certificate: {res.decision.name} via {res.method}")

# shortest circuits for a two-qubit target
bell = np.array([1, 0, 0, 1]) / np.sqrt(2)
best = min_gates_prepare(bell, 4)
print("\nshortest Bell preparation:")
print(serialize(best))
