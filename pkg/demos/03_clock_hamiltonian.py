"""
Clock Hamiltonians of accepting and rejecting verifiers
=======================================================

Compile a copied-input verifier into a local Hamiltonian on work qubits
plus a unary clock, then compare ground energies of a matched pair.
The accepting one has a history state with energy p_reject / (L + 1).
"""
import numpy as np

from qcma import build_tilde, compile_hamiltonian, history_state
from qcma.clock import energy, ground_energy, matvec, to_dense
from qcma.instances import matched_pair
from qcma.spectral import lanczos_extreme

rng = np.random.default_rng(11)
(acc, y), rej = matched_pair(1, 1, rng, scramble_gates=2)
acc, rej = build_tilde(acc), build_tilde(rej)

for name, v in (("accepting", acc), ("rejecting", rej)):
    h = compile_hamiltonian(v)
    L = len(v.circuit)
    dense = np.linalg.eigvalsh(to_dense(h))[0]
    lz = lanczos_extreme(lambda x: matvec(h, x), h.dimension, seed=0)
    print(f"{name}: {h.num_qubits} qubits, {len(h.terms)} terms, locality {h.locality}, L = {L}")
    print(f"  lambda_min dense = {dense:.6e}, Lanczos = {lz.value:.6e} ({lz.iterations} iterations)")

# the history state of the witness
h = compile_hamiltonian(acc)
eta = history_state(acc, y)
L = len(acc.circuit)
print(f"\nhistory-state energy {energy(h, eta):.3e}, bound eps/(L+1) = {acc.epsilon / (L + 1):.3e}")
print(f"|H_prop eta| = {np.linalg.norm(matvec(h.select('prop'), eta.amplitudes)):.1e}")
print(f"ground_energy(auto) = {ground_energy(h):.3e}")
