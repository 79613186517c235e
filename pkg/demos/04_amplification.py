"""
Majority-vote amplification
===========================

Three copies of a biased coin and a reversible majority vote.
"""
from qcma import amplify
from qcma.instances import biased_coin_verifier
from qcma.simulator import acceptance_probability

print("   p    majority(3)   3p^2(1-p)+p^3   majority(5)")
for p in (0.1, 0.3, 0.5, 0.7, 0.9):
    v = biased_coin_verifier(p)
    a3 = acceptance_probability(amplify(v, 3), 0)
    a5 = acceptance_probability(amplify(v, 5), 0)
    print(f"{p:5.2f}   {a3:.6f}      {3 * p**2 * (1 - p) + p**3:.6f}        {a5:.6f}")

v3 = amplify(biased_coin_verifier(0.9), 3)
print(f"\nr=3 circuit: {v3.num_qubits} qubits, {len(v3.circuit)} gates, output qubit {v3.output_qubit}")
