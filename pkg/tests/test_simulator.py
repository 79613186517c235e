import numpy as np
import pytest

from qcma.circuit import Circuit, Gate, VerifierSpec, random_circuit
from qcma.errors import DimensionMismatch, IndexOutOfRange, NormDriftError, TooLarge
from qcma.simulator import (
    StateVector,
    acceptance_operator,
    acceptance_probabilities,
    acceptance_probability,
    apply_gate,
    basis_state,
    diagonal,
    diagonal_overlap,
    evolve,
    run,
    unitary_matrix,
)

from conftest import dense_circuit, random_state

S2 = 1 / np.sqrt(2)


@pytest.mark.parametrize("n, idx", [(1, 0), (2, 3), (3, 5)])
def test_basis_state(n, idx):
    expected = np.zeros(2**n)
    expected[idx] = 1
    assert np.array_equal(basis_state(n, idx).amplitudes, expected)


def test_basis_state_out_of_range():
    with pytest.raises(IndexOutOfRange):
        basis_state(2, 4)


def test_hadamard_on_zero():
    out = apply_gate(basis_state(1, 0), Gate("H", (0,)))
    assert np.allclose(out.amplitudes, [S2, S2])


def test_cx_little_endian():
    out = apply_gate(basis_state(2, 1), Gate("CX", (0, 1)))
    assert np.allclose(out.amplitudes, basis_state(2, 3).amplitudes)


def test_open_control_fires_on_zero():
    g = Gate("X", (0,), ((1, 0),))
    assert np.allclose(apply_gate(basis_state(2, 0), g).amplitudes, basis_state(2, 1).amplitudes)
    assert np.allclose(apply_gate(basis_state(2, 2), g).amplitudes, basis_state(2, 2).amplitudes)


def test_dimension_mismatch():
    with pytest.raises(DimensionMismatch):
        run(Circuit(2, ()), basis_state(3, 0))


def test_statevector_rejects_unnormalized():
    with pytest.raises(NormDriftError):
        StateVector(1, np.array([1.0, 1.0]))


def test_matches_dense_oracle(rng):
    for _ in range(10):
        c = random_circuit(4, 25, rng)
        assert np.allclose(unitary_matrix(c), dense_circuit(c), atol=1e-12)
    c = Circuit(4, (Gate("RY", (2,), ((0, 0), (3, 1)), 0.7), Gate("T", (1,), ((2, 0),))))
    assert np.allclose(unitary_matrix(c), dense_circuit(c), atol=1e-12)


def test_norm_preserved_per_gate(rng):
    c = random_circuit(4, 30, rng)
    psi = random_state(4, rng)
    for g in c.gates:
        psi = evolve(Circuit(4, (g,)), psi)
        assert abs(np.linalg.norm(psi) - 1) < 1e-12


def test_linearity(rng):
    c = random_circuit(4, 20, rng)
    psi, phi = random_state(4, rng), random_state(4, rng)
    a, b = 0.3 - 0.2j, 1.1 + 0.5j
    lhs = evolve(c, a * psi + b * phi)
    rhs = a * evolve(c, psi) + b * evolve(c, phi)
    assert np.allclose(lhs, rhs, atol=1e-10)


def test_unitary_examples():
    assert np.allclose(unitary_matrix(Circuit(1, (Gate("H", (0,)),))), np.array([[1, 1], [1, -1]]) * S2)
    assert np.allclose(unitary_matrix(Circuit(3, ())), np.eye(8))


def test_unitary_cap(monkeypatch):
    monkeypatch.setenv("QCMA_MAX_DENSE_QUBITS", "3")
    with pytest.raises(TooLarge):
        unitary_matrix(Circuit(4, ()))


def test_diagonal_overlap_examples():
    assert diagonal_overlap(Circuit(3, ()), 5) == 1
    assert diagonal_overlap(Circuit(1, (Gate("X", (0,)),)), 0) == 0


def test_diagonal_batched_matches_single(rng):
    c = random_circuit(5, 20, rng)
    d = diagonal(c, chunk=7)
    assert np.allclose(d, [diagonal_overlap(c, z) for z in range(32)], atol=1e-14)


CX_VERIFIER = VerifierSpec(1, 1, 1, Circuit(2, (Gate("CX", (0, 1)),)))


def test_acceptance_examples():
    assert acceptance_probability(CX_VERIFIER, 1) == pytest.approx(1.0, abs=1e-15)
    assert acceptance_probability(CX_VERIFIER, 0) == pytest.approx(0.0, abs=1e-15)
    with pytest.raises(IndexOutOfRange):
        acceptance_probability(CX_VERIFIER, 2)


def _trace_oracle(v: VerifierSpec, y: int) -> float:
    # tr(U (|y><y| (x) |0><0|) U^dag P1) with dense matrices
    dim = 2**v.num_qubits
    rho = np.zeros((dim, dim), dtype=complex)
    rho[y, y] = 1
    u = dense_circuit(v.circuit)
    p1 = np.diag([(i >> v.output_qubit) & 1 for i in range(dim)]).astype(complex)
    return float(np.trace(u @ rho @ u.conj().T @ p1).real)


def test_acceptance_matches_trace_oracle(rng):
    for _ in range(10):
        v = VerifierSpec(3, 2, int(rng.integers(5)), random_circuit(5, 15, rng))
        for y in range(8):
            assert acceptance_probability(v, y) == pytest.approx(_trace_oracle(v, y), abs=1e-10)


def test_acceptance_operator_examples():
    ident = VerifierSpec(1, 1, 1, Circuit(2, ()))
    assert np.allclose(acceptance_operator(ident), 0)
    assert np.allclose(acceptance_operator(CX_VERIFIER), np.diag([0, 1]))


def test_acceptance_operator_properties(rng):
    for _ in range(10):
        v = VerifierSpec(2, 2, int(rng.integers(4)), random_circuit(4, 15, rng))
        m = acceptance_operator(v)
        probs = acceptance_probabilities(v)
        assert np.allclose(np.diag(m).real, probs, atol=1e-12)
        assert np.allclose(probs, [acceptance_probability(v, y) for y in range(4)], atol=1e-12)
        w = np.linalg.eigvalsh(m)
        assert w.min() > -1e-12 and w.max() < 1 + 1e-12
        assert probs.max() <= w.max() + 1e-12
        psi = random_state(2, rng)
        full = np.zeros(16, dtype=complex)
        full[:4] = psi
        out = evolve(v.circuit, full)
        p = sum(abs(out[i]) ** 2 for i in range(16) if (i >> v.output_qubit) & 1)
        assert np.vdot(psi, m @ psi).real == pytest.approx(p, abs=1e-12)
