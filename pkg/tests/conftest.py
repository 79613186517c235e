import numpy as np
import pytest

from qcma.circuit import Circuit, Gate
from qcma.simulator import gate_core

ACCEPTANCE_LINES: list[str] = []


def dense_gate(gate: Gate, n: int) -> np.ndarray:
    """Full matrix of ``gate`` built by walking every basis index.

    Deliberately independent of the tensor-slicing simulator.
    """
    core = gate_core(gate)
    dim = 2**n
    m = np.zeros((dim, dim), dtype=complex)
    t = gate.target
    for col in range(dim):
        if all(((col >> q) & 1) == p for q, p in gate.all_controls()):
            bit = (col >> t) & 1
            for out_bit in (0, 1):
                row = (col & ~(1 << t)) | (out_bit << t)
                m[row, col] += core[out_bit, bit]
        else:
            m[col, col] = 1
    return m


def dense_circuit(circuit: Circuit) -> np.ndarray:
    u = np.eye(2**circuit.num_qubits, dtype=complex)
    for g in circuit.gates:
        u = dense_gate(g, circuit.num_qubits) @ u
    return u


def random_state(n: int, rng) -> np.ndarray:
    v = rng.standard_normal(2**n) + 1j * rng.standard_normal(2**n)
    return v / np.linalg.norm(v)


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
