"""Exact statevector simulation and acceptance probabilities of verifiers.

Gates are applied matrix-free: the amplitude array is viewed as a rank-n
tensor and the 2x2 core of each gate updates the slice where all controls
match. Qubit ``q`` lives on tensor axis ``n - 1 - q`` (little-endian indices).
"""
from __future__ import annotations

import os
from dataclasses import dataclass

import numpy as np

from .circuit import Circuit, Gate, VerifierSpec
from .errors import DimensionMismatch, IndexOutOfRange, NormDriftError, TooLarge

NORM_TOL = 1e-8

_S2 = 1 / np.sqrt(2)
_CORE = {
    "H": np.array([[_S2, _S2], [_S2, -_S2]], dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "CX": np.array([[0, 1], [1, 0]], dtype=complex),
    "CCX": np.array([[0, 1], [1, 0]], dtype=complex),
}
_PHASE = {
    "T": np.exp(1j * np.pi / 4),
    "TDG": np.exp(-1j * np.pi / 4),
    "S": 1j,
    "SDG": -1j,
}


def dense_cap(default: int) -> int:
    """Dense-work qubit cap, overridable through ``QCMA_MAX_DENSE_QUBITS``."""
    env = os.environ.get("QCMA_MAX_DENSE_QUBITS")
    return int(env) if env else default


def gate_core(gate: Gate) -> np.ndarray:
    """2x2 matrix applied to ``gate.target`` when every control fires."""
    if gate.kind == "RY":
        c, s = np.cos(gate.angle / 2), np.sin(gate.angle / 2)
        return np.array([[c, -s], [s, c]], dtype=complex)
    if gate.kind in _PHASE:
        return np.diag([1, _PHASE[gate.kind]]).astype(complex)
    return _CORE[gate.kind]


@dataclass(frozen=True)
class StateVector:
    num_qubits: int
    amplitudes: np.ndarray

    def __post_init__(self):
        amps = np.asarray(self.amplitudes, dtype=complex).reshape(-1)
        if amps.size != 2**self.num_qubits:
            raise DimensionMismatch(
                f"{amps.size} amplitudes for {self.num_qubits} qubits"
            )
        norm = np.linalg.norm(amps)
        if abs(norm - 1) > NORM_TOL:
            raise NormDriftError(f"state norm {norm!r} is not 1")
        amps.setflags(write=False)
        object.__setattr__(self, "amplitudes", amps)

    @classmethod
    def from_amplitudes(cls, amps, normalize=False) -> StateVector:
        amps = np.asarray(amps, dtype=complex).reshape(-1)
        n = amps.size.bit_length() - 1
        if amps.size != 2**n:
            raise DimensionMismatch(f"length {amps.size} is not a power of two")
        if normalize:
            amps = amps / np.linalg.norm(amps)
        return cls(n, amps)

    def __len__(self):
        return self.amplitudes.size

    def __array__(self, dtype=None, copy=None):
        return self.amplitudes if dtype is None else self.amplitudes.astype(dtype)

    def inner(self, other: StateVector) -> complex:
        """<self|other>."""
        return complex(np.vdot(self.amplitudes, np.asarray(other)))


def basis_state(num_qubits: int, index: int) -> StateVector:
    if not 0 <= index < 2**num_qubits:
        raise IndexOutOfRange(f"basis index {index} out of range for {num_qubits} qubits")
    amps = np.zeros(2**num_qubits, dtype=complex)
    amps[index] = 1
    return StateVector(num_qubits, amps)


def _apply_inplace(t: np.ndarray, gate: Gate, n: int) -> None:
    # t has shape (2,)*n + batch; written in place
    base = [slice(None)] * t.ndim
    for q, p in gate.all_controls():
        base[n - 1 - q] = p
    ax = n - 1 - gate.target
    i0, i1 = list(base), list(base)
    i0[ax], i1[ax] = 0, 1
    i0, i1 = tuple(i0), tuple(i1)
    kind = gate.kind
    if kind in ("X", "CX", "CCX"):
        a0 = t[i0].copy()
        t[i0] = t[i1]
        t[i1] = a0
    elif kind in _PHASE:
        t[i1] *= _PHASE[kind]
    else:
        m = gate_core(gate)
        a0, a1 = t[i0].copy(), t[i1].copy()
        t[i0] = m[0, 0] * a0 + m[0, 1] * a1
        t[i1] = m[1, 0] * a0 + m[1, 1] * a1


def evolve(circuit: Circuit, amplitudes: np.ndarray, check_norm: bool = True) -> np.ndarray:
    """Apply ``circuit`` to raw amplitudes of shape ``(2**n,)`` or ``(2**n, k)``.

    Columns of a 2-D input are evolved independently. Returns a new array;
    raises :class:`NormDriftError` if any column norm moved by more than
    ``NORM_TOL`` (relative).
    """
    n = circuit.num_qubits
    amplitudes = np.asarray(amplitudes)
    if amplitudes.shape[0] != 2**n:
        raise DimensionMismatch(
            f"state of length {amplitudes.shape[0]} for a {n}-qubit circuit"
        )
    batch = amplitudes.shape[1:]
    t = np.array(amplitudes, dtype=complex).reshape((2,) * n + batch)
    for g in circuit.gates:
        _apply_inplace(t, g, n)
    out = t.reshape((2**n,) + batch)
    if check_norm:
        before = np.linalg.norm(amplitudes, axis=0)
        after = np.linalg.norm(out, axis=0)
        drift = np.abs(after - before) / np.maximum(before, 1e-300)
        if np.any(drift > NORM_TOL):
            raise NormDriftError(f"norm drift {float(np.max(drift)):.3g} while running circuit")
    return out


def apply_gate(state: StateVector, gate: Gate) -> StateVector:
    if gate.qubits and max(gate.qubits) >= state.num_qubits:
        raise DimensionMismatch(f"gate on qubit {max(gate.qubits)} for {state.num_qubits}-qubit state")
    return run(Circuit(state.num_qubits, (gate,)), state)


def run(circuit: Circuit, state: StateVector | None = None) -> StateVector:
    """Run ``circuit`` on ``state`` (default ``|0...0>``)."""
    if state is None:
        state = basis_state(circuit.num_qubits, 0)
    if state.num_qubits != circuit.num_qubits:
        raise DimensionMismatch(
            f"{state.num_qubits}-qubit state for a {circuit.num_qubits}-qubit circuit"
        )
    return StateVector(circuit.num_qubits, evolve(circuit, state.amplitudes))


def diagonal_overlap(circuit: Circuit, z: int) -> complex:
    """<z|C|z>."""
    out = run(circuit, basis_state(circuit.num_qubits, z))
    return complex(out.amplitudes[z])


def diagonal(circuit: Circuit, chunk: int = 256) -> np.ndarray:
    """All diagonal entries <z|C|z>, simulating basis states in batches."""
    dim = 2**circuit.num_qubits
    diag = np.empty(dim, dtype=complex)
    for start in range(0, dim, chunk):
        stop = min(dim, start + chunk)
        cols = np.zeros((dim, stop - start), dtype=complex)
        idx = np.arange(start, stop)
        cols[idx, idx - start] = 1
        out = evolve(circuit, cols)
        diag[start:stop] = out[idx, idx - start]
    return diag


def unitary_matrix(circuit: Circuit) -> np.ndarray:
    n = circuit.num_qubits
    if n > dense_cap(12):
        raise TooLarge(f"unitary of {n} qubits exceeds the dense cap")
    return evolve(circuit, np.eye(2**n, dtype=complex))


def _output_mask(verifier: VerifierSpec) -> np.ndarray:
    idx = np.arange(2**verifier.num_qubits)
    return ((idx >> verifier.output_qubit) & 1).astype(bool)


def acceptance_probability(verifier: VerifierSpec, y: int) -> float:
    """Probability that the output qubit reads 1 on input ``|y>|0...0>``."""
    if not 0 <= y < 2**verifier.n_input:
        raise IndexOutOfRange(f"witness {y} out of range for {verifier.n_input} input qubits")
    # inputs are the low bits, ancillas are zero, so the basis index is y
    out = run(verifier.circuit, basis_state(verifier.num_qubits, y))
    p = float(np.sum(np.abs(out.amplitudes[_output_mask(verifier)]) ** 2))
    return min(max(p, 0.0), 1.0)


def acceptance_probabilities(verifier: VerifierSpec) -> np.ndarray:
    """Acceptance probability of every input basis state, in index order."""
    cols = _input_columns(verifier)
    return np.sum(np.abs(cols[_output_mask(verifier)]) ** 2, axis=0).clip(0.0, 1.0)


def _input_columns(verifier: VerifierSpec) -> np.ndarray:
    dim_in, dim = 2**verifier.n_input, 2**verifier.num_qubits
    cols = np.zeros((dim, dim_in), dtype=complex)
    cols[np.arange(dim_in), np.arange(dim_in)] = 1
    return evolve(verifier.circuit, cols)


def acceptance_operator(verifier: VerifierSpec) -> np.ndarray:
    """Hermitian M on the input register with <psi|M|psi> = acceptance of psi."""
    if verifier.num_qubits > dense_cap(14):
        raise TooLarge(f"{verifier.num_qubits}-qubit verifier exceeds the dense cap")
    accepted = _input_columns(verifier)[_output_mask(verifier)]
    m = accepted.conj().T @ accepted
    return (m + m.conj().T) / 2
