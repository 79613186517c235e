import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qcma.circuit import (
    ARITY,
    Circuit,
    Gate,
    VerifierSpec,
    embed,
    inverse,
    parse,
    parse_circuit,
    random_circuit,
    serialize,
    validate,
)
from qcma.errors import (
    ArityMismatch,
    CircuitSyntaxError,
    DuplicateQubit,
    IndexOutOfRange,
    NonInjectiveMapping,
    UnknownGate,
)
from qcma.simulator import evolve, unitary_matrix

from conftest import random_state


def test_validate_ok():
    validate(Circuit(1, (Gate("H", (0,)),)))


def test_duplicate_qubit():
    with pytest.raises(DuplicateQubit):
        Gate("CX", (0, 0))
    with pytest.raises(DuplicateQubit):
        Gate("X", (1,), ((1, 1),))


def test_index_out_of_range():
    with pytest.raises(IndexOutOfRange):
        Circuit(2, (Gate("H", (5,)),))


def test_arity_mismatch():
    with pytest.raises(ArityMismatch):
        Gate("CX", (0,))
    with pytest.raises(ArityMismatch):
        Gate("H", (0, 1))


def test_ry_needs_finite_angle():
    with pytest.raises(ValueError):
        Gate("RY", (0,), (), float("nan"))
    with pytest.raises(ValueError):
        Gate("RY", (0,))


def test_inverse_example():
    c = Circuit(1, (Gate("H", (0,)), Gate("T", (0,))))
    assert inverse(c).gates == (Gate("TDG", (0,)), Gate("H", (0,)))


def test_inverse_flips_angles_and_keeps_controls():
    g = Gate("RY", (0,), ((2, 0),), 0.3)
    assert g.inverse() == Gate("RY", (0,), ((2, 0),), -0.3)
    assert Gate("S", (1,), ((0, 1),)).inverse() == Gate("SDG", (1,), ((0, 1),))


def test_inverse_involution(rng):
    for _ in range(20):
        c = random_circuit(4, 20, rng)
        assert inverse(inverse(c)) == c
        assert len(inverse(c)) == len(c)


def test_inverse_undoes_circuit(rng):
    for _ in range(10):
        c = random_circuit(4, 20, rng)
        psi = random_state(4, rng)
        back = evolve(inverse(c), evolve(c, psi))
        assert np.allclose(back, psi, atol=1e-10)


def test_embed_examples():
    assert embed(Circuit(1, (Gate("H", (0,)),)), {0: 3}, 5).gates == (Gate("H", (3,)),)
    c = Circuit(2, (Gate("CX", (0, 1)), Gate("X", (1,), ((0, 0),))))
    assert embed(c, {0: 0, 1: 1}, 2) == c


def test_embed_errors():
    c = Circuit(2, (Gate("CX", (0, 1)),))
    with pytest.raises(NonInjectiveMapping):
        embed(c, {0: 1, 1: 1}, 3)
    with pytest.raises(IndexOutOfRange):
        embed(c, {0: 0, 1: 7}, 3)


def test_embed_acts_as_tensor_with_identity(rng):
    c = random_circuit(3, 15, rng)
    mapping = {0: 4, 1: 0, 2: 2}
    big = unitary_matrix(embed(c, mapping, 5))
    small = unitary_matrix(c)
    # oracle: permute basis bits by hand
    for col in range(32):
        sub = sum(((col >> mapping[q]) & 1) << q for q in range(3))
        rest = col & ~sum(1 << v for v in mapping.values())
        for sub_out in range(8):
            row = rest | sum(((sub_out >> q) & 1) << mapping[q] for q in range(3))
            assert abs(big[row, col] - small[sub_out, sub]) < 1e-12


def test_parse_examples():
    bell = parse("qubits 2\nh 0\ncx 0 1")
    assert bell == Circuit(2, (Gate("H", (0,)), Gate("CX", (0, 1))))
    ry = parse("qubits 1\nry 0 1.5707963267948966")
    assert ry.gates[0].angle == math.pi / 2


@pytest.mark.parametrize(
    "text, line",
    [("cx 0", 1), ("qubits 2\ncx 0", 2), ("qubits 2\nh 0\nh 2", 3), ("qubits 1\nry 0 abc", 2)],
)
def test_parse_syntax_errors(text, line):
    with pytest.raises(CircuitSyntaxError) as info:
        parse_circuit(text)
    assert info.value.lineno == line


def test_unknown_gate():
    with pytest.raises(UnknownGate):
        parse_circuit("qubits 1\nfoo 0")


def test_control_prefix_roundtrip():
    text = "qubits 3\nctrl 1=0 2=1 : ry 0 0.25\nctrl 0=0 : cx 1 2\n"
    c = parse_circuit(text)
    assert c.gates[0].controls == ((1, 0), (2, 1))
    assert serialize(c) == "qubits 3\nctrl 1=0 2=1 : ry 0 0.25\nctrl 0=0 : cx 1 2\n"


def test_verifier_json_roundtrip():
    v = VerifierSpec(1, 1, 1, Circuit(2, (Gate("CX", (0, 1)),)), 0.05)
    assert parse(serialize(v)) == v


def test_verifier_invariants():
    c = Circuit(2, (Gate("CX", (0, 1)),))
    with pytest.raises(ValueError):
        VerifierSpec(1, 2, 0, c)
    with pytest.raises(IndexOutOfRange):
        VerifierSpec(1, 1, 2, c)
    with pytest.raises(ValueError):
        VerifierSpec(1, 1, 1, c, 0.5)


@st.composite
def gates(draw, n):
    kind = draw(st.sampled_from(sorted(ARITY)))
    qs = draw(st.permutations(range(n)))
    k = ARITY[kind]
    targets = tuple(qs[:k])
    n_ctrl = draw(st.integers(0, n - k))
    controls = tuple((q, draw(st.integers(0, 1))) for q in qs[k : k + n_ctrl])
    angle = draw(st.floats(-10, 10, allow_nan=False)) if kind == "RY" else None
    return Gate(kind, targets, controls, angle)


@st.composite
def circuits(draw):
    n = draw(st.integers(3, 5))
    return Circuit(n, tuple(draw(st.lists(gates(n), max_size=12))))


@settings(max_examples=200, deadline=None)
@given(circuits())
def test_roundtrip_property(c):
    assert parse(serialize(c)) == c


@settings(max_examples=50, deadline=None)
@given(circuits())
def test_unitarity_property(c):
    u = unitary_matrix(c)
    assert np.allclose(u.conj().T @ u, np.eye(u.shape[0]), atol=1e-10)
