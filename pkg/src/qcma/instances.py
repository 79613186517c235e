"""Small verifier families with known acceptance behaviour.

Every generator is deterministic given its ``numpy.random.Generator``.
"""
from __future__ import annotations

import math

import numpy as np

from .circuit import Circuit, Gate, VerifierSpec, inverse, random_circuit
from .simulator import acceptance_probabilities

# RY(a)|0> has P(1) = sin^2(a/2); 0.2003 keeps P(1) <= 0.01
SMALL_ANGLE = 2 * math.asin(0.1)


def toy_cx_verifier() -> VerifierSpec:
    """Copies the single input bit to the output ancilla: accepts exactly y = 1."""
    return VerifierSpec(1, 1, 1, Circuit(2, (Gate("CX", (0, 1)),)), 0.0)


def biased_coin_verifier(p: float) -> VerifierSpec:
    """Accepts every input with probability ``p``."""
    theta = 2 * math.asin(math.sqrt(p))
    return VerifierSpec(1, 1, 1, Circuit(2, (Gate("RY", (1,), (), theta),)), 0.0)


def _scramble(n: int, m: int, gates: int, rng: np.random.Generator) -> tuple[Circuit, int]:
    w = n + m
    out = w - 1
    return random_circuit(w, gates, rng, qubits=range(out)), out


def accepting_verifier(
    n: int, m: int, rng: np.random.Generator, scramble_gates: int = 6, max_reject: float = 0.01
) -> tuple[VerifierSpec, int]:
    """A random verifier accepting a random witness with probability >= 1 - max_reject.

    Structure: ``W``, ``W^dagger``, a near-X rotation on the output (last
    ancilla) controlled on the witness pattern, then ``W`` again. ``W`` never
    touches the output. Returns ``(verifier, witness)``; ``epsilon`` is the
    measured rejection probability of the witness.
    """
    if m < 1:
        raise ValueError("need an ancilla for the output")
    w_circ, out = _scramble(n, m, scramble_gates, rng)
    y = int(rng.integers(2**n))
    pattern = tuple((i, (y >> i) & 1) for i in range(n)) + tuple((a, 0) for a in range(n, out))
    slack = 2 * math.acos(math.sqrt(1 - max_reject))
    flip = Gate("RY", (out,), pattern, math.pi - float(rng.uniform(0, slack)))
    circ = Circuit(n + m, w_circ.gates + inverse(w_circ).gates + (flip,) + w_circ.gates)
    v = VerifierSpec(n, m, out, circ, 0.0)
    eps = 1 - float(acceptance_probabilities(v)[y])
    return VerifierSpec(n, m, out, circ, max(eps, 0.0)), y


def rejecting_verifier(
    n: int, m: int, rng: np.random.Generator, scramble_gates: int = 6, rotations: int = 2,
    max_accept: float = 0.01,
) -> VerifierSpec:
    """A random verifier accepting every basis input with probability <= max_accept.

    The output (last ancilla) is only touched by controlled rotations whose
    angles sum to at most ``2 asin(sqrt(max_accept))``. ``epsilon`` is set to
    the measured maximum basis-state acceptance.
    """
    if m < 1:
        raise ValueError("need an ancilla for the output")
    w_circ, out = _scramble(n, m, scramble_gates, rng)
    budget = 2 * math.asin(math.sqrt(max_accept))
    angles = rng.dirichlet(np.ones(rotations)) * budget * float(rng.uniform(0.5, 1.0))
    rots = []
    for a in angles:
        ctrl = int(rng.integers(out)) if out else None
        rots.append(Gate("RY", (out,), () if ctrl is None else ((ctrl, 1),), float(a) * rng.choice([-1, 1])))
    w2, _ = _scramble(n, m, scramble_gates // 2, rng)
    circ = Circuit(n + m, w_circ.gates + tuple(rots) + w2.gates)
    v = VerifierSpec(n, m, out, circ, 0.0)
    eps = float(np.max(acceptance_probabilities(v)))
    return VerifierSpec(n, m, out, circ, eps)


def matched_pair(
    n: int, m: int, rng: np.random.Generator, scramble_gates: int = 3, max_eps: float = 0.01
) -> tuple[tuple[VerifierSpec, int], VerifierSpec]:
    """An accepting and a rejecting verifier of the same shape and gate count."""
    w_circ, out = _scramble(n, m, scramble_gates, rng)
    y = int(rng.integers(2**n))
    pattern = tuple((i, (y >> i) & 1) for i in range(n)) + tuple((a, 0) for a in range(n, out))
    slack = 2 * math.acos(math.sqrt(1 - max_eps))
    flip = Gate("RY", (out,), pattern, math.pi - float(rng.uniform(0, slack)))
    small = Gate("RY", (out,), pattern, float(rng.uniform(0, 2 * math.asin(math.sqrt(max_eps)))))

    def pieces(g):
        return w_circ.gates + inverse(w_circ).gates + (g,) + w_circ.gates

    acc = VerifierSpec(n, m, out, Circuit(n + m, pieces(flip)), 0.0)
    rej = VerifierSpec(n, m, out, Circuit(n + m, pieces(small)), 0.0)
    eps_acc = max(0.0, 1 - float(acceptance_probabilities(acc)[y]))
    eps_rej = float(np.max(acceptance_probabilities(rej)))
    return (
        (VerifierSpec(n, m, out, acc.circuit, eps_acc), y),
        VerifierSpec(n, m, out, rej.circuit, eps_rej),
    )
