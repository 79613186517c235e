"""Identity check on basis states, and the verifier gadgets built on circuits.

The circuit produced by :func:`build_Z` lives on ``1 + n + m`` qubits::

    qubit 0           rotation target
    qubits 1..n       input register of the verifier
    qubits n+1..n+m   ancillas of the verifier

so the witness basis state ``|0>|y>|0...0>`` has index ``y << 1``.
"""
from __future__ import annotations

import enum
import itertools
import math
from collections import deque
from dataclasses import dataclass
from typing import Callable, Iterator

import numpy as np
import scipy.linalg

from .circuit import Circuit, Gate, VerifierSpec, embed, inverse
from .errors import DimensionMismatch, EvenRepetition, NoGap, TooLarge, VanishingOverlap
from .simulator import (
    StateVector,
    basis_state,
    diagonal,
    diagonal_overlap,
    evolve,
    run,
    unitary_matrix,
)

DEFAULT_PHI = math.pi / 4
BRUTE_FORCE_QUBITS = 12
TIE_TOL = 1e-12


class Decision(enum.Enum):
    CASE1 = 1
    CASE2 = 2
    PROMISE_VIOLATED = "promise_violated"
    UNKNOWN = "unknown"


@dataclass(frozen=True)
class TheoremBounds:
    case1_upper: float
    case2_lower: float

    def to_dict(self) -> dict:
        return {"case1_upper": self.case1_upper, "case2_lower": self.case2_lower}


@dataclass(frozen=True)
class ReductionParams:
    """Rotation angle and verifier confidence for the identity-check reduction.

    Construction fails with :class:`NoGap` unless
    ``cos(phi) - 2 sqrt(eps) > cos(2 phi) + sqrt(eps)``.
    """

    phi: float = DEFAULT_PHI
    epsilon: float = 0.0

    def __post_init__(self):
        # cos(2 phi) < 0 beyond pi/4 and the squared case-1 bound stops being an upper bound
        if not (math.isfinite(self.phi) and 0 < self.phi <= math.pi / 4 + 1e-15):
            raise ValueError(f"phi must lie in (0, pi/4], got {self.phi}")
        if not (math.isfinite(self.epsilon) and 0 <= self.epsilon <= 1 / 3):
            raise ValueError(f"epsilon must lie in [0, 1/3], got {self.epsilon}")
        lo = math.cos(self.phi) - 2 * math.sqrt(self.epsilon)
        hi = _cos2(self.phi) + math.sqrt(self.epsilon)
        if not lo > hi:
            raise NoGap(
                f"phi={self.phi}, epsilon={self.epsilon}: cos(phi) - 2 sqrt(eps) = {lo:.6g} "
                f"does not exceed cos(2 phi) + sqrt(eps) = {hi:.6g}"
            )


def _cos2(phi: float) -> float:
    # cos(2 phi) written so that phi = pi/4 gives exactly 0
    return math.sin(math.pi / 2 - 2 * phi)


def theorem_bounds(params: ReductionParams) -> TheoremBounds:
    root = math.sqrt(params.epsilon)
    upper = max(0.0, _cos2(params.phi) + root) ** 2
    lower = (math.cos(params.phi) - 2 * root) ** 2
    return TheoremBounds(case1_upper=upper, case2_lower=lower)


@dataclass(frozen=True)
class IdCheckInstance:
    circuit: Circuit
    mu: float
    delta: float
    min_gap: float = 1e-6

    def __post_init__(self):
        if not 0 <= self.delta < self.mu <= 1:
            raise ValueError(f"need 0 <= delta < mu <= 1, got mu={self.mu}, delta={self.delta}")
        if self.mu - self.delta < self.min_gap:
            raise NoGap(f"mu - delta = {self.mu - self.delta} below minimum gap {self.min_gap}")


# -- the Z circuit and its overlaps ---------------------------------------------


def rotation(phi: float, target: int, controls=()) -> Gate:
    """The rotation [[cos phi, -sin phi], [sin phi, cos phi]], i.e. RY(2 phi)."""
    return Gate("RY", (target,), tuple(controls), 2 * phi)


def build_Z(verifier: VerifierSpec, phi: float = DEFAULT_PHI) -> Circuit:
    """``U^dagger R2 U R1`` with R1 gated on clean ancillas, R2 on the output."""
    total = 1 + verifier.num_qubits
    shift = {q: q + 1 for q in range(verifier.num_qubits)}
    u = embed(verifier.circuit, shift, total)
    r1 = rotation(phi, 0, [(a + 1, 0) for a in verifier.ancillas])
    r2 = rotation(phi, 0, [(verifier.output_qubit + 1, 1)])
    return Circuit(total, (r1,) + u.gates + (r2,) + inverse(u).gates)


def z_star(y: int) -> int:
    """Index of ``|0>|y>|0...0>`` in the layout of :func:`build_Z`."""
    return y << 1


def ancilla_mask(verifier: VerifierSpec) -> int:
    """Bit mask selecting the verifier's ancillas inside a Z basis index."""
    return sum(1 << (a + 1) for a in verifier.ancillas)


def overlaps_squared(circuit: Circuit, limit: int = BRUTE_FORCE_QUBITS) -> np.ndarray:
    """``|<z|C|z>|^2`` for every basis state ``z``."""
    if circuit.num_qubits > limit:
        raise TooLarge(f"{circuit.num_qubits} qubits exceeds brute-force limit {limit}")
    return np.abs(diagonal(circuit)) ** 2


def min_basis_overlap(circuit: Circuit, limit: int = BRUTE_FORCE_QUBITS) -> tuple[int, float]:
    vals = overlaps_squared(circuit, limit)
    # values equal up to rounding count as ties; the smallest index wins
    z = int(np.flatnonzero(vals <= vals.min() + TIE_TOL)[0])
    return z, float(vals[z])


def decide_basis_identity(instance: IdCheckInstance, limit: int = BRUTE_FORCE_QUBITS) -> tuple[Decision, int, float]:
    """Returns the decision together with the minimising basis state and its value."""
    z, value = min_basis_overlap(instance.circuit, limit)
    if value <= 1 - instance.mu:
        return Decision.CASE1, z, value
    if value >= 1 - instance.delta:
        return Decision.CASE2, z, value
    return Decision.PROMISE_VIOLATED, z, value


def eigenphases(circuit: Circuit) -> np.ndarray:
    # complex Schur form of a unitary is diagonal; more stable than eig for clusters
    t, _ = scipy.linalg.schur(unitary_matrix(circuit), output="complex")
    return np.angle(np.diag(t))


def norm_distance_to_identity(circuit: Circuit, return_phase: bool = False):
    """``min_phi ||U - e^{i phi} I||`` in operator norm.

    The eigenvalues occupy an arc of the unit circle of length ``A`` (the
    complement of the largest gap between sorted eigenphases). The best phase
    is the arc's midpoint and the distance is ``2 sin(A / 4)``.
    """
    theta = np.sort(eigenphases(circuit))
    gaps = np.diff(np.concatenate([theta, [theta[0] + 2 * np.pi]]))
    i = int(np.argmax(gaps))
    arc = 2 * np.pi - gaps[i]
    start = theta[(i + 1) % len(theta)]
    best_phase = float(np.angle(np.exp(1j * (start + arc / 2))))
    dist = float(2 * np.sin(max(arc, 0.0) / 4))
    return (dist, best_phase) if return_phase else dist


def phase_difference(circuit: Circuit, z1: int, z2: int) -> float:
    """``arg<z1|C|z1> - arg<z2|C|z2>`` as a principal value in (-pi, pi]."""
    d1, d2 = diagonal_overlap(circuit, z1), diagonal_overlap(circuit, z2)
    for z, d in ((z1, d1), (z2, d2)):
        if abs(d) < 1e-6:
            raise VanishingOverlap(f"|<{z}|C|{z}>| = {abs(d):.3g} is too small for a phase")
    diff = float(np.angle(d1 * np.conj(d2)))
    return math.pi if diff <= -math.pi + 1e-15 else diff


def d_circuit(n: int) -> Circuit:
    """``D = diag(-1, 1, ..., 1)`` on ``n`` qubits.

    Built as ``X S S X`` on qubit 0 with open controls on every other qubit:
    ``X Z X = -Z`` where the controls fire, the identity elsewhere.
    """
    opens = tuple((q, 0) for q in range(1, n))
    return Circuit(n, (Gate("X", (0,)), Gate("S", (0,), opens), Gate("S", (0,), opens), Gate("X", (0,))))


def hdh_circuit(n: int) -> Circuit:
    had = tuple(Gate("H", (q,)) for q in range(n))
    return Circuit(n, had + d_circuit(n).gates + had)


# -- gadgets on verifiers --------------------------------------------------------


def build_tilde(verifier: VerifierSpec) -> VerifierSpec:
    """Copy every input bit onto a fresh ancilla, then run the verifier.

    The copies sit after the original ancillas, so original qubit indices and
    the output qubit are unchanged.
    """
    n, w = verifier.n_input, verifier.num_qubits
    total = w + n
    copies = tuple(Gate("CX", (i, w + i)) for i in range(n))
    body = embed(verifier.circuit, list(range(w)), total).gates
    return VerifierSpec(
        n_input=n,
        m_ancilla=verifier.m_ancilla + n,
        output_qubit=verifier.output_qubit,
        circuit=Circuit(total, copies + body),
        epsilon=verifier.epsilon,
    )


def majority_probability(p: float, r: int) -> float:
    """Probability that more than half of ``r`` independent trials succeed."""
    return sum(math.comb(r, j) * p**j * (1 - p) ** (r - j) for j in range(r // 2 + 1, r + 1))


def majority_gates(inputs: list[int], out: int) -> tuple[Gate, ...]:
    """Reversible majority of ``inputs`` XORed into ``out``.

    Three inputs use ``ab ^ bc ^ ac`` (three Toffolis). Otherwise one
    multi-controlled X per accepting bit pattern; the patterns are disjoint
    so their XOR is their OR.
    """
    r = len(inputs)
    if r == 3:
        a, b, c = inputs
        return (Gate("CCX", (a, b, out)), Gate("CCX", (b, c, out)), Gate("CCX", (a, c, out)))
    gates = []
    for bits in itertools.product((0, 1), repeat=r):
        if sum(bits) > r // 2:
            gates.append(Gate("X", (out,), tuple(zip(inputs, bits))))
    return tuple(gates)


def amplify(verifier: VerifierSpec, r: int) -> VerifierSpec:
    """``r`` parallel copies of the verifier with a majority vote.

    Copy ``k`` occupies qubits ``k*w .. (k+1)*w - 1`` (``w`` = verifier width);
    copy 0 reuses the original registers and the input is fanned out to the
    others with CX gates. The vote lands on the fresh last qubit.
    """
    if r < 1 or r % 2 == 0:
        raise EvenRepetition(f"repetition count must be a positive odd integer, got {r}")
    n, w = verifier.n_input, verifier.num_qubits
    total = r * w + 1
    gates: list[Gate] = []
    for k in range(1, r):
        gates.extend(Gate("CX", (i, k * w + i)) for i in range(n))
    for k in range(r):
        gates.extend(embed(verifier.circuit, [k * w + q for q in range(w)], total).gates)
    gates.extend(majority_gates([k * w + verifier.output_qubit for k in range(r)], total - 1))
    eps = min(verifier.epsilon, majority_probability(verifier.epsilon, r))
    return VerifierSpec(n, total - n, total - 1, Circuit(total, tuple(gates)), eps)


# -- preparation procedures ---------------------------------------------------


def verify_preparation(prep: Circuit, target: Circuit) -> float:
    """Run ``prep`` from ``|0...0>``, undo ``target``, return P(all zeros)."""
    if prep.num_qubits != target.num_qubits:
        raise DimensionMismatch(
            f"prep has {prep.num_qubits} qubits, target has {target.num_qubits}"
        )
    out = run(inverse(target), run(prep))
    return float(abs(out.amplitudes[0]) ** 2)


def elementary_gates(num_qubits: int) -> list[Gate]:
    """The finite enumeration alphabet: single-qubit Clifford+T and CX."""
    gates = [Gate(k, (q,)) for q in range(num_qubits) for k in ("H", "X", "T", "TDG", "S", "SDG")]
    gates += [Gate("CX", (a, b)) for a in range(num_qubits) for b in range(num_qubits) if a != b]
    return gates


def _state_key(amps: np.ndarray) -> bytes:
    lead = np.flatnonzero(np.abs(amps) > 1e-9)[0]
    canon = amps * (abs(amps[lead]) / amps[lead])
    return (np.round(canon, 9) + 0.0).tobytes()


def enumerate_circuits(num_qubits: int, k: int) -> Iterator[tuple[Circuit, np.ndarray]]:
    """Breadth-first enumeration of circuits of at most ``k`` gates.

    Yields ``(circuit, circuit|0...0>)`` once per distinct output state up to
    global phase, shortest circuit first and in a fixed gate order, so the
    first circuit meeting any phase-invariant predicate is a shortest one.
    """
    if num_qubits > 2 or k > 6:
        raise TooLarge(f"exhaustive search is limited to 2 qubits and 6 gates (got {num_qubits}, {k})")
    alphabet = elementary_gates(num_qubits)
    start = basis_state(num_qubits, 0).amplitudes
    seen = {_state_key(start)}
    frontier = deque([((), start)])
    yield Circuit(num_qubits, ()), start
    for _ in range(k):
        nxt = deque()
        for gates, amps in frontier:
            for g in alphabet:
                new = evolve(Circuit(num_qubits, (g,)), amps)
                key = _state_key(new)
                if key in seen:
                    continue
                seen.add(key)
                seq = gates + (g,)
                nxt.append((seq, new))
                yield Circuit(num_qubits, seq), new
        frontier = nxt


def search_circuits(
    num_qubits: int, k: int, accept: Callable[[np.ndarray], bool]
) -> Circuit | None:
    for circ, amps in enumerate_circuits(num_qubits, k):
        if accept(amps):
            return circ
    return None


def min_gates_prepare(target_state, k: int, tolerance: float = 1e-9) -> Circuit | None:
    """Shortest circuit ``V`` with ``|<target|V|0...0>|^2 >= 1 - tolerance``, or None.

    ``target_state`` is a StateVector or a normalized amplitude array.
    """
    if not isinstance(target_state, StateVector):
        target_state = StateVector.from_amplitudes(np.asarray(target_state, dtype=complex))
    target = np.asarray(target_state.amplitudes)
    return search_circuits(
        target_state.num_qubits,
        k,
        lambda amps: abs(np.vdot(target, amps)) ** 2 >= 1 - tolerance,
    )
