"""Clock Hamiltonians of verifier circuits and their history states.

For a verifier with gates ``U_1 .. U_L`` on ``w`` work qubits, the compiled
Hamiltonian acts on ``w + L`` qubits. Clock qubit ``c_j`` (``j = 1..L``) is
qubit ``w + j - 1`` and is set iff the time is at least ``j``; time ``j`` is
therefore the clock basis state ``2**j - 1``.

    H_in    = sum_a |1><1|_a (x) |0><0|_{c_1}            ancillas dirty at time 0
    H_out   = |0><0|_out (x) |1><1|_{c_L}                rejection at time L
    H_prop  = sum_j 1/2 (P_{j-1} + P_j - |j><j-1| U_j - |j-1><j| U_j^dag)
    H_clock = sum_j |0><0|_{c_j} (x) |1><1|_{c_{j+1}}    non-unary clock strings

``P_t`` projects onto time ``t`` using the clock qubits ``c_{j-1}, c_j,
c_{j+1}``; at ``j = 1`` and ``j = L`` only the clock qubits that exist are
used.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np
import scipy.sparse

from .circuit import Circuit, Gate, VerifierSpec, embed
from .errors import (
    DimensionMismatch,
    EmptyCircuit,
    IndexOutOfRange,
    NoGap,
    NonHermitianDetected,
    NotHermitian,
    TooLarge,
)
from .idcheck import Decision, enumerate_circuits, search_circuits
from .simulator import StateVector, dense_cap, evolve, unitary_matrix
from .spectral import dense_spectrum, lanczos_extreme

_P0 = np.array([[1, 0], [0, 0]], dtype=complex)
_P1 = np.array([[0, 0], [0, 1]], dtype=complex)


@dataclass(frozen=True)
class LocalTerm:
    """Hermitian ``matrix`` on ``qubits``; ``qubits[0]`` is its least significant bit."""

    qubits: tuple[int, ...]
    matrix: np.ndarray
    label: str = ""

    def __post_init__(self):
        qs = tuple(int(q) for q in self.qubits)
        object.__setattr__(self, "qubits", qs)
        m = np.array(self.matrix, dtype=complex)
        if len(set(qs)) != len(qs):
            raise ValueError(f"repeated qubit in term {qs}")
        if m.shape != (2 ** len(qs),) * 2:
            raise DimensionMismatch(f"term on {len(qs)} qubits needs a {2**len(qs)}-square matrix")
        if np.max(np.abs(m - m.conj().T), initial=0.0) > 1e-12:
            raise NotHermitian(f"term {self.label or qs} is not Hermitian")
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    @property
    def locality(self) -> int:
        return len(self.qubits)


@dataclass(frozen=True)
class ClockLayout:
    w: int
    L: int

    @property
    def num_qubits(self) -> int:
        return self.w + self.L

    def clock_qubit(self, j: int) -> int:
        """Qubit index of ``c_j`` for ``j = 1..L``."""
        if not 1 <= j <= self.L:
            raise IndexOutOfRange(f"clock index {j} outside 1..{self.L}")
        return self.w + j - 1

    def time_index(self, j: int) -> int:
        """Clock basis index of time ``j``: the unary string ``2**j - 1``."""
        return 2**j - 1


@dataclass(frozen=True)
class LocalHamiltonian:
    num_qubits: int
    terms: tuple[LocalTerm, ...]
    layout: ClockLayout | None = None

    def __post_init__(self):
        object.__setattr__(self, "terms", tuple(self.terms))
        for t in self.terms:
            if max(t.qubits, default=-1) >= self.num_qubits:
                raise IndexOutOfRange(f"term on {t.qubits} exceeds {self.num_qubits} qubits")

    @property
    def dimension(self) -> int:
        return 2**self.num_qubits

    @property
    def locality(self) -> int:
        return max((t.locality for t in self.terms), default=0)

    def select(self, prefix: str) -> LocalHamiltonian:
        """The sub-Hamiltonian of terms whose label starts with ``prefix``."""
        return LocalHamiltonian(
            self.num_qubits, tuple(t for t in self.terms if t.label.startswith(prefix)), self.layout
        )

    def to_dict(self) -> dict:
        return {
            "num_qubits": self.num_qubits,
            "terms": [
                {
                    "qubits": list(t.qubits),
                    "matrix": [[[float(z.real), float(z.imag)] for z in row] for row in t.matrix],
                    **({"label": t.label} if t.label else {}),
                }
                for t in self.terms
            ],
            "clock": None if self.layout is None else {"w": self.layout.w, "L": self.layout.L},
        }

    def to_json(self) -> str:
        # repr-based float output round-trips binary64 exactly
        return json.dumps(self.to_dict())

    @classmethod
    def from_dict(cls, d: dict) -> LocalHamiltonian:
        terms = []
        for t in d["terms"]:
            m = np.array([[complex(re, im) for re, im in row] for row in t["matrix"]], dtype=complex)
            terms.append(LocalTerm(tuple(t["qubits"]), m, t.get("label", "")))
        clock = d.get("clock")
        layout = None if clock is None else ClockLayout(int(clock["w"]), int(clock["L"]))
        return cls(int(d["num_qubits"]), tuple(terms), layout)

    @classmethod
    def from_json(cls, text: str) -> LocalHamiltonian:
        return cls.from_dict(json.loads(text))


# -- compilation -----------------------------------------------------------------


def _kron_le(*factors: np.ndarray) -> np.ndarray:
    """Tensor product with the first factor on the least significant bits."""
    out = np.ones((1, 1), dtype=complex)
    for f in factors:
        out = np.kron(f, out)
    return out


def _gate_matrix(gate: Gate) -> tuple[tuple[int, ...], np.ndarray]:
    """The gate's qubits and its unitary on them (first qubit least significant)."""
    qs = gate.qubits
    local = gate.remap({q: i for i, q in enumerate(qs)})
    return qs, unitary_matrix(Circuit(len(qs), (local,)))


def _time_projectors(j: int, L: int) -> tuple[list[int], np.ndarray, np.ndarray, np.ndarray]:
    """Clock offsets used by transition ``j``, with P_{j-1}, P_j and |j><j-1|.

    Offsets are clock indices (1-based) in least-significant-first order.
    """
    offsets = [i for i in (j - 1, j, j + 1) if 1 <= i <= L]
    # clock bit values at times j-1 and j on those offsets
    before = [1 if i <= j - 1 else 0 for i in offsets]
    after = [1 if i <= j else 0 for i in offsets]
    dim = 2 ** len(offsets)

    def idx(bits):
        return sum(b << k for k, b in enumerate(bits))

    a, b = idx(before), idx(after)
    p_before = np.zeros((dim, dim), dtype=complex)
    p_after = np.zeros((dim, dim), dtype=complex)
    step = np.zeros((dim, dim), dtype=complex)
    p_before[a, a] = 1
    p_after[b, b] = 1
    step[b, a] = 1
    return offsets, p_before, p_after, step


def compile_hamiltonian(verifier: VerifierSpec) -> LocalHamiltonian:
    """Clock Hamiltonian of ``verifier``; term order is in, out, prop, clock."""
    L = len(verifier.circuit)
    if L == 0:
        raise EmptyCircuit("cannot compile a circuit without gates")
    w = verifier.num_qubits
    layout = ClockLayout(w, L)
    c = layout.clock_qubit
    terms: list[LocalTerm] = []

    for a in verifier.ancillas:
        terms.append(LocalTerm((a, c(1)), _kron_le(_P1, _P0), f"in:{a}"))
    terms.append(LocalTerm((verifier.output_qubit, c(L)), _kron_le(_P0, _P1), "out"))

    for j, gate in enumerate(verifier.circuit.gates, start=1):
        gq, u = _gate_matrix(gate)
        offsets, pb, pa, step = _time_projectors(j, L)
        ident = np.eye(u.shape[0], dtype=complex)
        # gate qubits are the low local bits, clock qubits the high ones
        m = 0.5 * (
            np.kron(pb, ident)
            + np.kron(pa, ident)
            - np.kron(step, u)
            - np.kron(step.conj().T, u.conj().T)
        )
        terms.append(LocalTerm(gq + tuple(c(i) for i in offsets), m, f"prop:{j}"))

    for j in range(1, L):
        terms.append(LocalTerm((c(j), c(j + 1)), _kron_le(_P0, _P1), f"clock:{j}"))
    return LocalHamiltonian(w + L, tuple(terms), layout)


compile = compile_hamiltonian


# -- matrix-free action ----------------------------------------------------------


def _apply_term(t: np.ndarray, term: LocalTerm, n: int) -> np.ndarray:
    k = term.locality
    m = term.matrix.reshape((2,) * (2 * k))
    # matrix axes run most significant local bit first
    state_axes = [n - 1 - q for q in reversed(term.qubits)]
    out = np.tensordot(m, t, axes=(list(range(k, 2 * k)), state_axes))
    return np.moveaxis(out, list(range(k)), state_axes)


def matvec(h: LocalHamiltonian, state) -> np.ndarray:
    """``H @ state`` without building ``H``; accepts ``(2**n,)`` or ``(2**n, k)`` arrays."""
    v = np.asarray(state, dtype=complex)
    if v.shape[0] != h.dimension:
        raise DimensionMismatch(f"vector of length {v.shape[0]} for dimension {h.dimension}")
    n = h.num_qubits
    batch = v.shape[1:]
    t = v.reshape((2,) * n + batch)
    acc = np.zeros_like(t)
    for term in h.terms:
        acc += _apply_term(t, term, n)
    return acc.reshape(v.shape)


def energy(h: LocalHamiltonian, state) -> float:
    v = np.asarray(state, dtype=complex).reshape(-1)
    e = np.vdot(v, matvec(h, v))
    if abs(e.imag) > 1e-10:
        raise NonHermitianDetected(f"<psi|H|psi> has imaginary part {e.imag:.3g}")
    return float(e.real)


def to_sparse(h: LocalHamiltonian) -> scipy.sparse.csr_matrix:
    n = h.num_qubits
    dim = 2**n
    rows, cols, vals = [], [], []
    for term in h.terms:
        k = term.locality
        mask = sum(1 << q for q in term.qubits)
        rest = np.arange(dim)
        rest = rest[(rest & mask) == 0]
        spread = np.array(
            [sum(((a >> i) & 1) << q for i, q in enumerate(term.qubits)) for a in range(2**k)]
        )
        nz_r, nz_c = np.nonzero(term.matrix)
        for a, b in zip(nz_r, nz_c):
            rows.append(rest + spread[a])
            cols.append(rest + spread[b])
            vals.append(np.full(rest.size, term.matrix[a, b]))
    if not rows:
        return scipy.sparse.csr_matrix((dim, dim), dtype=complex)
    return scipy.sparse.coo_matrix(
        (np.concatenate(vals), (np.concatenate(rows), np.concatenate(cols))), shape=(dim, dim)
    ).tocsr()


def to_dense(h: LocalHamiltonian) -> np.ndarray:
    if h.num_qubits > dense_cap(14):
        raise TooLarge(f"{h.num_qubits}-qubit Hamiltonian exceeds the dense cap")
    return to_sparse(h).toarray()


def ground_energy(h: LocalHamiltonian, method: str = "auto", seed: int = 0, tol: float = 1e-8) -> float:
    """Smallest eigenvalue; ``auto`` is dense up to 10 qubits, Lanczos above."""
    if method == "auto":
        method = "dense" if h.num_qubits <= 10 else "lanczos"
    if method == "dense":
        return float(dense_spectrum(to_dense(h), check=False)[0])
    res = lanczos_extreme(lambda v: matvec(h, v), h.dimension, "min", tol=tol, seed=seed)
    return res.value


# -- history states ---------------------------------------------------------------


def _work_state(verifier: VerifierSpec, input_state) -> np.ndarray:
    """Full work-register amplitudes from an input-register or work-register state."""
    if isinstance(input_state, (int, np.integer)):
        v = np.zeros(2**verifier.num_qubits, dtype=complex)
        v[int(input_state)] = 1
        return v
    v = np.asarray(input_state, dtype=complex).reshape(-1)
    if v.size == 2**verifier.num_qubits:
        return v.copy()
    if v.size == 2**verifier.n_input:
        # ancillas are the high bits and start at zero
        full = np.zeros(2**verifier.num_qubits, dtype=complex)
        full[: v.size] = v
        return full
    raise DimensionMismatch(
        f"input state of length {v.size} fits neither {verifier.n_input} input "
        f"nor {verifier.num_qubits} work qubits"
    )


def history_state(verifier: VerifierSpec, input_state) -> StateVector:
    """``(L+1)^(-1/2) sum_j U_j..U_1 |psi>|0..0> (x) |2**j - 1>``.

    ``input_state`` may be a basis index of the input register, an
    input-register vector (ancillas are zeroed) or a full work-register vector.
    """
    gates = verifier.circuit.gates
    L, w = len(gates), verifier.num_qubits
    v = _work_state(verifier, input_state)
    out = np.zeros(2 ** (w + L), dtype=complex)
    wdim = 2**w
    for j in range(L + 1):
        if j:
            v = evolve(Circuit(w, (gates[j - 1],)), v)
        off = (2**j - 1) * wdim
        out[off : off + wdim] = v
    return StateVector(w + L, out / math.sqrt(L + 1))


def clock_staircase(layout: ClockLayout) -> tuple[Gate, ...]:
    """Rotations putting the clock in the uniform superposition of unary strings.

    ``c_1`` gets RY(2 t_1) and each later ``c_j`` a RY(2 t_j) controlled on
    ``c_{j-1}``, with ``cos t_j = 1 / sqrt(L + 2 - j)``.
    """
    L = layout.L
    gates = []
    for j in range(1, L + 1):
        theta = math.acos(1 / math.sqrt(L + 2 - j))
        ctrl = () if j == 1 else ((layout.clock_qubit(j - 1), 1),)
        gates.append(Gate("RY", (layout.clock_qubit(j),), ctrl, 2 * theta))
    return tuple(gates)


def history_prep_circuit(verifier: VerifierSpec, y: int) -> Circuit:
    """Prepare the history state of witness ``y`` from ``|0...0>``.

    X gates write ``y``, a rotation staircase spreads the clock over all
    times, then each ``U_j`` runs controlled on ``c_j`` (unary clock: time
    ``t`` has exactly ``c_1..c_t`` set, so branch ``t`` sees ``U_t..U_1``).
    Uses at most ``n + 2L`` gates.
    """
    if not 0 <= y < 2**verifier.n_input:
        raise IndexOutOfRange(f"witness {y} out of range for {verifier.n_input} input qubits")
    L, w = len(verifier.circuit), verifier.num_qubits
    layout = ClockLayout(w, L)
    total = w + L
    gates = [Gate("X", (i,)) for i in range(verifier.n_input) if (y >> i) & 1]
    gates.extend(clock_staircase(layout))
    body = embed(verifier.circuit, list(range(w)), total).gates
    gates.extend(g.controlled(layout.clock_qubit(j), 1) for j, g in enumerate(body, start=1))
    return Circuit(total, tuple(gates))


# -- low-complexity low-energy decision ---------------------------------------------


@dataclass(frozen=True)
class LowEnergyInstance:
    hamiltonian: LocalHamiltonian
    a: float
    b: float
    k: int
    min_gap: float = 1e-6

    def __post_init__(self):
        if self.b - self.a < self.min_gap:
            raise NoGap(f"b - a = {self.b - self.a} below minimum gap {self.min_gap}")
        if self.k < 0:
            raise ValueError("gate budget k must be non-negative")


@dataclass(frozen=True)
class LowEnergyResult:
    decision: Decision
    method: str
    certificate: Circuit | None = None
    certificate_energy: float | None = None
    ground_energy: float | None = None
    extra: dict = field(default_factory=dict)


# floating slack when comparing energies against the thresholds
ENERGY_TOL = 1e-12


def decide_low_energy(
    instance: LowEnergyInstance,
    certificate: Circuit | None = None,
    seed: int = 0,
) -> LowEnergyResult:
    """Decide whether a state of energy <= a is reachable with <= k gates.

    A supplied ``certificate`` circuit within budget decides case 1 directly.
    Hamiltonians on at most two qubits with ``k <= 6`` are searched
    exhaustively. Otherwise case 2 is decided from the spectrum
    (``lambda_min >= b``) and anything else is UNKNOWN.
    """
    h, a, b, k = instance.hamiltonian, instance.a, instance.b, instance.k
    if certificate is not None:
        if certificate.num_qubits != h.num_qubits:
            raise DimensionMismatch("certificate acts on the wrong number of qubits")
        if len(certificate) <= k:
            e = energy(h, evolve(certificate, _zero(h.num_qubits)))
            if e <= a + ENERGY_TOL:
                return LowEnergyResult(Decision.CASE1, "certificate", certificate, e)

    if h.num_qubits <= 2 and k <= 6:
        found = search_circuits(h.num_qubits, k, lambda v: energy(h, v) <= a + ENERGY_TOL)
        if found is not None:
            e = energy(h, evolve(found, _zero(h.num_qubits)))
            return LowEnergyResult(Decision.CASE1, "exhaustive", found, e)
        lowest = min(energy(h, v) for _, v in enumerate_circuits(h.num_qubits, k))
        lam = ground_energy(h, "dense")
        decision = Decision.CASE2 if lowest >= b else Decision.PROMISE_VIOLATED
        return LowEnergyResult(decision, "exhaustive", ground_energy=lam, extra={"min_enumerated": lowest})

    if h.num_qubits > dense_cap(14) + 10:
        raise TooLarge(f"{h.num_qubits}-qubit Hamiltonian is beyond desk scale")
    lam = ground_energy(h, seed=seed)
    if lam >= b:
        return LowEnergyResult(Decision.CASE2, "spectral", ground_energy=lam)
    return LowEnergyResult(Decision.UNKNOWN, "spectral", ground_energy=lam)


def _zero(n: int) -> np.ndarray:
    v = np.zeros(2**n, dtype=complex)
    v[0] = 1
    return v
