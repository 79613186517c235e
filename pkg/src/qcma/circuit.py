"""Circuit intermediate representation, gate algebra and the text/JSON formats.

Circuits are immutable. Qubit 0 is the least significant bit of a basis index
everywhere in the package.

Text format::

    qubits 3
    h 0
    cx 0 1
    ctrl 2=0 : ry 0 1.5707963267948966

A ``ctrl q=p [...] :`` prefix adds extra controls of polarity ``p`` (``0`` is an
open control, firing on ``|0>``).
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

import numpy as np

from .errors import (
    ArityMismatch,
    CircuitError,
    CircuitSyntaxError,
    DimensionMismatch,
    DuplicateQubit,
    IndexOutOfRange,
    NonInjectiveMapping,
    UnknownGate,
)

ARITY = {"H": 1, "X": 1, "T": 1, "TDG": 1, "S": 1, "SDG": 1, "RY": 1, "CX": 2, "CCX": 3}
_INVERSE_KIND = {"T": "TDG", "TDG": "T", "S": "SDG", "SDG": "S"}
SELF_INVERSE = frozenset({"H", "X", "CX", "CCX"})


@dataclass(frozen=True)
class Gate:
    """One elementary gate.

    ``targets`` follows the usual operand order: for ``CX`` it is
    ``(control, target)``, for ``CCX`` ``(control, control, target)``.
    ``controls`` holds additional ``(qubit, polarity)`` pairs.
    """

    kind: str
    targets: tuple[int, ...]
    controls: tuple[tuple[int, int], ...] = ()
    angle: float | None = None

    def __post_init__(self):
        kind = self.kind.upper()
        object.__setattr__(self, "kind", kind)
        object.__setattr__(self, "targets", tuple(int(q) for q in self.targets))
        object.__setattr__(
            self, "controls", tuple((int(q), int(p)) for q, p in self.controls)
        )
        if kind not in ARITY:
            raise UnknownGate(f"unknown gate kind {self.kind!r}")
        if len(self.targets) != ARITY[kind]:
            raise ArityMismatch(
                f"{kind} takes {ARITY[kind]} qubit(s), got {len(self.targets)}"
            )
        if kind == "RY":
            if self.angle is None or not math.isfinite(self.angle):
                raise CircuitError("RY needs a finite angle")
            object.__setattr__(self, "angle", float(self.angle))
        elif self.angle is not None:
            raise ArityMismatch(f"{kind} takes no angle")
        for q, p in self.controls:
            if p not in (0, 1):
                raise CircuitError(f"control polarity must be 0 or 1, got {p}")
        qubits = self.qubits
        if any(q < 0 for q in qubits):
            raise IndexOutOfRange(f"negative qubit index in {self}")
        if len(set(qubits)) != len(qubits):
            raise DuplicateQubit(f"repeated qubit in {kind} on {qubits}")

    @property
    def qubits(self) -> tuple[int, ...]:
        return self.targets + tuple(q for q, _ in self.controls)

    @property
    def target(self) -> int:
        """The qubit the 2x2 core acts on."""
        return self.targets[-1]

    def all_controls(self) -> tuple[tuple[int, int], ...]:
        """Operand controls of CX/CCX (closed) followed by the extra controls."""
        return tuple((q, 1) for q in self.targets[:-1]) + self.controls

    def inverse(self) -> Gate:
        if self.kind == "RY":
            return Gate("RY", self.targets, self.controls, -self.angle)
        return Gate(_INVERSE_KIND.get(self.kind, self.kind), self.targets, self.controls)

    def controlled(self, qubit: int, polarity: int = 1) -> Gate:
        return Gate(self.kind, self.targets, self.controls + ((qubit, polarity),), self.angle)

    def remap(self, mapping: Mapping[int, int]) -> Gate:
        return Gate(
            self.kind,
            tuple(mapping[q] for q in self.targets),
            tuple((mapping[q], p) for q, p in self.controls),
            self.angle,
        )


@dataclass(frozen=True)
class Circuit:
    num_qubits: int
    gates: tuple[Gate, ...] = field(default=())

    def __post_init__(self):
        object.__setattr__(self, "gates", tuple(self.gates))
        validate(self)

    def __len__(self):
        return len(self.gates)

    def __iter__(self):
        return iter(self.gates)

    def then(self, other: Circuit) -> Circuit:
        """``self`` followed by ``other``."""
        if other.num_qubits != self.num_qubits:
            raise DimensionMismatch(
                f"cannot compose {self.num_qubits}- and {other.num_qubits}-qubit circuits"
            )
        return Circuit(self.num_qubits, self.gates + other.gates)

    def __str__(self):
        return serialize(self)


def validate(circuit: Circuit) -> None:
    """Raise if any invariant of ``circuit`` or its gates fails."""
    if not isinstance(circuit.num_qubits, (int, np.integer)) or circuit.num_qubits < 1:
        raise CircuitError(f"num_qubits must be a positive integer, got {circuit.num_qubits!r}")
    for i, g in enumerate(circuit.gates):
        if not isinstance(g, Gate):
            raise CircuitError(f"gate {i} is not a Gate: {g!r}")
        # re-run gate checks in case the object was built around __post_init__
        Gate(g.kind, g.targets, g.controls, g.angle)
        for q in g.qubits:
            if q >= circuit.num_qubits:
                raise IndexOutOfRange(
                    f"gate {i} ({g.kind}) uses qubit {q} on a {circuit.num_qubits}-qubit circuit"
                )


def inverse(circuit: Circuit) -> Circuit:
    return Circuit(circuit.num_qubits, tuple(g.inverse() for g in reversed(circuit.gates)))


def embed(circuit: Circuit, mapping: Mapping[int, int] | Sequence[int], new_num_qubits: int) -> Circuit:
    """Relabel qubit ``q`` as ``mapping[q]`` inside a ``new_num_qubits`` register."""
    if not isinstance(mapping, Mapping):
        mapping = dict(enumerate(mapping))
    missing = [q for q in range(circuit.num_qubits) if q not in mapping]
    if missing:
        raise NonInjectiveMapping(f"mapping does not cover qubits {missing}")
    image = [mapping[q] for q in range(circuit.num_qubits)]
    if len(set(image)) != len(image):
        raise NonInjectiveMapping(f"mapping {dict(mapping)} is not injective")
    bad = [q for q in image if not 0 <= q < new_num_qubits]
    if bad:
        raise IndexOutOfRange(f"mapping targets {bad} outside [0, {new_num_qubits})")
    return Circuit(new_num_qubits, tuple(g.remap(mapping) for g in circuit.gates))


def random_circuit(
    num_qubits: int,
    num_gates: int,
    rng: np.random.Generator,
    qubits: Sequence[int] | None = None,
    kinds: Iterable[str] = ("H", "X", "T", "TDG", "S", "SDG", "RY", "CX", "CCX"),
) -> Circuit:
    """Uniformly random gates drawn from ``kinds`` acting only on ``qubits``."""
    pool = list(range(num_qubits)) if qubits is None else list(qubits)
    kinds = [k for k in kinds if ARITY[k] <= len(pool)]
    gates = []
    for _ in range(num_gates):
        kind = kinds[rng.integers(len(kinds))]
        qs = tuple(int(q) for q in rng.choice(pool, size=ARITY[kind], replace=False))
        angle = float(rng.uniform(-math.pi, math.pi)) if kind == "RY" else None
        gates.append(Gate(kind, qs, (), angle))
    return Circuit(num_qubits, tuple(gates))


# -- text format ---------------------------------------------------------------


def _fmt_angle(x: float) -> str:
    return format(x, ".17g")


def _gate_line(g: Gate) -> str:
    parts = []
    if g.controls:
        parts.append("ctrl " + " ".join(f"{q}={p}" for q, p in g.controls) + " :")
    parts.append(g.kind.lower())
    parts.extend(str(q) for q in g.targets)
    if g.kind == "RY":
        parts.append(_fmt_angle(g.angle))
    return " ".join(parts)


def serialize(obj: Circuit | VerifierSpec) -> str:
    if isinstance(obj, VerifierSpec):
        return obj.to_json()
    lines = [f"qubits {obj.num_qubits}"]
    lines.extend(_gate_line(g) for g in obj.gates)
    return "\n".join(lines) + "\n"


def _int(tok: str, lineno: int, what: str) -> int:
    try:
        return int(tok)
    except ValueError:
        raise CircuitSyntaxError(f"expected integer {what}, got {tok!r}", lineno) from None


def _parse_gate(line: str, lineno: int) -> Gate:
    controls = []
    if line.startswith("ctrl"):
        head, sep, line = line.partition(":")
        if not sep:
            raise CircuitSyntaxError("control prefix must end with ':'", lineno)
        for tok in head.split()[1:]:
            q, eq, p = tok.partition("=")
            if not eq or p not in ("0", "1"):
                raise CircuitSyntaxError(f"bad control {tok!r}, expected <q>=<0|1>", lineno)
            controls.append((_int(q, lineno, "control qubit"), int(p)))
        if not controls:
            raise CircuitSyntaxError("empty control prefix", lineno)
    toks = line.split()
    if not toks:
        raise CircuitSyntaxError("missing gate mnemonic", lineno)
    kind = toks[0].upper()
    if kind not in ARITY:
        raise UnknownGate(f"unknown gate {toks[0]!r}", lineno)
    arity = ARITY[kind]
    want = arity + (kind == "RY")
    if len(toks) - 1 != want:
        raise CircuitSyntaxError(
            f"{toks[0]} expects {want} operand(s), got {len(toks) - 1}", lineno
        )
    targets = tuple(_int(t, lineno, "qubit") for t in toks[1 : 1 + arity])
    angle = None
    if kind == "RY":
        try:
            angle = float(toks[-1])
        except ValueError:
            raise CircuitSyntaxError(f"bad angle {toks[-1]!r}", lineno) from None
    try:
        return Gate(kind, targets, tuple(controls), angle)
    except (ArityMismatch, DuplicateQubit, IndexOutOfRange) as exc:
        raise CircuitSyntaxError(str(exc), lineno) from exc
    except ValueError as exc:
        raise CircuitSyntaxError(str(exc), lineno) from exc


def parse_circuit(text: str) -> Circuit:
    num_qubits = None
    gates = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if num_qubits is None:
            toks = line.split()
            if len(toks) != 2 or toks[0] != "qubits":
                raise CircuitSyntaxError("first line must be 'qubits <N>'", lineno)
            num_qubits = _int(toks[1], lineno, "qubit count")
            if num_qubits < 1:
                raise CircuitSyntaxError("qubit count must be positive", lineno)
            continue
        g = _parse_gate(line, lineno)
        if max(g.qubits) >= num_qubits:
            raise CircuitSyntaxError(
                f"qubit {max(g.qubits)} out of range for {num_qubits} qubits", lineno
            )
        gates.append(g)
    if num_qubits is None:
        raise CircuitSyntaxError("empty circuit text", 1)
    return Circuit(num_qubits, tuple(gates))


def parse(text: str) -> Circuit | VerifierSpec:
    """Parse circuit text, or a verifier JSON document if ``text`` is JSON."""
    if text.lstrip().startswith("{"):
        return VerifierSpec.from_json(text)
    return parse_circuit(text)


# -- verifiers -----------------------------------------------------------------


@dataclass(frozen=True)
class VerifierSpec:
    """A verifier circuit with its register split.

    Inputs are qubits ``0..n_input-1``; the ``m_ancilla`` ancillas follow and
    start in ``|0>``. Acceptance means measuring ``output_qubit`` as 1.
    """

    n_input: int
    m_ancilla: int
    output_qubit: int
    circuit: Circuit
    epsilon: float = 0.0

    def __post_init__(self):
        if self.n_input < 0 or self.m_ancilla < 0:
            raise CircuitError("register sizes must be non-negative")
        if self.circuit.num_qubits != self.n_input + self.m_ancilla:
            raise CircuitError(
                f"circuit has {self.circuit.num_qubits} qubits, expected "
                f"n_input + m_ancilla = {self.n_input + self.m_ancilla}"
            )
        if not 0 <= self.output_qubit < self.circuit.num_qubits:
            raise IndexOutOfRange(f"output qubit {self.output_qubit} out of range")
        if not (math.isfinite(self.epsilon) and 0.0 <= self.epsilon <= 1.0 / 3.0):
            raise CircuitError(f"epsilon must lie in [0, 1/3], got {self.epsilon}")

    @property
    def num_qubits(self) -> int:
        return self.circuit.num_qubits

    @property
    def ancillas(self) -> range:
        return range(self.n_input, self.n_input + self.m_ancilla)

    def to_dict(self) -> dict:
        return {
            "n_input": self.n_input,
            "m_ancilla": self.m_ancilla,
            "output_qubit": self.output_qubit,
            "epsilon": self.epsilon,
            "circuit": serialize(self.circuit),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)

    @classmethod
    def from_dict(cls, d: Mapping) -> VerifierSpec:
        keys = {"n_input", "m_ancilla", "output_qubit", "epsilon", "circuit"}
        missing = keys - set(d)
        if missing:
            raise CircuitSyntaxError(f"verifier JSON missing keys {sorted(missing)}")
        return cls(
            n_input=int(d["n_input"]),
            m_ancilla=int(d["m_ancilla"]),
            output_qubit=int(d["output_qubit"]),
            circuit=parse_circuit(d["circuit"]),
            epsilon=float(d["epsilon"]),
        )

    @classmethod
    def from_json(cls, text: str) -> VerifierSpec:
        try:
            d = json.loads(text)
        except json.JSONDecodeError as exc:
            raise CircuitSyntaxError(f"invalid JSON: {exc.msg}", exc.lineno) from exc
        if not isinstance(d, dict):
            raise CircuitSyntaxError("verifier JSON must be an object")
        return cls.from_dict(d)
