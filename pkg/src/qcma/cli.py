"""``qcma`` command line: JSON reports on stdout, diagnostics on stderr.

Exit codes: 0 success, 1 promise violated / undecided / failed check,
2 input errors. Bitstrings are written qubit-0-rightmost.
"""
from __future__ import annotations

import argparse
import hashlib
import json
import logging
import math
import sys
import time
from pathlib import Path

import jsonschema
import numpy as np

from . import __version__
from .circuit import Circuit, VerifierSpec, parse_circuit, serialize
from .clock import (
    LocalHamiltonian,
    LowEnergyInstance,
    compile_hamiltonian,
    decide_low_energy,
    energy,
    history_prep_circuit,
    history_state,
    matvec,
    to_dense,
)
from .errors import QcmaError
from .idcheck import (
    Decision,
    IdCheckInstance,
    ReductionParams,
    amplify,
    build_tilde,
    build_Z,
    decide_basis_identity,
    min_basis_overlap,
    norm_distance_to_identity,
    phase_difference,
    theorem_bounds,
    verify_preparation,
    z_star,
)
from .simulator import acceptance_probabilities, acceptance_probability, basis_state, run
from .spectral import dense_spectrum, lanczos_extreme

log = logging.getLogger("qcma")

_NUM = {"type": "number"}
_BITS = {"type": "string", "pattern": "^[01]*$"}
_CASE = {"enum": [1, 2, "promise_violated", "unknown"]}

VERIFIER_SCHEMA = {
    "type": "object",
    "required": ["n_input", "m_ancilla", "output_qubit", "epsilon", "circuit"],
    "properties": {
        "n_input": {"type": "integer", "minimum": 0},
        "m_ancilla": {"type": "integer", "minimum": 0},
        "output_qubit": {"type": "integer", "minimum": 0},
        "epsilon": {"type": "number", "minimum": 0, "maximum": 1 / 3},
        "circuit": {"type": "string"},
    },
}

HAMILTONIAN_SCHEMA = {
    "type": "object",
    "required": ["num_qubits", "terms"],
    "properties": {
        "num_qubits": {"type": "integer", "minimum": 1},
        "terms": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["qubits", "matrix"],
                "properties": {
                    "qubits": {"type": "array", "items": {"type": "integer", "minimum": 0}},
                    "matrix": {
                        "type": "array",
                        "items": {
                            "type": "array",
                            "items": {"type": "array", "items": _NUM, "minItems": 2, "maxItems": 2},
                        },
                    },
                    "label": {"type": "string"},
                },
            },
        },
        "clock": {
            "oneOf": [
                {"type": "null"},
                {
                    "type": "object",
                    "required": ["w", "L"],
                    "properties": {"w": {"type": "integer"}, "L": {"type": "integer"}},
                },
            ]
        },
    },
}


def _obj(props: dict, required=None) -> dict:
    return {"type": "object", "required": list(required or props), "properties": props}


PAYLOAD_SCHEMAS = {
    "validate": _obj({"valid": {"const": True}, "num_qubits": {"type": "integer"}, "num_gates": {"type": "integer"}}),
    "simulate": _obj({
        "input": _BITS,
        "amplitudes": {"type": "array", "items": {"type": "array", "items": _NUM}},
        "probabilities": {"type": "array", "items": _NUM},
    }),
    "reduce-idcheck": _obj({
        "phi": _NUM, "epsilon": _NUM, "case1_upper": _NUM, "case2_lower": _NUM,
        "num_qubits": {"type": "integer"}, "layout": {"type": "string"}, "z_circuit": {"type": "string"},
    }),
    "idcheck-decide": _obj({"case": _CASE, "min_overlap_sq": _NUM, "z_min": _BITS, "mu": _NUM, "delta": _NUM}),
    "normdist": _obj({"distance": _NUM, "best_phase": _NUM}),
    "phasediff": _obj({"z1": _BITS, "z2": _BITS, "phase_difference": _NUM}),
    "tilde": _obj({"verifier": VERIFIER_SCHEMA}),
    "amplify": _obj({"r": {"type": "integer"}, "verifier": VERIFIER_SCHEMA}),
    "compile-ham": _obj({
        "num_terms": {"type": "integer"}, "locality": {"type": "integer"}, "hamiltonian": HAMILTONIAN_SCHEMA,
    }),
    "history": _obj(
        {
            "witness": _BITS, "num_qubits": {"type": "integer"}, "L": {"type": "integer"},
            "energy": _NUM, "p_reject": _NUM, "energy_bound": _NUM, "prop_residual": _NUM,
            "prep_circuit": {"type": "string"}, "prep_fidelity": _NUM, "prep_gates": {"type": "integer"},
        },
        required=["witness", "num_qubits", "L", "energy", "p_reject", "energy_bound", "prop_residual"],
    ),
    "eig": _obj(
        {
            "which": {"enum": ["min", "max"]}, "method": {"enum": ["dense", "lanczos"]}, "value": _NUM,
            "residual": _NUM, "iterations": {"type": "integer"}, "converged": {"type": "boolean"},
        },
        required=["which", "method", "value"],
    ),
    "check-thm1": _obj(
        {
            "case": {"enum": [1, 2]}, "phi": _NUM, "epsilon": _NUM, "case1_upper": _NUM, "case2_lower": _NUM,
            "observed": _NUM, "pass": {"type": "boolean"}, "promise_holds": {"type": "boolean"},
            "witness": _BITS, "z": _BITS, "acceptance": _NUM, "max_acceptance": _NUM,
        },
        required=["case", "phi", "epsilon", "observed", "pass", "promise_holds"],
    ),
    "prep-verify": _obj({"fidelity": _NUM}),
    "low-energy-decide": _obj(
        {
            "case": _CASE, "method": {"type": "string"}, "a": _NUM, "b": _NUM, "k": {"type": "integer"},
            "ground_energy": {"type": ["number", "null"]}, "certificate": {"type": ["string", "null"]},
            "certificate_energy": {"type": ["number", "null"]},
        },
        required=["case", "method", "a", "b", "k"],
    ),
}


class InputError(Exception):
    pass


# -- input helpers ---------------------------------------------------------------


def _read(path: str, digests: dict) -> str:
    p = Path(path)
    try:
        data = p.read_bytes()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from exc
    digests[path] = hashlib.sha256(data).hexdigest()
    return data.decode()


def _json_doc(text: str, path: str, schema: dict, key: str) -> dict:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: invalid JSON at line {exc.lineno}: {exc.msg}") from exc
    # accept the report emitted by another subcommand
    if isinstance(doc, dict) and "outputs" in doc and isinstance(doc["outputs"], dict) and key in doc["outputs"]:
        doc = doc["outputs"][key]
    try:
        jsonschema.validate(doc, schema)
    except jsonschema.ValidationError as exc:
        where = "/" + "/".join(str(p) for p in exc.absolute_path)
        raise InputError(f"{path}: schema violation at {where}: {exc.message}") from exc
    return doc


def _verifier(path: str, digests: dict) -> VerifierSpec:
    doc = _json_doc(_read(path, digests), path, VERIFIER_SCHEMA, "verifier")
    return VerifierSpec.from_dict(doc)


def _hamiltonian(path: str, digests: dict) -> LocalHamiltonian:
    doc = _json_doc(_read(path, digests), path, HAMILTONIAN_SCHEMA, "hamiltonian")
    return LocalHamiltonian.from_dict(doc)


def _circuit(path: str, digests: dict) -> Circuit:
    return parse_circuit(_read(path, digests))


def _bits_to_index(bits: str, width: int, what: str) -> int:
    if not bits or any(ch not in "01" for ch in bits):
        raise InputError(f"{what} must be a bitstring, got {bits!r}")
    if len(bits) != width:
        raise InputError(f"{what} needs {width} bits (qubit 0 rightmost), got {len(bits)}")
    return int(bits, 2)


def _index_to_bits(index: int, width: int) -> str:
    return format(index, f"0{width}b") if width else ""


def _case(decision: Decision):
    return decision.value


# -- subcommands -------------------------------------------------------------------


def cmd_validate(args, digests):
    c = _circuit(args.circuit, digests)
    return {"valid": True, "num_qubits": c.num_qubits, "num_gates": len(c)}, 0


def cmd_simulate(args, digests):
    c = _circuit(args.circuit, digests)
    bits = args.input if args.input is not None else "0" * c.num_qubits
    out = run(c, basis_state(c.num_qubits, _bits_to_index(bits, c.num_qubits, "--input")))
    amps = out.amplitudes
    return {
        "input": bits,
        "amplitudes": [[float(z.real), float(z.imag)] for z in amps],
        "probabilities": [float(p) for p in np.abs(amps) ** 2],
    }, 0


def cmd_reduce_idcheck(args, digests):
    v = _verifier(args.verifier, digests)
    params = ReductionParams(args.phi, v.epsilon)
    bounds = theorem_bounds(params)
    z = build_Z(v, args.phi)
    text = serialize(z)
    if args.out:
        Path(args.out).write_text(text)
    return {
        "phi": args.phi,
        "epsilon": v.epsilon,
        **bounds.to_dict(),
        "num_qubits": z.num_qubits,
        "layout": f"qubit 0 rotation target, qubits 1..{v.n_input} input, "
        f"qubits {v.n_input + 1}..{v.num_qubits} ancillas",
        "z_circuit": text,
    }, 0


def cmd_idcheck_decide(args, digests):
    c = _circuit(args.circuit, digests)
    decision, z, value = decide_basis_identity(IdCheckInstance(c, args.mu, args.delta))
    payload = {
        "case": _case(decision),
        "min_overlap_sq": value,
        "z_min": _index_to_bits(z, c.num_qubits),
        "mu": args.mu,
        "delta": args.delta,
    }
    return payload, 0 if decision in (Decision.CASE1, Decision.CASE2) else 1


def cmd_normdist(args, digests):
    dist, phase = norm_distance_to_identity(_circuit(args.circuit, digests), return_phase=True)
    return {"distance": dist, "best_phase": phase}, 0


def cmd_phasediff(args, digests):
    c = _circuit(args.circuit, digests)
    z1 = _bits_to_index(args.z1, c.num_qubits, "--z1")
    z2 = _bits_to_index(args.z2, c.num_qubits, "--z2")
    return {"z1": args.z1, "z2": args.z2, "phase_difference": phase_difference(c, z1, z2)}, 0


def cmd_tilde(args, digests):
    return {"verifier": build_tilde(_verifier(args.verifier, digests)).to_dict()}, 0


def cmd_amplify(args, digests):
    v = amplify(_verifier(args.verifier, digests), args.r)
    return {"r": args.r, "verifier": v.to_dict()}, 0


def cmd_compile_ham(args, digests):
    h = compile_hamiltonian(_verifier(args.verifier, digests))
    if args.out:
        Path(args.out).write_text(h.to_json())
    return {"num_terms": len(h.terms), "locality": h.locality, "hamiltonian": h.to_dict()}, 0


def cmd_history(args, digests):
    v = _verifier(args.verifier, digests)
    y = _bits_to_index(args.witness, v.n_input, "--witness")
    h = compile_hamiltonian(v)
    eta = history_state(v, y)
    L = len(v.circuit)
    p_reject = 1 - acceptance_probability(v, y)
    payload = {
        "witness": args.witness,
        "num_qubits": h.num_qubits,
        "L": L,
        "energy": energy(h, eta),
        "p_reject": p_reject,
        "energy_bound": v.epsilon / (L + 1),
        "prop_residual": float(np.linalg.norm(matvec(h.select("prop"), eta.amplitudes))),
    }
    if args.emit_prep:
        prep = history_prep_circuit(v, y)
        payload["prep_circuit"] = serialize(prep)
        payload["prep_gates"] = len(prep)
        payload["prep_fidelity"] = float(abs(run(prep).inner(eta)) ** 2)
    return payload, 0


def cmd_eig(args, digests):
    h = _hamiltonian(args.hamiltonian, digests)
    if args.lanczos:
        res = lanczos_extreme(
            lambda x: matvec(h, x), h.dimension, args.which, tol=args.tol, seed=args.seed
        )
        payload = {
            "which": args.which,
            "method": "lanczos",
            "value": res.value,
            "residual": res.residual,
            "iterations": res.iterations,
            "converged": res.converged,
        }
        return payload, 0 if res.converged else 1
    w = dense_spectrum(to_dense(h), check=False)
    return {"which": args.which, "method": "dense", "value": float(w[0] if args.which == "min" else w[-1])}, 0


def cmd_check_thm1(args, digests):
    v = _verifier(args.verifier, digests)
    params = ReductionParams(args.phi, v.epsilon)
    bounds = theorem_bounds(params)
    z_circ = build_Z(v, args.phi)
    payload = {"phi": args.phi, "epsilon": v.epsilon}
    if args.witness != "none":
        y = _bits_to_index(args.witness, v.n_input, "--witness")
        zs = z_star(y)
        observed = float(abs(run(z_circ, basis_state(z_circ.num_qubits, zs)).amplitudes[zs]) ** 2)
        acc = acceptance_probability(v, y)
        ok = observed <= bounds.case1_upper + 1e-9
        payload.update(
            case=1,
            case1_upper=bounds.case1_upper,
            observed=observed,
            witness=args.witness,
            z=_index_to_bits(zs, z_circ.num_qubits),
            acceptance=acc,
            promise_holds=bool(acc >= 1 - v.epsilon - 1e-12),
        )
    else:
        z, observed = min_basis_overlap(z_circ)
        max_acc = float(np.max(acceptance_probabilities(v)))
        ok = observed >= bounds.case2_lower - 1e-9
        payload.update(
            case=2,
            case2_lower=bounds.case2_lower,
            observed=observed,
            z=_index_to_bits(z, z_circ.num_qubits),
            max_acceptance=max_acc,
            promise_holds=bool(max_acc <= v.epsilon + 1e-12),
        )
    payload["pass"] = bool(ok)
    return payload, 0 if ok and payload["promise_holds"] else 1


def cmd_prep_verify(args, digests):
    prep, target = _circuit(args.prep, digests), _circuit(args.target, digests)
    return {"fidelity": verify_preparation(prep, target)}, 0


def cmd_low_energy_decide(args, digests):
    h = _hamiltonian(args.hamiltonian, digests)
    cert = _circuit(args.certificate, digests) if args.certificate else None
    res = decide_low_energy(LowEnergyInstance(h, args.a, args.b, args.k), cert, seed=args.seed)
    payload = {
        "case": _case(res.decision),
        "method": res.method,
        "a": args.a,
        "b": args.b,
        "k": args.k,
        "ground_energy": res.ground_energy,
        "certificate": None if res.certificate is None else serialize(res.certificate),
        "certificate_energy": res.certificate_energy,
    }
    return payload, 0 if res.decision in (Decision.CASE1, Decision.CASE2) else 1


# -- plumbing ---------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="qcma", description=__doc__.splitlines()[0])
    p.add_argument("-v", "--verbose", action="store_true", help="log diagnostics to stderr")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("validate", help="check a circuit file")
    s.add_argument("circuit")
    s.set_defaults(func=cmd_validate)

    s = sub.add_parser("simulate", help="run a circuit on a basis state")
    s.add_argument("circuit")
    s.add_argument("--input", help="input bitstring, qubit 0 rightmost (default all zeros)")
    s.set_defaults(func=cmd_simulate)

    s = sub.add_parser("reduce-idcheck", help="build the identity-check circuit Z of a verifier")
    s.add_argument("verifier")
    s.add_argument("--phi", type=float, default=math.pi / 4)
    s.add_argument("--out", help="also write the Z circuit text here")
    s.set_defaults(func=cmd_reduce_idcheck)

    s = sub.add_parser("idcheck-decide", help="brute-force identity check on basis states")
    s.add_argument("circuit")
    s.add_argument("--mu", type=float, required=True)
    s.add_argument("--delta", type=float, required=True)
    s.set_defaults(func=cmd_idcheck_decide)

    s = sub.add_parser("normdist", help="operator-norm distance to the identity up to phase")
    s.add_argument("circuit")
    s.set_defaults(func=cmd_normdist)

    s = sub.add_parser("phasediff", help="phase difference of two diagonal entries")
    s.add_argument("circuit")
    s.add_argument("--z1", required=True)
    s.add_argument("--z2", required=True)
    s.set_defaults(func=cmd_phasediff)

    s = sub.add_parser("tilde", help="input-copying verifier")
    s.add_argument("verifier")
    s.set_defaults(func=cmd_tilde)

    s = sub.add_parser("amplify", help="majority-vote amplification")
    s.add_argument("verifier")
    s.add_argument("-r", type=int, required=True)
    s.set_defaults(func=cmd_amplify)

    s = sub.add_parser("compile-ham", help="clock Hamiltonian of a verifier")
    s.add_argument("verifier")
    s.add_argument("--out", help="also write the bare Hamiltonian JSON here")
    s.set_defaults(func=cmd_compile_ham)

    s = sub.add_parser("history", help="history-state energy for a witness")
    s.add_argument("verifier")
    s.add_argument("--witness", required=True)
    s.add_argument("--emit-prep", action="store_true")
    s.set_defaults(func=cmd_history)

    s = sub.add_parser("eig", help="extremal eigenvalue of a Hamiltonian")
    s.add_argument("hamiltonian")
    s.add_argument("--which", choices=["min", "max"], default="min")
    g = s.add_mutually_exclusive_group()
    g.add_argument("--dense", action="store_true")
    g.add_argument("--lanczos", action="store_true")
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--tol", type=float, default=1e-8)
    s.set_defaults(func=cmd_eig)

    s = sub.add_parser("check-thm1", help="evaluate both sides of the identity-check bounds")
    s.add_argument("verifier")
    s.add_argument("--phi", type=float, default=math.pi / 4)
    s.add_argument("--witness", required=True, help="witness bitstring, or 'none' for the rejecting case")
    s.set_defaults(func=cmd_check_thm1)

    s = sub.add_parser("prep-verify", help="fidelity of a preparation circuit with a target")
    s.add_argument("prep")
    s.add_argument("target")
    s.set_defaults(func=cmd_prep_verify)

    s = sub.add_parser("low-energy-decide", help="low-complexity low-energy decision")
    s.add_argument("hamiltonian")
    s.add_argument("--a", type=float, required=True)
    s.add_argument("--b", type=float, required=True)
    s.add_argument("-k", type=int, required=True)
    s.add_argument("--certificate", help="circuit file preparing a candidate low-energy state")
    s.add_argument("--seed", type=int, default=0)
    s.set_defaults(func=cmd_low_energy_decide)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code else 0
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, stream=sys.stderr)
    digests: dict[str, str] = {}
    start = time.perf_counter()
    try:
        payload, code = args.func(args, digests)
    except (InputError, QcmaError, ValueError) as exc:
        print(f"qcma {args.command}: {exc}", file=sys.stderr)
        return 2
    jsonschema.validate(payload, PAYLOAD_SCHEMAS[args.command])
    report = {
        "command": args.command,
        "inputs": digests,
        "outputs": payload,
        "versions": __version__,
        "elapsed": round(time.perf_counter() - start, 6),
    }
    sys.stdout.write(json.dumps(report, sort_keys=True, allow_nan=False) + "\n")
    log.info("%s finished with exit code %d", args.command, code)
    return code


if __name__ == "__main__":
    sys.exit(main())
