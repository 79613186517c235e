import numpy as np
import pytest

from qcma.circuit import VerifierSpec, random_circuit
from qcma.clock import compile_hamiltonian, matvec, to_dense
from qcma.errors import NotHermitian, TooLarge
from qcma.instances import toy_cx_verifier
from qcma.simulator import acceptance_operator
from qcma.spectral import dense_spectrum, lanczos_extreme


def test_dense_examples():
    assert np.allclose(dense_spectrum(np.diag([3.0, -1.0])), [-1, 3])
    assert np.allclose(dense_spectrum(np.array([[0, 1], [1, 0]])), [-1, 1])


def test_dense_trace_identity(rng):
    from test_clock import random_hamiltonian

    d = to_dense(random_hamiltonian(6, 10, rng))
    assert dense_spectrum(d).sum() == pytest.approx(np.trace(d).real, abs=1e-8)


def test_dense_errors(monkeypatch):
    with pytest.raises(NotHermitian):
        dense_spectrum(np.array([[0, 1], [0, 0]]))
    monkeypatch.setenv("QCMA_MAX_DENSE_QUBITS", "2")
    with pytest.raises(TooLarge):
        dense_spectrum(np.eye(8))


def test_lanczos_diag():
    d = np.diag([0.0, 1.0, 2.0, 3.0])
    res = lanczos_extreme(lambda v: d @ v, 4, "min")
    assert res.converged
    assert res.value == pytest.approx(0.0, abs=1e-10)
    assert lanczos_extreme(lambda v: d @ v, 4, "max").value == pytest.approx(3.0, abs=1e-10)


def test_lanczos_acceptance_operator_max():
    m = acceptance_operator(toy_cx_verifier())
    assert lanczos_extreme(lambda v: m @ v, 2, "max").value == pytest.approx(1.0, abs=1e-10)


def test_lanczos_vs_dense_10_qubits(rng):
    v = VerifierSpec(2, 2, 3, random_circuit(4, 6, rng))
    h = compile_hamiltonian(v)
    assert h.num_qubits == 10
    exact = dense_spectrum(to_dense(h))[0]
    res = lanczos_extreme(lambda x: matvec(h, x), h.dimension, "min", seed=5)
    assert res.converged
    assert res.value == pytest.approx(exact, abs=1e-8)


def test_lanczos_seed_determinism(rng):
    from test_clock import random_hamiltonian

    h = random_hamiltonian(7, 8, rng)
    a = lanczos_extreme(lambda x: matvec(h, x), h.dimension, seed=11)
    b = lanczos_extreme(lambda x: matvec(h, x), h.dimension, seed=11)
    assert (a.value, a.iterations, a.residual) == (b.value, b.iterations, b.residual)


def test_lanczos_reports_measured_residual(rng):
    from test_clock import random_hamiltonian

    h = random_hamiltonian(6, 6, rng)
    res = lanczos_extreme(lambda x: matvec(h, x), h.dimension, seed=2, return_vector=True)
    v = res.vector
    assert np.linalg.norm(matvec(h, v) - res.value * v) == pytest.approx(res.residual, abs=1e-14)


def test_lanczos_not_converged(rng):
    from test_clock import random_hamiltonian

    h = random_hamiltonian(8, 12, rng)
    res = lanczos_extreme(lambda x: matvec(h, x), h.dimension, tol=1e-12, max_iter=3, seed=0)
    assert not res.converged
    assert res.iterations == 3
    assert res.residual > 1e-12


def test_lanczos_invariant_subspace():
    # start vector spans a 2-dimensional invariant subspace after breakdown
    d = np.diag([1.0, 1.0, 1.0, 1.0, 5.0])
    res = lanczos_extreme(lambda v: d @ v, 5, "min", seed=0)
    assert res.converged and res.value == pytest.approx(1.0, abs=1e-12)
