"""Hermitian eigenvalues: dense full spectra and matrix-free Lanczos."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Literal

import numpy as np
import scipy.linalg

from .errors import DimensionMismatch, NotHermitian, TooLarge
from .simulator import dense_cap


@dataclass(frozen=True)
class EigResult:
    value: float
    residual: float
    iterations: int
    converged: bool
    vector: np.ndarray | None = None


def _check_hermitian(m: np.ndarray, tol: float = 1e-10) -> None:
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise DimensionMismatch(f"expected a square matrix, got shape {m.shape}")
    scale = max(1.0, float(np.max(np.abs(m)))) if m.size else 1.0
    if np.max(np.abs(m - m.conj().T), initial=0.0) > tol * scale:
        raise NotHermitian("matrix is not Hermitian")


def dense_spectrum(matrix: np.ndarray, check: bool = True) -> np.ndarray:
    """Ascending eigenvalues of a Hermitian matrix.

    With ``check`` the decomposition is verified: ``||M - V diag(w) V^H||``
    must stay below ``1e-8 * ||M||``.
    """
    m = np.asarray(matrix)
    if m.shape[0] > 2 ** dense_cap(14):
        raise TooLarge(f"dimension {m.shape[0]} exceeds the dense cap")
    _check_hermitian(m)
    m = (m + m.conj().T) / 2
    if not check:
        return scipy.linalg.eigvalsh(m)
    w, v = scipy.linalg.eigh(m)
    recon = (v * w) @ v.conj().T
    norm = max(float(np.linalg.norm(m, 2)), 1e-300)
    err = float(np.linalg.norm(m - recon, 2))
    if err > 1e-8 * norm:
        raise ArithmeticError(f"eigendecomposition reconstruction error {err:.3g}")
    return w


def lanczos_extreme(
    matvec: Callable[[np.ndarray], np.ndarray],
    dimension: int,
    which: Literal["min", "max"] = "min",
    tol: float = 1e-8,
    max_iter: int = 500,
    seed: int = 0,
    return_vector: bool = False,
) -> EigResult:
    """Extremal eigenvalue of a Hermitian operator given only its action.

    The Krylov basis is fully reorthogonalized (two Gram-Schmidt passes per
    step). The start vector is drawn from ``numpy.random.default_rng(seed)``,
    so runs are reproducible. ``residual`` is measured as ``||Hv - lv||`` on
    the final Ritz vector, not estimated. Non-convergence is reported through
    ``converged=False`` rather than raised.
    """
    if dimension < 2:
        raise DimensionMismatch("Lanczos needs dimension >= 2")
    if which not in ("min", "max"):
        raise ValueError(f"which must be 'min' or 'max', got {which!r}")
    if tol <= 0:
        raise ValueError("tol must be positive")
    sign = 1.0 if which == "min" else -1.0
    rng = np.random.default_rng(seed)
    q = rng.standard_normal(dimension) + 1j * rng.standard_normal(dimension)
    q /= np.linalg.norm(q)

    max_iter = min(max_iter, dimension)
    basis = np.empty((max_iter, dimension), dtype=complex)
    alphas, betas = [], []
    theta, s = None, None
    k = 0
    for k in range(1, max_iter + 1):
        basis[k - 1] = q
        w = np.asarray(matvec(q), dtype=complex).reshape(-1)
        if w.size != dimension:
            raise DimensionMismatch(f"matvec returned length {w.size}, expected {dimension}")
        alphas.append(float(np.vdot(q, w).real))
        V = basis[:k]
        for _ in range(2):
            w -= V.T @ (V.conj() @ w)
        beta = float(np.linalg.norm(w))

        T = np.diag(alphas) + np.diag(betas, 1) + np.diag(betas, -1)
        evals, evecs = np.linalg.eigh(sign * T)
        theta, s = sign * evals[0], evecs[:, 0]
        invariant = beta < 1e-12 * max(1.0, abs(theta))
        if invariant or k == max_iter or beta * abs(s[-1]) <= tol / 4:
            vec = _ritz_vector(basis[:k], s)
            residual = float(np.linalg.norm(matvec(vec) - theta * vec))
            if residual <= tol or invariant or k == max_iter:
                break
        betas.append(beta)
        q = w / beta

    vec = _ritz_vector(basis[:k], s)
    hv = np.asarray(matvec(vec), dtype=complex).reshape(-1)
    value = float(np.vdot(vec, hv).real)
    residual = float(np.linalg.norm(hv - value * vec))
    return EigResult(
        value=value,
        residual=residual,
        iterations=k,
        converged=residual <= tol,
        vector=vec if return_vector else None,
    )


def _ritz_vector(V: np.ndarray, s: np.ndarray) -> np.ndarray:
    vec = V.T @ s
    return vec / np.linalg.norm(vec)
