"""Dense complex matrix helpers: ring operations, predicates and a Jacobi eigensolver.

Matrices are plain ``numpy`` arrays of ``complex128``; :func:`as_matrix`
validates and freezes them. Tolerance checks use the entrywise max norm.
"""

from __future__ import annotations

import math
from typing import Optional

import numpy as np

from utils.logger import debug_log

ComplexMatrix = np.ndarray

EXACT_TOL = 1e-12
SAMPLED_TOL = 1e-9


def as_matrix(data) -> ComplexMatrix:
    """Return a read-only ``complex128`` copy of *data* after validation."""
    m = np.array(data, dtype=np.complex128)
    if m.ndim != 2 or 0 in m.shape:
        raise ValueError(f"Expected a non-empty 2-D matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise ValueError("Matrix entries must be finite")
    m.setflags(write=False)
    return m


def _require_square(m: ComplexMatrix) -> None:
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError(f"Expected a square matrix, got shape {m.shape}")


def _require_same_shape(a: ComplexMatrix, b: ComplexMatrix) -> None:
    if a.shape != b.shape:
        raise ValueError(f"Shape mismatch: {a.shape} vs {b.shape}")


def identity(d: int) -> ComplexMatrix:
    return as_matrix(np.eye(d))


def zeros(d: int) -> ComplexMatrix:
    return as_matrix(np.zeros((d, d)))


def add(a: ComplexMatrix, b: ComplexMatrix) -> ComplexMatrix:
    _require_same_shape(a, b)
    return as_matrix(a + b)


def sub(a: ComplexMatrix, b: ComplexMatrix) -> ComplexMatrix:
    _require_same_shape(a, b)
    return as_matrix(a - b)


def mul(a: ComplexMatrix, b: ComplexMatrix) -> ComplexMatrix:
    if a.shape[1] != b.shape[0]:
        raise ValueError(f"Shape mismatch for product: {a.shape} @ {b.shape}")
    return as_matrix(a @ b)


def scalar_mul(c: complex, m: ComplexMatrix) -> ComplexMatrix:
    return as_matrix(c * m)


def adjoint(m: ComplexMatrix) -> ComplexMatrix:
    return as_matrix(np.conj(m).T)


def max_norm(m) -> float:
    m = np.asarray(m)
    return float(np.max(np.abs(m))) if m.size else 0.0


def matrix_power(m: ComplexMatrix, k: int) -> ComplexMatrix:
    _require_square(m)
    return as_matrix(np.linalg.matrix_power(m, k))


def is_hermitian(m: ComplexMatrix, tol: float = EXACT_TOL) -> bool:
    _require_square(m)
    return max_norm(m - np.conj(m).T) <= tol


def is_projection(m: ComplexMatrix, tol: float = EXACT_TOL) -> bool:
    """True iff ``m^2 = m = m*`` within *tol*."""
    _require_square(m)
    return max_norm(m @ m - m) <= tol and max_norm(m - np.conj(m).T) <= tol


def commutator_norm(a: ComplexMatrix, b: ComplexMatrix) -> float:
    return max_norm(a @ b - b @ a)


def trace(m: ComplexMatrix) -> complex:
    _require_square(m)
    return complex(np.trace(m))


def normalized_trace(m: ComplexMatrix) -> complex:
    """Trace divided by the dimension, so the identity has trace 1."""
    _require_square(m)
    return complex(np.trace(m)) / m.shape[0]


def _off_diagonal_mass(a: np.ndarray) -> float:
    off = a - np.diag(np.diag(a))
    return float(np.linalg.norm(off))


def _rotate(a: np.ndarray, p: int, q: int) -> None:
    """Annihilate ``a[p, q]`` in place with a phase step then a real rotation."""
    apq = a[p, q]
    magnitude = abs(apq)
    if magnitude == 0.0:
        return
    phase = apq / magnitude
    # D^H A D with D_qq = conj(phase) makes a[p, q] real and positive.
    a[:, q] *= np.conj(phase)
    a[q, :] *= phase

    app = a[p, p].real
    aqq = a[q, q].real
    theta = (aqq - app) / (2.0 * magnitude)
    t = (1.0 if theta >= 0 else -1.0) / (abs(theta) + math.sqrt(theta * theta + 1.0))
    c = 1.0 / math.sqrt(t * t + 1.0)
    s = t * c

    col_p = a[:, p].copy()
    col_q = a[:, q].copy()
    a[:, p] = c * col_p - s * col_q
    a[:, q] = s * col_p + c * col_q
    row_p = a[p, :].copy()
    row_q = a[q, :].copy()
    a[p, :] = c * row_p - s * row_q
    a[q, :] = s * row_p + c * row_q

    a[p, q] = 0.0
    a[q, p] = 0.0
    a[p, p] = a[p, p].real
    a[q, q] = a[q, q].real


def jacobi_eigenvalues(
    m: ComplexMatrix,
    tol: float = EXACT_TOL,
    max_sweeps: int = 100,
    config: Optional[dict] = None,
) -> tuple[np.ndarray, list[float]]:
    """Cyclic Jacobi iteration for a hermitian matrix.

    Returns the (unsorted) eigenvalues and the off-diagonal Frobenius mass
    recorded after every sweep. Iteration stops once the mass is at most
    ``tol`` times ``max(1, ||m||_F)``.
    """
    _require_square(m)
    a = np.array(m, dtype=np.complex128)
    d = a.shape[0]
    threshold = tol * max(1.0, float(np.linalg.norm(a)))
    history: list[float] = []
    mass = _off_diagonal_mass(a)
    sweeps = 0
    while mass > threshold:
        if sweeps >= max_sweeps:
            raise RuntimeError(
                f"Jacobi iteration did not converge after {max_sweeps} sweeps (off-diagonal {mass:.3e})"
            )
        for p in range(d - 1):
            for q in range(p + 1, d):
                _rotate(a, p, q)
        sweeps += 1
        mass = _off_diagonal_mass(a)
        history.append(mass)
        debug_log(f"Jacobi sweep {sweeps}: off-diagonal {mass:.3e}", config, level="high")
    return np.diag(a).real.copy(), history


def hermitian_eigenvalues(
    m: ComplexMatrix, tol: float = EXACT_TOL, config: Optional[dict] = None
) -> list[float]:
    """All eigenvalues of a hermitian matrix with multiplicity, ascending."""
    _require_square(m)
    if not is_hermitian(m, tol):
        raise ValueError("Matrix is not hermitian within tolerance")
    values, _ = jacobi_eigenvalues(m, tol=tol, config=config)
    return sorted(float(v) for v in values)
