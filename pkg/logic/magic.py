"""Magic biunitary matrices: constructions, verification and characters.

A magic biunitary is an n×n grid of d×d projections whose rows and columns
are partitions of unity. :class:`MagicMatrix` does not enforce this on
construction; :func:`verify_magic` measures it.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from logic.clifford import (
    CliffordElement,
    MultiIndex,
    basis_labels,
    central_indices,
    is_unitary,
    multiply,
)
from logic.haar import gaussian_batch
from logic.linalg import (
    EXACT_TOL,
    ComplexMatrix,
    as_matrix,
    identity,
    is_projection,
    zeros,
)
from utils.logger import debug_log

MIN_PROJECTION_NORM = 1e-14
MAX_PERMUTATION_SIZE = 6


@dataclass(frozen=True, eq=False)
class MagicMatrix:
    """An n×n grid of d×d complex matrices."""

    blocks: tuple
    labels: Optional[tuple] = None

    def __post_init__(self) -> None:
        rows = tuple(tuple(as_matrix(b) for b in row) for row in self.blocks)
        n = len(rows)
        if n == 0 or any(len(row) != n for row in rows):
            raise ValueError("Magic matrix grid must be square and non-empty")
        d = rows[0][0].shape[0]
        for i, row in enumerate(rows):
            for j, block in enumerate(row):
                if block.shape != (d, d):
                    raise ValueError(
                        f"Block ({i}, {j}) has shape {block.shape}, expected {(d, d)}"
                    )
        if self.labels is not None and len(self.labels) != n:
            raise ValueError(f"Expected {n} labels, got {len(self.labels)}")
        object.__setattr__(self, "blocks", rows)

    @property
    def n(self) -> int:
        return len(self.blocks)

    @property
    def d(self) -> int:
        return self.blocks[0][0].shape[0]

    def block(self, i: int, j: int) -> ComplexMatrix:
        return self.blocks[i][j]

    def stacked(self) -> np.ndarray:
        """Blocks as an ``(n, n, d, d)`` array."""
        return np.array([[np.asarray(b) for b in row] for row in self.blocks])


@dataclass
class MagicReport:
    """Worst-case defects of a magic biunitarity check."""

    max_projection_defect: float = 0.0
    max_selfadjoint_defect: float = 0.0
    max_row_defect: float = 0.0
    max_col_defect: float = 0.0
    max_orthogonality_defect: float = 0.0
    tolerance: float = EXACT_TOL
    passed: bool = field(init=False)

    def __post_init__(self) -> None:
        self.passed = all(d <= self.tolerance for d in self.defects().values())

    def defects(self) -> dict:
        return {
            "max_projection_defect": self.max_projection_defect,
            "max_selfadjoint_defect": self.max_selfadjoint_defect,
            "max_row_defect": self.max_row_defect,
            "max_col_defect": self.max_col_defect,
            "max_orthogonality_defect": self.max_orthogonality_defect,
        }

    def as_dict(self) -> dict:
        return {**self.defects(), "tolerance": self.tolerance, "pass": self.passed}


def merge_reports(a: MagicReport, b: MagicReport) -> MagicReport:
    """Associative merge: worst defect of each kind, tighter tolerance."""
    merged = {k: max(a.defects()[k], b.defects()[k]) for k in a.defects()}
    return MagicReport(**merged, tolerance=min(a.tolerance, b.tolerance))


def verify_magic(v: MagicMatrix, tol: float = EXACT_TOL, config: Optional[dict] = None) -> MagicReport:
    """Measure how far *v* is from a magic biunitary."""
    blocks = v.stacked()
    eye = np.eye(v.d)

    projection = float(np.max(np.abs(blocks @ blocks - blocks)))
    selfadjoint = float(np.max(np.abs(blocks - np.conj(np.swapaxes(blocks, -1, -2)))))
    row = float(np.max(np.abs(blocks.sum(axis=1) - eye)))
    col = float(np.max(np.abs(blocks.sum(axis=0) - eye)))

    orthogonality = 0.0
    for i in range(v.n):
        for j in range(v.n):
            row_products = blocks[i, j][None, :, :] @ blocks[i]
            col_products = blocks[j, i][None, :, :] @ blocks[:, i]
            row_products[j] = 0.0
            col_products[j] = 0.0
            orthogonality = max(
                orthogonality,
                float(np.max(np.abs(row_products))),
                float(np.max(np.abs(col_products))),
            )

    report = MagicReport(
        max_projection_defect=projection,
        max_selfadjoint_defect=selfadjoint,
        max_row_defect=row,
        max_col_defect=col,
        max_orthogonality_defect=orthogonality,
        tolerance=tol,
    )
    debug_log(
        f"verify_magic n={v.n} d={v.d}: {report.as_dict()}",
        config,
        level="medium",
    )
    return report


def projection_onto(y: CliffordElement) -> ComplexMatrix:
    """Orthogonal projection onto ``C y`` in the basis ``{e_I}``."""
    norm2 = y.norm_squared()
    if norm2 < MIN_PROJECTION_NORM:
        raise ValueError(f"Cannot project onto a (near) zero vector, |y|^2={norm2:.3e}")
    return as_matrix(np.outer(y.coeffs, np.conj(y.coeffs)) / norm2)


def clifford_magic(x: CliffordElement, tol: float = EXACT_TOL) -> MagicMatrix:
    """The matrix ``(P_{e_I x e_J})_{IJ}`` for a unitary ``x`` in Cl(R^s)."""
    if not is_unitary(x, tol):
        raise ValueError("clifford_magic requires a unitary Clifford element")
    n = x.dimension
    basis = [CliffordElement.basis(MultiIndex(b, x.rank)) for b in range(n)]
    left = [multiply(e, x) for e in basis]
    grid = [[projection_onto(multiply(left[i], basis[j])) for j in range(n)] for i in range(n)]
    return MagicMatrix(tuple(tuple(row) for row in grid), labels=tuple(basis_labels(x.rank)))


def identity_magic(n: int, d: int = 1) -> MagicMatrix:
    """``v_ij = δ_ij · 1_d``."""
    eye, zero = identity(d), zeros(d)
    return MagicMatrix(tuple(tuple(eye if i == j else zero for j in range(n)) for i in range(n)))


def _require_projection(p: ComplexMatrix, name: str, tol: float) -> ComplexMatrix:
    p = as_matrix(p)
    if p.shape[0] != p.shape[1] or not is_projection(p, tol):
        raise ValueError(f"{name} is not a projection within tolerance {tol}")
    return p


def two_by_two(p: ComplexMatrix, tol: float = EXACT_TOL) -> MagicMatrix:
    """The forced 2×2 form ``[[p, 1-p], [1-p, p]]``."""
    p = _require_projection(p, "p", tol)
    q = as_matrix(np.eye(p.shape[0]) - p)
    return MagicMatrix(((p, q), (q, p)))


def block_4x4(p: ComplexMatrix, q: ComplexMatrix, tol: float = EXACT_TOL) -> MagicMatrix:
    """Two 2×2 blocks built from projections *p* and *q* on the diagonal."""
    p = _require_projection(p, "p", tol)
    q = _require_projection(q, "q", tol)
    if p.shape != q.shape:
        raise ValueError(f"Shape mismatch: {p.shape} vs {q.shape}")
    eye = np.eye(p.shape[0])
    zero = zeros(p.shape[0])
    p_c, q_c = as_matrix(eye - p), as_matrix(eye - q)
    return MagicMatrix(
        (
            (p, p_c, zero, zero),
            (p_c, p, zero, zero),
            (zero, zero, q, q_c),
            (zero, zero, q_c, q),
        )
    )


def glue_identity(v: MagicMatrix, m: int) -> MagicMatrix:
    """Direct sum of *v* with the m×m identity magic matrix."""
    if m < 0:
        raise ValueError(f"Cannot glue an identity of negative size {m}")
    size = v.n + m
    eye, zero = identity(v.d), zeros(v.d)
    grid = []
    for i in range(size):
        row = []
        for j in range(size):
            if i < v.n and j < v.n:
                row.append(v.block(i, j))
            else:
                row.append(eye if i == j else zero)
        grid.append(tuple(row))
    return MagicMatrix(tuple(grid))


def permutation_magic(n: int) -> MagicMatrix:
    """Characteristic functions of ``{σ ∈ S_n | σ(j) = i}`` as diagonal blocks.

    Permutations are enumerated lexicographically and index the diagonal.
    """
    if not 1 <= n <= MAX_PERMUTATION_SIZE:
        raise ValueError(f"permutation_magic supports 1 <= n <= {MAX_PERMUTATION_SIZE}, got {n}")
    perms = np.array(list(itertools.permutations(range(n))))
    grid = tuple(
        tuple(as_matrix(np.diag((perms[:, j] == i).astype(float))) for j in range(n))
        for i in range(n)
    )
    return MagicMatrix(grid)


def character(v: MagicMatrix) -> ComplexMatrix:
    """``χ(v) = v_11 + ... + v_nn``."""
    return as_matrix(sum(np.asarray(v.block(i, i)) for i in range(v.n)))


def character_exact(x: CliffordElement, tol: float = EXACT_TOL) -> ComplexMatrix:
    """``Σ_I P_{e_I x e_I}`` straight from the coefficients of a real ``x``.

    Entry ``(J, K)`` is ``n x_J x_K / |x|²`` when ``J Δ K`` is central and 0
    otherwise. For even rank only ``∅`` is central and the matrix is diagonal;
    for odd rank it is a sum of rank-one blocks on the pairs ``{J, J Δ full}``.
    """
    if not x.is_real(tol):
        raise ValueError("character_exact requires real coefficients")
    coeffs = x.real_coefficients()
    norm2 = float(coeffs @ coeffs)
    if norm2 < MIN_PROJECTION_NORM:
        raise ValueError(f"Cannot build a character from a (near) zero element, |x|^2={norm2:.3e}")
    idx = np.arange(x.dimension)
    linked = np.isin(idx[:, None] ^ idx[None, :], central_indices(x.rank))
    return as_matrix(x.dimension * np.outer(coeffs, coeffs) * linked / norm2)


def character_diagonal_exact(x: CliffordElement, tol: float = EXACT_TOL) -> list[float]:
    """Diagonal ``(n x_I^2)_I`` of the character of the Clifford construction.

    Only even ranks: for odd rank ``e_{1..s}`` is central and the character
    has off-diagonal entries ``n x_J x_{J Δ full}`` (see :func:`character_exact`).
    """
    if x.rank % 2:
        raise ValueError(
            f"The character is not diagonal at odd rank {x.rank}: "
            f"e_{{1..{x.rank}}} is central; use character_exact"
        )
    if not x.is_real(tol):
        raise ValueError("character_diagonal_exact requires real coefficients")
    if not is_unitary(x, tol):
        raise ValueError("character_diagonal_exact requires a unitary Clifford element")
    coeffs = x.real_coefficients()
    return [float(x.dimension * c * c) for c in coeffs]


def character_spectra(batch: np.ndarray, rank: int) -> np.ndarray:
    """Eigenvalues of :func:`character_exact` for real unit rows of *batch*.

    Even rank: ``n x_I²``. Odd rank: ``n (x_J² + x_{J Δ full}²)`` for each pair
    followed by ``n/2`` zeros. One row of ``n`` values per input row, unsorted.
    """
    batch = np.atleast_2d(np.asarray(batch, dtype=float))
    n = 1 << rank
    if batch.shape[1] != n:
        raise ValueError(f"Expected rows of length {n}, got {batch.shape[1]}")
    squares = batch * batch
    if rank % 2 == 0:
        return n * squares
    half = n // 2
    low = np.arange(half)
    paired = squares[:, low] + squares[:, low ^ (n - 1)]
    return np.concatenate([n * paired, np.zeros_like(paired)], axis=1)


def generated_algebra_dimension(
    generators: Sequence[ComplexMatrix], tol: float = 1e-9, max_length: int = 16
) -> int:
    """Dimension of the unital algebra spanned by words in *generators*."""
    if not generators:
        raise ValueError("At least one generator is required")
    d = np.asarray(generators[0]).shape[0]
    span = [np.eye(d, dtype=np.complex128)]
    frontier = [np.eye(d, dtype=np.complex128)]
    rank = 1
    for _ in range(max_length):
        candidates = [w @ np.asarray(g) for w in frontier for g in generators]
        new_frontier = []
        for c in candidates:
            trial = np.array([m.reshape(-1) for m in span + [c]])
            trial_rank = int(np.linalg.matrix_rank(trial, tol=tol))
            if trial_rank > rank:
                span.append(c)
                new_frontier.append(c)
                rank = trial_rank
        if not new_frontier:
            break
        frontier = new_frontier
    return rank


def sample_projections(d: int, rank: int, sampler, count: int, start: int = 0) -> list[ComplexMatrix]:
    """Random orthogonal projections of the given rank onto complex subspaces of C^d."""
    if not 0 <= rank <= d:
        raise ValueError(f"Projection rank must lie in [0, {d}], got {rank}")

    raw = gaussian_batch(sampler, start, count, 2 * d * max(rank, 1))
    out = []
    for row in raw:
        if rank == 0:
            out.append(zeros(d))
            continue
        z = (row[: d * rank] + 1j * row[d * rank:]).reshape(d, rank)
        q, _ = np.linalg.qr(z)
        out.append(as_matrix(q @ np.conj(q).T))
    return out
