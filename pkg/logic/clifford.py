"""Exact arithmetic in the Clifford algebra Cl(R^s).

Basis elements ``e_I`` are indexed by bitmasks: bit ``i - 1`` is set when the
generator ``e_i`` occurs in ``I``. The basis is ordered bitmask-ascending
(``∅, {1}, {2}, {1,2}, {3}, ...``) so the index of ``e_I e_J`` is simply
``I ^ J``. Generators satisfy ``e_i^2 = -1`` and ``e_i e_j = -e_j e_i``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Sequence

import numpy as np

MAX_RANK = 16
QUATERNION_LABELS = ("1", "i", "j", "k")


@dataclass(frozen=True)
class MultiIndex:
    """Subset ``I`` of ``{1, ..., rank}`` stored as a bitmask."""

    bits: int
    rank: int

    def __post_init__(self) -> None:
        if not 1 <= self.rank <= MAX_RANK:
            raise ValueError(f"Rank must be between 1 and {MAX_RANK}, got {self.rank}")
        if not 0 <= self.bits < (1 << self.rank):
            raise ValueError(f"Bitmask {self.bits} out of range for rank {self.rank}")

    @classmethod
    def from_indices(cls, indices: Iterable[int], rank: int) -> "MultiIndex":
        bits = 0
        for i in indices:
            if not 1 <= i <= rank:
                raise ValueError(f"Generator index {i} out of range for rank {rank}")
            bits |= 1 << (i - 1)
        return cls(bits, rank)

    @property
    def cardinality(self) -> int:
        return bin(self.bits).count("1")

    @property
    def indices(self) -> tuple[int, ...]:
        return tuple(i + 1 for i in range(self.rank) if self.bits >> i & 1)

    def __str__(self) -> str:
        if not self.bits:
            return "e_∅"
        return "e_{" + "".join(str(i) for i in self.indices) + "}"


def _check_rank(a_rank: int, b_rank: int) -> None:
    if a_rank != b_rank:
        raise ValueError(f"Rank mismatch: {a_rank} != {b_rank}")


def _popcount(bits: int) -> int:
    return bin(bits).count("1")


def _sign_bits(a: int, b: int) -> int:
    """Sign of ``e_a e_b`` relative to ``e_{a ^ b}`` for raw bitmasks."""
    transpositions = 0
    rest = a >> 1
    while rest:
        transpositions += _popcount(rest & b)
        rest >>= 1
    squares = _popcount(a & b)
    return -1 if (transpositions + squares) & 1 else 1


def sign_product(I: MultiIndex, J: MultiIndex) -> int:
    """Return σ with ``e_I e_J = σ e_{I Δ J}``.

    σ = (-1)^(t + c) where t counts pairs i ∈ I, j ∈ J with i > j and
    c = |I ∩ J|.
    """
    _check_rank(I.rank, J.rank)
    return _sign_bits(I.bits, J.bits)


def commutation_sign(I: MultiIndex, J: MultiIndex) -> int:
    """Return ``(-1)^N(I,J)`` where ``e_I e_J = (-1)^N(I,J) e_J e_I``."""
    _check_rank(I.rank, J.rank)
    return _sign_bits(I.bits, J.bits) * _sign_bits(J.bits, I.bits)


def central_indices(rank: int) -> tuple[int, ...]:
    """Bitmasks of the basis elements commuting with every ``e_J``.

    ``e_∅`` always; the top element ``e_{1..rank}`` as well when rank is odd.
    """
    if not 1 <= rank <= MAX_RANK:
        raise ValueError(f"Rank must be between 1 and {MAX_RANK}, got {rank}")
    full = (1 << rank) - 1
    return (0, full) if rank % 2 else (0,)


def reduce_word(word: Sequence[int], rank: int) -> tuple[int, MultiIndex]:
    """Reduce a product of generators ``e_{w1} e_{w2} ...`` to ``±e_I``.

    Brute force: bubble-sort adjacent generators (each swap of distinct
    generators flips the sign) and cancel adjacent equal pairs (factor -1).
    """
    letters = list(word)
    for g in letters:
        if not 1 <= g <= rank:
            raise ValueError(f"Generator index {g} out of range for rank {rank}")
    sign = 1
    changed = True
    while changed:
        changed = False
        i = 0
        while i < len(letters) - 1:
            left, right = letters[i], letters[i + 1]
            if left == right:
                del letters[i:i + 2]
                sign = -sign
                changed = True
                continue
            if left > right:
                letters[i], letters[i + 1] = right, left
                sign = -sign
                changed = True
            i += 1
    return sign, MultiIndex.from_indices(letters, rank)


@lru_cache(maxsize=None)
def product_tables(rank: int) -> tuple[np.ndarray, np.ndarray]:
    """Return ``(xor_table, sign_table)`` with entries for ``e_I e_J``."""
    n = 1 << rank
    idx = np.arange(n)
    xor_table = idx[:, None] ^ idx[None, :]
    signs = np.array(
        [[_sign_bits(a, b) for b in range(n)] for a in range(n)], dtype=np.int8
    )
    xor_table.setflags(write=False)
    signs.setflags(write=False)
    return xor_table, signs


@lru_cache(maxsize=None)
def involution_signs(rank: int) -> np.ndarray:
    """``(-1)^(|I|(|I|+1)/2)`` per basis element, so that ``e_I* = ε_I e_I``."""
    n = 1 << rank
    signs = np.array(
        [-1 if (_popcount(b) * (_popcount(b) + 1) // 2) & 1 else 1 for b in range(n)],
        dtype=np.int8,
    )
    signs.setflags(write=False)
    return signs


@dataclass(frozen=True, eq=False)
class CliffordElement:
    """Element ``x = Σ_I x_I e_I`` of Cl(R^rank) with complex coefficients."""

    rank: int
    coeffs: np.ndarray

    def __post_init__(self) -> None:
        if not 1 <= self.rank <= MAX_RANK:
            raise ValueError(f"Rank must be between 1 and {MAX_RANK}, got {self.rank}")
        coeffs = np.array(self.coeffs, dtype=np.complex128).reshape(-1)
        if coeffs.shape[0] != 1 << self.rank:
            raise ValueError(
                f"Expected {1 << self.rank} coefficients for rank {self.rank}, got {coeffs.shape[0]}"
            )
        if not np.all(np.isfinite(coeffs)):
            raise ValueError("Coefficients must be finite")
        coeffs.setflags(write=False)
        object.__setattr__(self, "coeffs", coeffs)

    @classmethod
    def basis(cls, index: MultiIndex) -> "CliffordElement":
        coeffs = np.zeros(1 << index.rank, dtype=np.complex128)
        coeffs[index.bits] = 1.0
        return cls(index.rank, coeffs)

    @classmethod
    def unit(cls, rank: int) -> "CliffordElement":
        return cls.basis(MultiIndex(0, rank))

    @classmethod
    def zero(cls, rank: int) -> "CliffordElement":
        return cls(rank, np.zeros(1 << rank, dtype=np.complex128))

    @classmethod
    def from_coefficients(cls, values: Sequence[complex]) -> "CliffordElement":
        """Build an element from ``2^s`` coefficients in basis order."""
        n = len(values)
        rank = n.bit_length() - 1
        if n < 2 or 1 << rank != n:
            raise ValueError(f"Coefficient count must be a power of two >= 2, got {n}")
        return cls(rank, np.asarray(values, dtype=np.complex128))

    @property
    def dimension(self) -> int:
        return 1 << self.rank

    def coefficient(self, index: MultiIndex) -> complex:
        _check_rank(self.rank, index.rank)
        return complex(self.coeffs[index.bits])

    def norm_squared(self) -> float:
        return float(np.sum(np.abs(self.coeffs) ** 2))

    def is_real(self, tol: float = 0.0) -> bool:
        return bool(np.max(np.abs(self.coeffs.imag)) <= tol)

    def real_coefficients(self) -> np.ndarray:
        return self.coeffs.real.copy()

    def allclose(self, other: "CliffordElement", tol: float = 1e-12) -> bool:
        _check_rank(self.rank, other.rank)
        return bool(np.max(np.abs(self.coeffs - other.coeffs)) <= tol)

    def __add__(self, other: "CliffordElement") -> "CliffordElement":
        _check_rank(self.rank, other.rank)
        return CliffordElement(self.rank, self.coeffs + other.coeffs)

    def __sub__(self, other: "CliffordElement") -> "CliffordElement":
        _check_rank(self.rank, other.rank)
        return CliffordElement(self.rank, self.coeffs - other.coeffs)

    def __neg__(self) -> "CliffordElement":
        return CliffordElement(self.rank, -self.coeffs)

    def __mul__(self, other):
        if isinstance(other, CliffordElement):
            return multiply(self, other)
        if isinstance(other, (int, float, complex, np.number)):
            return CliffordElement(self.rank, self.coeffs * other)
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, (int, float, complex, np.number)):
            return CliffordElement(self.rank, self.coeffs * other)
        return NotImplemented

    def __repr__(self) -> str:
        terms = [
            f"({c.real:+.6g}{c.imag:+.6g}j)·{MultiIndex(b, self.rank)}"
            for b, c in enumerate(self.coeffs)
            if c != 0
        ]
        return f"CliffordElement(rank={self.rank}, {' + '.join(terms) or '0'})"


def multiply(a: CliffordElement, b: CliffordElement) -> CliffordElement:
    """Clifford product: ``(ab)_K = Σ_{I^J=K} σ(I,J) a_I b_J``."""
    _check_rank(a.rank, b.rank)
    xor_table, signs = product_tables(a.rank)
    terms = signs * np.outer(a.coeffs, b.coeffs)
    out = np.zeros(a.dimension, dtype=np.complex128)
    np.add.at(out, xor_table, terms)
    return CliffordElement(a.rank, out)


def involution(a: CliffordElement) -> CliffordElement:
    """Conjugate-linear anti-automorphism with ``e_i* = -e_i``."""
    return CliffordElement(a.rank, np.conj(a.coeffs) * involution_signs(a.rank))


def inner_product(a: CliffordElement, b: CliffordElement) -> complex:
    """``⟨a, b⟩ = Σ_I a_I conj(b_I)``; the basis ``{e_I}`` is orthonormal."""
    _check_rank(a.rank, b.rank)
    return complex(np.vdot(b.coeffs, a.coeffs))


PAULI_BASIS = np.array(
    [
        [[1, 0], [0, 1]],
        [[1j, 0], [0, -1j]],
        [[0, 1], [-1, 0]],
        [[0, 1j], [1j, 0]],
    ],
    dtype=np.complex128,
)
PAULI_BASIS.setflags(write=False)


def pauli_rep(a: CliffordElement) -> np.ndarray:
    """Faithful 2×2 representation of Cl(R^2) (quaternions as Pauli matrices)."""
    if a.rank != 2:
        raise ValueError(f"Pauli representation needs rank 2, got {a.rank}")
    return np.tensordot(a.coeffs, PAULI_BASIS, axes=1)


def left_mult_matrix(a: CliffordElement) -> np.ndarray:
    """Matrix of ``b -> a b`` in the orthonormal basis ``{e_I}``."""
    xor_table, signs = product_tables(a.rank)
    n = a.dimension
    cols = np.arange(n)
    out = np.zeros((n, n), dtype=np.complex128)
    for bits in np.flatnonzero(a.coeffs):
        out[xor_table[bits], cols] += a.coeffs[bits] * signs[bits]
    return out


def unitarity_defects(batch: np.ndarray, rank: int) -> np.ndarray:
    """Per-row ``max(|x x* - 1|, |x* x - 1|)`` in the coefficient max-norm.

    *batch* holds one coefficient vector per row.
    """
    batch = np.atleast_2d(np.asarray(batch, dtype=np.complex128))
    n = 1 << rank
    if batch.shape[1] != n:
        raise ValueError(f"Expected rows of length {n}, got {batch.shape[1]}")
    xor_table, signs = product_tables(rank)
    star = np.conj(batch) * involution_signs(rank)
    left = np.zeros_like(batch)
    right = np.zeros_like(batch)
    for k in range(n):
        partner = xor_table[:, k]
        coeff = signs[np.arange(n), partner]
        left[:, k] = np.sum(coeff * batch * star[:, partner], axis=1)
        right[:, k] = np.sum(coeff * star * batch[:, partner], axis=1)
    left[:, 0] -= 1.0
    right[:, 0] -= 1.0
    return np.maximum(np.max(np.abs(left), axis=1), np.max(np.abs(right), axis=1))


def is_unitary(x: CliffordElement, tol: float = 1e-12) -> bool:
    """True iff ``x x* = x* x = e_∅`` within *tol* (coefficient max-norm)."""
    return bool(unitarity_defects(x.coeffs[None, :], x.rank)[0] <= tol)


def quaternion_label(index: MultiIndex) -> str:
    """Map ``∅, {1}, {2}, {1,2}`` to ``1, i, j, k``."""
    if index.rank != 2:
        raise ValueError(f"Quaternion labels need rank 2, got {index.rank}")
    return QUATERNION_LABELS[index.bits]


def basis_labels(rank: int) -> list[str]:
    """Row/column labels in basis order; quaternion names when rank is 2."""
    if rank == 2:
        return list(QUATERNION_LABELS)
    return [str(MultiIndex(b, rank)) for b in range(1 << rank)]
