"""Reproducible sampling of unit spheres and unitary Clifford elements.

Stream derivation rule
----------------------
Draws are organised in blocks of ``BLOCK_SIZE`` sample indices. Sample ``i``
of stream ``t`` under seed ``σ`` is row ``i % BLOCK_SIZE`` of the uniform
array produced by ``numpy.random.Philox(key=[σ, t])`` with counter word 2 set
to ``i // BLOCK_SIZE``. A block is always drawn whole, so a sample's values
depend only on ``(σ, t, i, width)`` and never on how blocks are scheduled.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
import math
from math import prod

import numpy as np

from logic.clifford import (
    CliffordElement,
    involution_signs,
    multiply,
)

BLOCK_SIZE = 4096
ROTOR_STREAM = 1 << 48
ROTOR_ROUNDS = 3
_MASK64 = (1 << 64) - 1

SPHERE_LABEL = "sphere measure"
HAAR_LABEL = "Haar measure on SU(2)"
ROTOR_LABEL = "rotor-product measure"


@dataclass(frozen=True)
class SeededSampler:
    """Counter-based sampler keyed by ``(seed, stream)``."""

    seed: int
    stream: int = 0

    def derive(self, stream: int) -> "SeededSampler":
        return SeededSampler(self.seed, stream)

    def block_generator(self, block: int) -> np.random.Generator:
        bit_gen = np.random.Philox(
            key=np.array([self.seed & _MASK64, self.stream & _MASK64], dtype=np.uint64),
            counter=np.array([0, 0, block & _MASK64, 0], dtype=np.uint64),
        )
        return np.random.Generator(bit_gen)

    def uniform_block(self, block: int, width: int) -> np.ndarray:
        """``(BLOCK_SIZE, width)`` uniforms in ``[0, 1)`` for one block."""
        return self.block_generator(block).random((BLOCK_SIZE, width))

    def uniforms(self, start: int, count: int, width: int) -> np.ndarray:
        """Uniform rows for sample indices ``start .. start + count - 1``."""
        if count < 0 or start < 0:
            raise ValueError(f"Invalid sample range start={start} count={count}")
        out = np.empty((count, width))
        filled = 0
        while filled < count:
            index = start + filled
            block, offset = divmod(index, BLOCK_SIZE)
            take = min(BLOCK_SIZE - offset, count - filled)
            out[filled:filled + take] = self.uniform_block(block, width)[offset:offset + take]
            filled += take
        return out


def box_muller(uniforms: np.ndarray) -> np.ndarray:
    """Standard normals from pairs of uniforms: first half radius, second half angle."""
    half = uniforms.shape[-1] // 2
    u1 = uniforms[..., :half]
    u2 = uniforms[..., half:2 * half]
    return np.sqrt(-2.0 * np.log1p(-u1)) * np.cos(2.0 * np.pi * u2)


def gaussian_batch(sampler: SeededSampler, start: int, count: int, width: int) -> np.ndarray:
    """``(count, width)`` standard normals for the given sample indices."""
    return box_muller(sampler.uniforms(start, count, 2 * width))


def sphere_batch(s: int, sampler: SeededSampler, start: int, count: int) -> np.ndarray:
    """Uniform points on ``S^{n-1}``, ``n = 2^s``, one per row."""
    n = 1 << s
    g = gaussian_batch(sampler, start, count, n)
    return g / np.linalg.norm(g, axis=1, keepdims=True)


def sample_unit_sphere(s: int, sampler: SeededSampler, index: int = 0) -> CliffordElement:
    """Real-coefficient element with ``Σ x_I^2 = 1``; Haar on SU(2) when s = 2."""
    return CliffordElement(s, sphere_batch(s, sampler, index, 1)[0])


@lru_cache(maxsize=None)
def skew_basis(rank: int) -> tuple[int, ...]:
    """Bitmasks of basis elements with ``e_I^2 = -1`` (equivalently ``e_I* = -e_I``)."""
    signs = involution_signs(rank)
    return tuple(b for b in range(1, 1 << rank) if signs[b] < 0)


def sample_unitary(s: int, sampler: SeededSampler, index: int = 0) -> CliffordElement:
    """A unitary real-coefficient element.

    For s <= 2 every unit vector is unitary and the sphere sample is used. For
    larger s the element is a product of rotors ``cos θ + sin θ e_I`` over the
    skew-adjoint basis, ``ROTOR_ROUNDS`` times, with uniform angles.
    """
    if s <= 2:
        return sample_unit_sphere(s, sampler, index)
    skew = skew_basis(s)
    angles = 2.0 * np.pi * sampler.derive(sampler.stream + ROTOR_STREAM).uniforms(
        index, 1, ROTOR_ROUNDS * len(skew)
    )[0]
    x = CliffordElement.unit(s)
    for step, theta in enumerate(angles):
        rotor = np.zeros(1 << s)
        rotor[0] = math.cos(theta)
        rotor[skew[step % len(skew)]] = math.sin(theta)
        x = multiply(x, CliffordElement(s, rotor))
    return x


def measure_label(s: int) -> str:
    return HAAR_LABEL if s == 2 else SPHERE_LABEL


def double_factorial(m: int) -> int:
    """``m!!`` with ``(-1)!! = 0!! = 1``."""
    return prod(range(m, 0, -2)) if m > 0 else 1


def sphere_moment_exact(n: int, k: int) -> Fraction:
    """``E[x_1^{2k}]`` for ``x`` uniform on ``S^{n-1}``, exactly."""
    if n < 2:
        raise ValueError(f"Sphere dimension must be at least 2, got {n}")
    if k < 0:
        raise ValueError(f"Moment degree must be nonnegative, got {k}")
    return Fraction(double_factorial(2 * k - 1), prod(n + 2 * i for i in range(k)))


def pair_moment_exact(n: int, k: int) -> Fraction:
    """``E[(x_1^2 + x_2^2)^k]`` for ``x`` uniform on ``S^{n-1}``, exactly.

    ``x_1^2 + x_2^2`` is Beta(1, (n-2)/2), so the moment is
    ``Π_{i<k} (2 + 2i) / (n + 2i)``.
    """
    if n < 2:
        raise ValueError(f"Sphere dimension must be at least 2, got {n}")
    if k < 0:
        raise ValueError(f"Moment degree must be nonnegative, got {k}")
    return Fraction(prod(2 + 2 * i for i in range(k)), prod(n + 2 * i for i in range(k)))
