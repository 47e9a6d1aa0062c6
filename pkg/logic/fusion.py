"""SO(3) fusion-ring arithmetic and the SU(2) Clebsch–Gordan rule.

The irreducible corepresentations ``r_k`` of the quantum permutation group
fuse like the representations of SO(3):
``r_k ⊗ r_s = r_{|k-s|} + r_{|k-s|+1} + ... + r_{k+s}``. The fundamental
corepresentation is taken to decompose as ``r_0 + r_1``; the multiplicity of
``r_0`` in its k-th tensor power is the k-th Haar moment of its character.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass
from typing import Callable, Mapping


@dataclass(frozen=True)
class FusionVector:
    """Nonnegative integer multiplicities over labels; absent labels mean 0."""

    multiplicities: Mapping[int, int]

    def __post_init__(self) -> None:
        cleaned = {}
        for label, mult in self.multiplicities.items():
            if label < 0 or mult < 0:
                raise ValueError(f"Labels and multiplicities must be nonnegative, got {label}: {mult}")
            if mult:
                cleaned[int(label)] = int(mult)
        object.__setattr__(self, "multiplicities", dict(sorted(cleaned.items())))

    @classmethod
    def irrep(cls, label: int, mult: int = 1) -> "FusionVector":
        return cls({label: mult})

    def multiplicity(self, label: int) -> int:
        return self.multiplicities.get(label, 0)

    def __add__(self, other: "FusionVector") -> "FusionVector":
        total = defaultdict(int, self.multiplicities)
        for label, mult in other.multiplicities.items():
            total[label] += mult
        return FusionVector(total)

    def __mul__(self, other: "FusionVector") -> "FusionVector":
        return fuse(self, other)

    def __hash__(self) -> int:
        return hash(tuple(self.multiplicities.items()))

    def to_dict(self) -> dict:
        return {f"r_{label}": mult for label, mult in self.multiplicities.items()}


def _fuse_with(a: FusionVector, b: FusionVector, step: int) -> FusionVector:
    out: dict[int, int] = defaultdict(int)
    for k, mk in a.multiplicities.items():
        for s, ms in b.multiplicities.items():
            for j in range(abs(k - s), k + s + 1, step):
                out[j] += mk * ms
    return FusionVector(out)


def fuse(a: FusionVector, b: FusionVector) -> FusionVector:
    """Bilinear extension of the SO(3) rule."""
    return _fuse_with(a, b, 1)


def su2_fuse(a: FusionVector, b: FusionVector) -> FusionVector:
    """SU(2) rule on twice-spin labels: ``V_a ⊗ V_b = V_{|a-b|} + V_{|a-b|+2} + ... + V_{a+b}``."""
    return _fuse_with(a, b, 2)


FUNDAMENTAL = FusionVector({0: 1, 1: 1})
SPIN_HALF = FusionVector({1: 1})


def fundamental_power(k: int) -> FusionVector:
    """``(r_0 + r_1)^{⊗k}``."""
    if k < 0:
        raise ValueError(f"Tensor power must be nonnegative, got {k}")
    out = FusionVector.irrep(0)
    for _ in range(k):
        out = fuse(out, FUNDAMENTAL)
    return out


def spin_half_power(m: int) -> FusionVector:
    """``V_{1/2}^{⊗m}`` over twice-spin labels."""
    if m < 0:
        raise ValueError(f"Tensor power must be nonnegative, got {m}")
    out = FusionVector.irrep(0)
    for _ in range(m):
        out = su2_fuse(out, SPIN_HALF)
    return out


def so3_dimension(label: int) -> int:
    return 2 * label + 1


def su2_dimension(label: int) -> int:
    return label + 1


def dimension(v: FusionVector, weight: Callable[[int], int] = so3_dimension) -> int:
    """``Σ mult · weight(label)``."""
    return sum(mult * weight(label) for label, mult in v.multiplicities.items())


def poincare_coefficients(k_max: int) -> list[int]:
    """Multiplicity of ``r_0`` in ``(r_0 + r_1)^{⊗k}`` for ``k = 0 .. k_max``."""
    if k_max < 0:
        raise ValueError(f"k_max must be nonnegative, got {k_max}")
    coefficients = []
    power = FusionVector.irrep(0)
    for k in range(k_max + 1):
        if k:
            power = fuse(power, FUNDAMENTAL)
        coefficients.append(power.multiplicity(0))
    return coefficients


def clebsch_gordan_moments(k_max: int) -> list[int]:
    """Trivial multiplicity in ``V_{1/2}^{⊗2k}``: the even moments of the SU(2) character."""
    if k_max < 0:
        raise ValueError(f"k_max must be nonnegative, got {k_max}")
    moments = []
    power = FusionVector.irrep(0)
    for k in range(k_max + 1):
        if k:
            power = su2_fuse(su2_fuse(power, SPIN_HALF), SPIN_HALF)
        moments.append(power.multiplicity(0))
    return moments
