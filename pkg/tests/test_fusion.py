import sys, os; sys.path.insert(0, os.path.abspath(os.path.join(os.path.dirname(__file__), "..")))
import random

import pytest

from logic.fusion import (
    FUNDAMENTAL,
    FusionVector,
    clebsch_gordan_moments,
    dimension,
    fundamental_power,
    fuse,
    poincare_coefficients,
    spin_half_power,
    su2_dimension,
    su2_fuse,
)
from logic.moments import catalan


def r(label, mult=1):
    return FusionVector.irrep(label, mult)


def test_fuse_examples():
    assert fuse(r(0), r(5)) == r(5)
    assert fuse(r(1), r(1)) == FusionVector({0: 1, 1: 1, 2: 1})
    assert fuse(r(2), r(3)) == FusionVector({k: 1 for k in range(1, 6)})
    assert r(1) * r(1) == fuse(r(1), r(1))


def test_fusion_vector_cleanup_and_validation():
    v = FusionVector({3: 0, 1: 2})
    assert v.multiplicities == {1: 2}
    assert v.multiplicity(7) == 0
    assert (r(1) + r(1, 2)).multiplicity(1) == 3
    assert v.to_dict() == {"r_1": 2}
    assert hash(FusionVector({1: 2, 0: 1})) == hash(FusionVector({0: 1, 1: 2}))
    with pytest.raises(ValueError):
        FusionVector({1: -1})
    with pytest.raises(ValueError):
        FusionVector({-1: 1})


def test_fuse_is_commutative_and_associative():
    rng = random.Random(3)
    for _ in range(20):
        a, b, c = (
            FusionVector({rng.randint(0, 10): rng.randint(1, 3) for _ in range(3)}) for _ in range(3)
        )
        assert fuse(a, b) == fuse(b, a)
        assert fuse(fuse(a, b), c) == fuse(a, fuse(b, c))
        assert fuse(r(0), a) == a


def test_fundamental_powers():
    assert fundamental_power(0) == r(0)
    assert fundamental_power(1) == FUNDAMENTAL
    assert fundamental_power(2) == FusionVector({0: 2, 1: 3, 2: 1})
    assert fundamental_power(3) == FusionVector({0: 5, 1: 9, 2: 5, 3: 1})
    with pytest.raises(ValueError):
        fundamental_power(-1)


def test_poincare_coefficients_are_catalan():
    assert poincare_coefficients(0) == [1]
    assert poincare_coefficients(4) == [1, 1, 2, 5, 14]
    assert poincare_coefficients(10)[10] == 16796
    assert poincare_coefficients(15) == [catalan(k) for k in range(16)]
    with pytest.raises(ValueError):
        poincare_coefficients(-1)


def test_dimension_homomorphism():
    for m in range(13):
        assert dimension(fundamental_power(m)) == 4 ** m
    for a, b in [(r(2), r(3)), (FUNDAMENTAL, r(4, 2))]:
        assert dimension(fuse(a, b)) == dimension(a) * dimension(b)


def test_truncation():
    for k in range(10):
        power = fundamental_power(k)
        assert max(power.multiplicities) == k
        assert all(power.multiplicity(j) == 0 for j in range(k + 1, k + 5))


def test_su2_rule_and_clebsch_gordan_moments():
    assert su2_fuse(r(1), r(1)) == FusionVector({0: 1, 2: 1})
    assert su2_fuse(r(2), r(3)) == FusionVector({1: 1, 3: 1, 5: 1})
    assert clebsch_gordan_moments(15) == [catalan(k) for k in range(16)]
    for m in range(10):
        assert dimension(spin_half_power(m), su2_dimension) == 2 ** m
    with pytest.raises(ValueError):
        clebsch_gordan_moments(-1)
