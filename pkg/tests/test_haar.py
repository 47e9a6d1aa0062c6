import sys, os; sys.path.insert(0, os.path.abspath(os.path.join(os.path.dirname(__file__), "..")))
from fractions import Fraction

import numpy as np
import pytest

from logic.clifford import is_unitary
from logic.haar import (
    BLOCK_SIZE,
    HAAR_LABEL,
    SPHERE_LABEL,
    SeededSampler,
    double_factorial,
    measure_label,
    pair_moment_exact,
    sample_unit_sphere,
    sample_unitary,
    skew_basis,
    sphere_batch,
    sphere_moment_exact,
)
from logic.moments import catalan


def test_sampler_is_deterministic():
    a = SeededSampler(42).uniforms(0, 100, 4)
    b = SeededSampler(42).uniforms(0, 100, 4)
    assert np.array_equal(a, b)
    assert not np.array_equal(a, SeededSampler(42, 1).uniforms(0, 100, 4))
    assert not np.array_equal(a, SeededSampler(43).uniforms(0, 100, 4))


def test_uniforms_do_not_depend_on_chunking():
    sampler = SeededSampler(9)
    whole = sampler.uniforms(0, 2 * BLOCK_SIZE + 10, 3)
    piece = sampler.uniforms(BLOCK_SIZE - 5, 20, 3)
    assert np.array_equal(whole[BLOCK_SIZE - 5:BLOCK_SIZE + 15], piece)
    with pytest.raises(ValueError):
        sampler.uniforms(-1, 3, 2)


def test_sphere_samples_are_normalised():
    for s in (1, 2, 3, 4):
        xs = sphere_batch(s, SeededSampler(1), 0, 1000)
        assert xs.shape == (1000, 1 << s)
        assert np.max(np.abs(np.linalg.norm(xs, axis=1) - 1.0)) <= 1e-14


def test_sphere_sample_moments_by_symmetry():
    xs = sphere_batch(2, SeededSampler(2), 0, 100_000)
    stderr = xs.std(axis=0, ddof=1) / np.sqrt(len(xs))
    assert np.all(np.abs(xs.mean(axis=0)) <= 5 * stderr)
    squares = xs[:, 0] ** 2
    assert abs(squares.mean() - 0.25) <= 5 * squares.std(ddof=1) / np.sqrt(len(squares))


def test_low_rank_sphere_samples_are_unitary():
    sampler = SeededSampler(3)
    for s in (1, 2):
        for index in range(50):
            assert is_unitary(sample_unit_sphere(s, sampler, index))


def test_sample_unitary_higher_rank():
    sampler = SeededSampler(4)
    for s in (3, 4):
        for index in range(20):
            x = sample_unitary(s, sampler, index)
            assert x.is_real(1e-15)
            assert is_unitary(x)
            assert x.norm_squared() == pytest.approx(1.0)
    assert sample_unitary(3, sampler, 0).allclose(sample_unitary(3, sampler, 0), tol=0.0)


def test_sample_unitary_matches_sphere_sample_at_low_rank():
    sampler = SeededSampler(5)
    assert sample_unitary(2, sampler, 7).allclose(sample_unit_sphere(2, sampler, 7), tol=0.0)


def test_skew_basis():
    assert skew_basis(2) == (1, 2, 3)
    assert skew_basis(3) == (1, 2, 3, 4, 5, 6)


def test_measure_label():
    assert measure_label(2) == HAAR_LABEL
    assert measure_label(1) == SPHERE_LABEL
    assert measure_label(3) == SPHERE_LABEL


def test_sphere_moment_exact_examples():
    assert double_factorial(-1) == 1
    assert double_factorial(7) == 105
    assert sphere_moment_exact(4, 0) == 1
    assert sphere_moment_exact(4, 1) == Fraction(1, 4)
    assert sphere_moment_exact(4, 2) == Fraction(1, 8)
    assert 16 * sphere_moment_exact(4, 2) == 2
    assert sphere_moment_exact(8, 2) == Fraction(3, 80)
    assert 64 * sphere_moment_exact(8, 2) == Fraction(12, 5)
    with pytest.raises(ValueError):
        sphere_moment_exact(1, 2)
    with pytest.raises(ValueError):
        sphere_moment_exact(4, -1)


def test_catalan_chain_is_exact():
    for k in range(21):
        assert 4 ** k * sphere_moment_exact(4, k) == catalan(k)


def test_sphere_moment_exact_matches_monte_carlo():
    for s in (1, 2, 3):
        n = 1 << s
        xs = sphere_batch(s, SeededSampler(12, s), 0, 1_000_000)
        first = xs[:, 0]
        pair = xs[:, 0] ** 2 + xs[:, -1] ** 2
        for k in range(1, 5):
            values = first ** (2 * k)
            stderr = values.std(ddof=1) / np.sqrt(len(values))
            assert abs(values.mean() - float(sphere_moment_exact(n, k))) <= 5 * stderr
            values = pair ** k
            stderr = values.std(ddof=1) / np.sqrt(len(values))
            assert abs(values.mean() - float(pair_moment_exact(n, k))) <= 5 * stderr + 1e-12


def test_pair_moment_exact_examples():
    assert pair_moment_exact(8, 0) == 1
    assert pair_moment_exact(8, 1) == Fraction(1, 4)
    assert pair_moment_exact(8, 2) == Fraction(1, 10)
    assert all(pair_moment_exact(2, k) == 1 for k in range(6))
    assert pair_moment_exact(4, 3) == Fraction(2 * 4 * 6, 4 * 6 * 8)
    with pytest.raises(ValueError):
        pair_moment_exact(1, 2)
    with pytest.raises(ValueError):
        pair_moment_exact(4, -1)
