import sys, os; sys.path.insert(0, os.path.abspath(os.path.join(os.path.dirname(__file__), "..")))
import numpy as np
import pytest

from logic.linalg import (
    add,
    adjoint,
    as_matrix,
    commutator_norm,
    hermitian_eigenvalues,
    identity,
    is_hermitian,
    is_projection,
    jacobi_eigenvalues,
    matrix_power,
    mul,
    normalized_trace,
    scalar_mul,
    sub,
    trace,
    zeros,
)


def _random_matrix(rng, d):
    return as_matrix(rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d)))


def _random_hermitian(rng, d):
    m = _random_matrix(rng, d)
    return as_matrix(m + adjoint(m))


def _random_unitary(rng, d):
    q, _ = np.linalg.qr(_random_matrix(rng, d))
    return as_matrix(q)


def test_as_matrix_rejects_bad_input():
    with pytest.raises(ValueError):
        as_matrix([1, 2, 3])
    with pytest.raises(ValueError):
        as_matrix([[np.nan]])
    m = as_matrix([[1, 2], [3, 4]])
    assert m.dtype == np.complex128
    assert not m.flags.writeable


def test_ring_operations():
    rng = np.random.default_rng(0)
    m, n = _random_matrix(rng, 3), _random_matrix(rng, 3)
    assert np.allclose(mul(identity(3), m), m)
    assert np.allclose(adjoint(adjoint(m)), m)
    assert np.allclose(adjoint(mul(m, n)), mul(adjoint(n), adjoint(m)))
    assert np.allclose(sub(add(m, n), n), m)
    assert np.allclose(scalar_mul(2j, m), 2j * np.asarray(m))
    assert np.allclose(matrix_power(m, 3), m @ m @ m)
    with pytest.raises(ValueError):
        add(m, identity(2))
    with pytest.raises(ValueError):
        mul(as_matrix(np.ones((2, 3))), as_matrix(np.ones((2, 3))))


def test_is_projection():
    assert is_projection(zeros(2))
    assert is_projection(as_matrix(np.diag([1, 0])))
    assert not is_projection(as_matrix([[0, 1], [0, 0]]))
    with pytest.raises(ValueError):
        is_projection(as_matrix(np.ones((2, 3))))


def test_traces():
    assert normalized_trace(identity(4)) == 1
    assert normalized_trace(as_matrix(np.diag([4, 0, 0, 0]))) == 1
    rng = np.random.default_rng(1)
    m, u = _random_matrix(rng, 4), _random_unitary(rng, 4)
    assert abs(trace(u @ m @ adjoint(u)) - trace(m)) < 1e-12
    a, b = _random_matrix(rng, 4), _random_matrix(rng, 4)
    assert abs(trace(a @ b) - trace(b @ a)) < 1e-12


def test_hermitian_eigenvalue_examples():
    assert hermitian_eigenvalues(as_matrix(np.diag([3, 1, 2]))) == [1.0, 2.0, 3.0]
    assert hermitian_eigenvalues(as_matrix([[0, 1], [1, 0]])) == pytest.approx([-1.0, 1.0], abs=1e-12)


def test_hermitian_eigenvalues_match_quadratic_roots():
    rng = np.random.default_rng(2)
    for _ in range(10):
        m = np.asarray(_random_hermitian(rng, 2))
        a, d = m[0, 0].real, m[1, 1].real
        b2 = abs(m[0, 1]) ** 2
        disc = np.sqrt((a - d) ** 2 + 4 * b2)
        expected = [(a + d - disc) / 2, (a + d + disc) / 2]
        assert hermitian_eigenvalues(as_matrix(m)) == pytest.approx(expected, abs=1e-8)


def test_hermitian_eigenvalues_match_cubic_roots():
    rng = np.random.default_rng(3)
    for _ in range(10):
        m = np.asarray(_random_hermitian(rng, 3))
        # λ³ - c2 λ² + c1 λ - c0 with c2 = tr, c1 = sum of principal 2x2 minors, c0 = det
        c2 = np.trace(m).real
        c1 = 0.5 * (np.trace(m) ** 2 - np.trace(m @ m)).real
        c0 = np.linalg.det(m).real
        roots = sorted(np.roots([1.0, -c2, c1, -c0]).real)
        assert hermitian_eigenvalues(as_matrix(m)) == pytest.approx(roots, abs=1e-8)


def test_eigenvalues_of_projection_are_zero_or_one():
    rng = np.random.default_rng(4)
    z = rng.standard_normal((5, 2)) + 1j * rng.standard_normal((5, 2))
    q, _ = np.linalg.qr(z)
    p = as_matrix(q @ np.conj(q).T)
    assert is_projection(p)
    values = hermitian_eigenvalues(p)
    assert values == pytest.approx([0, 0, 0, 1, 1], abs=1e-8)


def test_jacobi_history_is_monotone_and_trace_is_preserved():
    rng = np.random.default_rng(5)
    m = _random_hermitian(rng, 8)
    values, history = jacobi_eigenvalues(m)
    assert history
    for before, after in zip(history, history[1:]):
        assert after <= before * (1 + 1e-9) + 1e-15
    assert abs(values.sum() - trace(m).real) < 1e-10 * 8


def test_jacobi_raises_without_convergence():
    with pytest.raises(RuntimeError):
        jacobi_eigenvalues(as_matrix([[0, 1], [1, 0]]), max_sweeps=0)


def test_non_hermitian_input_rejected():
    with pytest.raises(ValueError):
        hermitian_eigenvalues(as_matrix([[0, 1], [0, 0]]))
    assert not is_hermitian(as_matrix([[0, 1j], [1j, 0]]))


def test_commutator_norm():
    p = as_matrix(np.diag([1, 0]))
    q = as_matrix(0.5 * np.ones((2, 2)))
    assert commutator_norm(p, p) == 0.0
    assert commutator_norm(p, q) > 0.0
