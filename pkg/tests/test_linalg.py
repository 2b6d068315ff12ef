import numpy as np
import pytest

from riswipt.linalg import (ConvergenceFailure, NotPositiveDefinite, cholesky,
                            dominant_eigenvalue, hermitian_inverse,
                            hermitian_solve, hermitianize, logdet,
                            trace_of_inverse)


def random_hpd(rng, n, ridge=0.1):
    A = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    return hermitianize(A @ A.conj().T + ridge * np.eye(n))


def test_hermitianize_properties():
    rng = np.random.default_rng(0)
    A = rng.standard_normal((5, 5)) + 1j * rng.standard_normal((5, 5))
    H = hermitianize(A)
    assert np.allclose(H, H.conj().T)
    assert np.all(H.diagonal().imag == 0.0)
    assert np.allclose(hermitianize(H), H)


def test_cholesky_matches_numpy():
    rng = np.random.default_rng(1)
    for n in (1, 2, 5, 12):
        A = random_hpd(rng, n)
        L = cholesky(A)
        assert np.allclose(L, np.tril(L))
        assert np.allclose(L @ L.conj().T, A, atol=1e-10 * np.max(np.abs(A)))
        assert np.allclose(L, np.linalg.cholesky(A))


def test_cholesky_rejects_indefinite():
    with pytest.raises(NotPositiveDefinite):
        cholesky(np.array([[1.0, 0.0], [0.0, -1.0]]))
    with pytest.raises(NotPositiveDefinite):
        cholesky(np.ones((3, 3)))  # rank one, singular


def test_cholesky_scale_invariance():
    rng = np.random.default_rng(2)
    A = random_hpd(rng, 4)
    for s in (1e-12, 1e12):
        L = cholesky(s * A)
        assert np.allclose(L @ L.conj().T, s * A, rtol=1e-12)


def test_inverse_and_solve():
    rng = np.random.default_rng(3)
    A = random_hpd(rng, 6)
    inv = hermitian_inverse(A)
    assert np.allclose(A @ inv, np.eye(6), atol=1e-10)
    b = rng.standard_normal(6) + 1j * rng.standard_normal(6)
    z = hermitian_solve(A, b)
    assert np.allclose(A @ z, b)


def test_trace_of_inverse_and_logdet():
    rng = np.random.default_rng(4)
    A = random_hpd(rng, 7)
    assert trace_of_inverse(A) == pytest.approx(
        np.trace(np.linalg.inv(A)).real, rel=1e-10)
    sign, ld = np.linalg.slogdet(A)
    assert sign == pytest.approx(1.0)
    assert logdet(A) == pytest.approx(ld, rel=1e-10)


def test_dominant_eigenvalue_matches_eigh():
    rng = np.random.default_rng(5)
    for n in (2, 5, 20):
        A = random_hpd(rng, n)
        lam = dominant_eigenvalue(A)
        assert lam == pytest.approx(np.linalg.eigvalsh(A)[-1], rel=1e-7)


def test_dominant_eigenvalue_edge_cases():
    assert dominant_eigenvalue(np.zeros((3, 3))) == 0.0
    # start vector orthogonal to the dominant eigenvector: ones is in the
    # null space of diag(1, -1)-style splits, forcing the deterministic reseed
    A = np.diag([1.0, 1.0, 4.0]) - 0.0
    v = np.array([1.0, -1.0, 0.0])
    A = A + 0.0 * np.outer(v, v)
    assert dominant_eigenvalue(A) == pytest.approx(4.0, rel=1e-8)


def test_non_finite_rejected():
    with pytest.raises(ValueError):
        hermitianize(np.array([[np.inf, 0.0], [0.0, 1.0]]))
