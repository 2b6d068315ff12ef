"""Dense complex Hermitian linear-algebra kernel.

All matrices inverted here are Gram matrices or ridge-regularized Grams,
hence Hermitian positive definite; everything goes through a Cholesky
factorization with a scale-invariant positive-definiteness guard.
"""

import numpy as np
from scipy.linalg import solve_triangular


class NotPositiveDefinite(Exception):
    """Cholesky pivot fell below dim * eps * max(diagonal)."""


class ConvergenceFailure(Exception):
    """Power iteration did not reach the residual tolerance."""


def _as_complex(a):
    a = np.asarray(a, dtype=complex)
    if not np.all(np.isfinite(a.real)) or not np.all(np.isfinite(a.imag)):
        raise ValueError("non-finite entries")
    return a


def hermitianize(a):
    """Return (A + A^H)/2 with an exactly real diagonal."""
    a = _as_complex(a)
    h = 0.5 * (a + a.conj().T)
    np.fill_diagonal(h, h.diagonal().real)
    return h


def cholesky(a):
    """Lower Cholesky factor of a Hermitian PD matrix.

    Raises NotPositiveDefinite when a pivot is <= dim * eps * max-diagonal.
    """
    a = _as_complex(a)
    n = a.shape[0]
    tol = n * np.finfo(float).eps * max(np.max(a.diagonal().real), 0.0)
    L = np.zeros_like(a)
    for j in range(n):
        pivot = (a[j, j] - L[j, :j] @ L[j, :j].conj()).real
        if pivot <= tol:
            raise NotPositiveDefinite(f"pivot {pivot:.3e} at column {j}")
        L[j, j] = np.sqrt(pivot)
        if j + 1 < n:
            L[j + 1:, j] = (a[j + 1:, j] - L[j + 1:, :j] @ L[j, :j].conj()) / L[j, j]
    return L


def hermitian_inverse(a):
    """Inverse of a Hermitian PD matrix via Cholesky and triangular solves."""
    a = _as_complex(a)
    L = cholesky(a)
    eye = np.eye(a.shape[0], dtype=complex)
    w = solve_triangular(L, eye, lower=True)
    inv = solve_triangular(L.conj().T, w, lower=False)
    return hermitianize(inv)


def hermitian_solve(a, b):
    """Solve A z = b for Hermitian PD A."""
    L = cholesky(_as_complex(a))
    w = solve_triangular(L, np.asarray(b, dtype=complex), lower=True)
    return solve_triangular(L.conj().T, w, lower=False)


def trace_of_inverse(a):
    """trace(A^{-1}) for Hermitian PD A, returned as a real scalar."""
    t = np.trace(hermitian_inverse(a))
    assert abs(t.imag) <= 1e-12 * max(1.0, abs(t.real))
    return t.real


def logdet(a):
    """ln det(A) for Hermitian PD A, via the Cholesky diagonal."""
    L = cholesky(_as_complex(a))
    return 2.0 * float(np.sum(np.log(L.diagonal().real)))


def dominant_eigenvalue(a, max_iter=10000, tol=1e-9):
    """Largest eigenvalue of a Hermitian PSD matrix by power iteration.

    Deterministic all-ones start, shift-free.  The residual criterion is
    ||A v - lam v|| <= tol * ||A||_F.
    """
    a = hermitianize(a)
    n = a.shape[0]
    scale = np.linalg.norm(a)
    if scale == 0.0:
        return 0.0
    v = np.ones(n, dtype=complex) / np.sqrt(n)
    lam = 0.0
    for _ in range(max_iter):
        w = a @ v
        nw = np.linalg.norm(w)
        if nw <= 1e-14 * scale:
            # start vector (numerically) in the null space; deterministic re-seed
            v = np.cos(np.arange(1, n + 1, dtype=float)) + 1j * np.sin(np.arange(1, n + 1) ** 2 / n)
            v = v / np.linalg.norm(v)
            continue
        v = w / nw
        lam = (v.conj() @ a @ v).real
        if np.linalg.norm(a @ v - lam * v) <= tol * scale:
            return float(max(lam, 0.0))
    raise ConvergenceFailure(f"residual tolerance unmet after {max_iter} iterations")
