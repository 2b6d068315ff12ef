import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from riswipt.bounds import (DegenerateAnchor, DomainError, augmentation_matrix,
                            augmented_rate, augmented_rate_minorant,
                            energy_power_majorant, pairs_to_reals,
                            product_majorant, rate_log_minorant, rate_minorant,
                            reals_to_pairs, zf_rate_minorant)
from surrogate_checks import run_suite


def test_surrogate_suite_small():
    results = run_suite(seed=123, scalar_anchors=10, scalar_samples=500,
                        matrix_anchors=10, matrix_samples=20)
    for name, (tan, dirv) in results.items():
        assert tan <= 1e-8, f"{name}: tangency error {tan:.2e}"
        assert dirv <= 1e-9, f"{name}: bound direction violated by {dirv:.2e}"


@given(vb=st.floats(0.01, 10.0), yb=st.floats(0.01, 10.0),
       v=st.floats(0.0, 12.0), y=st.floats(0.005, 12.0))
@settings(max_examples=200, deadline=None)
def test_rate_log_minorant_property(vb, yb, v, y):
    sur = rate_log_minorant(vb, yb)
    true = np.log1p(v ** 2 / y)
    assert sur.value([v, y]) <= true + 1e-9 * max(1.0, true)


@given(gb=st.floats(0.01, 10.0), tb=st.floats(0.5, 10.0),
       g=st.floats(0.0, 12.0), t=st.floats(0.0, 12.0))
@settings(max_examples=200, deadline=None)
def test_product_majorant_property(gb, tb, g, t):
    sur = product_majorant(gb, tb)
    assert sur.value([g, t]) >= g * t - 1e-9 * max(1.0, g * t)


def test_domain_errors():
    with pytest.raises(DomainError):
        rate_log_minorant(-1.0, 1.0)
    with pytest.raises(DomainError):
        rate_log_minorant(1.0, 0.0)
    with pytest.raises(DomainError):
        product_majorant(0.0, 1.0)
    with pytest.raises(DomainError):
        zf_rate_minorant(1.0, 0.0)
    with pytest.raises(DomainError):
        rate_minorant([1.0, 1.0], 0, [1.0, 1.0], -1.0)
    with pytest.raises(DegenerateAnchor):
        energy_power_majorant([1.0, 1.0], [0.0, 0.0])


def test_pairs_roundtrip():
    rng = np.random.default_rng(0)
    pairs = rng.standard_normal((5, 2)) + 1j * rng.standard_normal((5, 2))
    z = pairs_to_reals(pairs)
    assert z.shape == (20,)
    assert np.allclose(reals_to_pairs(z), pairs)


def test_augmentation_matrix_structure():
    V = augmentation_matrix(1.0 + 2.0j, 0.5 - 1.0j)
    assert V[0, 0] == np.conj(V[1, 1])
    assert V[0, 1] == np.conj(V[1, 0])


def test_augmented_rate_reduces_to_proper_rate():
    """With zero conjugate branches the widely-linear rate is twice the
    ordinary interference-limited rate."""
    rng = np.random.default_rng(1)
    K = 4
    h = rng.standard_normal(K) + 1j * rng.standard_normal(K)
    p = rng.uniform(0.2, 1.5, size=K)
    pairs = np.column_stack([p.astype(complex), np.zeros(K, dtype=complex)])
    sigma = 0.7
    for k in range(K):
        g = np.abs(h) ** 2
        interf = float(np.sum(np.delete(g * p ** 2, k))) + sigma
        proper = np.log1p(g[k] * p[k] ** 2 / interf)
        assert augmented_rate(pairs, k, h, sigma) == pytest.approx(2.0 * proper,
                                                                   rel=1e-10)


def test_augmented_minorant_zero_conjugate_gradient():
    """At a zero conjugate branch the linear term has no conjugate-direction
    component, so that point is a stationary point of the surrogate scheme."""
    rng = np.random.default_rng(2)
    K = 3
    h = rng.standard_normal(K) + 1j * rng.standard_normal(K)
    p = rng.uniform(0.2, 1.5, size=K)
    pairs = np.column_stack([p.astype(complex), np.zeros(K, dtype=complex)])
    sur = augmented_rate_minorant(pairs, 1, h, 1.0)
    conj_idx = np.where(np.arange(4 * K) % 4 >= 2)[0]
    assert np.allclose(sur.linear[conj_idx], 0.0, atol=1e-12)


def test_minorant_quadratic_psd():
    rng = np.random.default_rng(3)
    K = 3
    h = rng.standard_normal(K) + 1j * rng.standard_normal(K)
    pairs = (rng.standard_normal((K, 2)) + 1j * rng.standard_normal((K, 2)))
    sur = augmented_rate_minorant(pairs, 0, h, 0.5)
    ev = np.linalg.eigvalsh(0.5 * (sur.quad + sur.quad.T))
    assert ev[0] >= -1e-10
