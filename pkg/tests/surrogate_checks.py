"""Tangency / bound-direction checks for every surrogate builder, shared by
the unit tests (small sizes) and the acceptance gate (full sizes).

Each checker returns (max_tangency_error, max_direction_violation), where a
direction violation is how far a lower bound pokes above the true value (or
an upper bound below it), scaled by max(1, |true value|).
"""

import numpy as np

from riswipt.bounds import (augmented_rate, augmented_rate_minorant,
                            energy_power_majorant, logdet_pair_minorant,
                            pairs_to_reals, product_majorant, rate_log_minorant,
                            rate_minorant, trace_ratio_minorant,
                            zf_rate_minorant)
from riswipt.linalg import hermitian_inverse, hermitianize, logdet


def _scale(v):
    return np.maximum(1.0, np.abs(v))


def _quad_values(sur, Z, sign):
    """Vectorized constant + linear.z +/- z^T Q z over rows of Z."""
    return (sur.constant + Z @ sur.linear
            + sign * np.einsum("ij,jk,ik->i", Z, sur.quad, Z))


def check_rate_log_minorant(rng, n_anchors, n_samples):
    tan = dirv = 0.0
    for _ in range(n_anchors):
        vb, yb = rng.uniform(0.05, 5.0, size=2)
        sur = rate_log_minorant(vb, yb)
        tan = max(tan, abs(sur.value([vb, yb]) - np.log1p(vb ** 2 / yb)))
        V = rng.uniform(0.0, 6.0, size=n_samples)
        Y = rng.uniform(0.01, 6.0, size=n_samples)
        true = np.log1p(V ** 2 / Y)
        got = _quad_values(sur, np.column_stack([V, Y]), -1.0)
        dirv = max(dirv, float(np.max((got - true) / _scale(true))))
    return tan, dirv


def check_zf_rate_minorant(rng, n_anchors, n_samples):
    tan = dirv = 0.0
    for _ in range(n_anchors):
        sigma = rng.uniform(0.05, 3.0)
        pb = rng.uniform(0.05, 4.0)
        sur = zf_rate_minorant(pb, sigma)
        tan = max(tan, abs(sur.value([pb]) - np.log1p(pb ** 2 / sigma)))
        P = rng.uniform(0.0, 6.0, size=n_samples)
        true = np.log1p(P ** 2 / sigma)
        got = _quad_values(sur, P[:, None], -1.0)
        dirv = max(dirv, float(np.max((got - true) / _scale(true))))
    return tan, dirv


def check_rate_minorant(rng, n_anchors, n_samples, K=4):
    tan = dirv = 0.0
    for _ in range(n_anchors):
        g = rng.uniform(0.1, 8.0, size=K)
        sigma = rng.uniform(0.1, 2.0)
        k = int(rng.integers(K))
        pb = rng.uniform(0.05, 3.0, size=K)
        sur = rate_minorant(pb, k, g, sigma)

        def true_rate(P):
            sig = g[k] * P[:, k] ** 2
            interf = (P ** 2) @ g - g[k] * P[:, k] ** 2 + sigma
            return np.log1p(sig / interf)

        tan = max(tan, abs(sur.value(pb) - true_rate(pb[None, :])[0]))
        P = rng.uniform(0.0, 4.0, size=(n_samples, K))
        true = true_rate(P)
        got = _quad_values(sur, P, -1.0)
        dirv = max(dirv, float(np.max((got - true) / _scale(true))))
    return tan, dirv


def check_energy_power_majorant(rng, n_anchors, n_samples, K_E=3):
    tan = dirv = 0.0
    for _ in range(n_anchors):
        w = rng.uniform(0.1, 5.0, size=K_E)
        xb = rng.uniform(0.05, 3.0, size=K_E)
        sur = energy_power_majorant(w, xb)
        tan = max(tan, abs(sur.value(xb) - w @ xb))
        X = rng.uniform(0.0, 5.0, size=(n_samples, K_E))
        true = X @ w
        got = _quad_values(sur, X, +1.0)
        dirv = max(dirv, float(np.max((true - got) / _scale(true))))
    return tan, dirv


def check_product_majorant(rng, n_anchors, n_samples):
    tan = dirv = 0.0
    for _ in range(n_anchors):
        gb = rng.uniform(0.05, 4.0)
        tb = rng.uniform(1.0, 6.0)
        sur = product_majorant(gb, tb)
        tan = max(tan, abs(sur.value([gb, tb]) - gb * tb))
        G = rng.uniform(0.0, 5.0, size=n_samples)
        T = rng.uniform(0.0, 8.0, size=n_samples)
        true = G * T
        got = _quad_values(sur, np.column_stack([G, T]), +1.0)
        dirv = max(dirv, float(np.max((true - got) / _scale(true))))
    return tan, dirv


def _random_pd(rng, n, ridge=0.2):
    A = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    return hermitianize(A @ A.conj().T / n + ridge * np.eye(n))


def check_trace_ratio_minorant(rng, n_anchors, n_samples, n=3, r=2):
    tan = dirv = 0.0
    for _ in range(n_anchors):
        Vb = rng.standard_normal((n, r)) + 1j * rng.standard_normal((n, r))
        Yb = _random_pd(rng, n)
        true_b = float(np.real(np.trace(Vb @ Vb.conj().T @ hermitian_inverse(Yb))))
        tan = max(tan, abs(trace_ratio_minorant(Vb, Yb, Vb, Yb) - true_b))
        for _ in range(n_samples):
            V = rng.standard_normal((n, r)) + 1j * rng.standard_normal((n, r))
            Y = _random_pd(rng, n)
            true = float(np.real(np.trace(V @ V.conj().T @ hermitian_inverse(Y))))
            got = trace_ratio_minorant(V, Y, Vb, Yb)
            dirv = max(dirv, (got - true) / max(1.0, abs(true)))
    return tan, dirv


def check_logdet_pair_minorant(rng, n_anchors, n_samples):
    tan = dirv = 0.0

    def true_val(V, Y):
        return logdet(hermitianize(V @ V.conj().T + Y)) - logdet(Y)

    for _ in range(n_anchors):
        Vb = rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2))
        Yb = _random_pd(rng, 2)
        tan = max(tan, abs(logdet_pair_minorant(Vb, Yb, Vb, Yb) - true_val(Vb, Yb)))
        for _ in range(n_samples):
            V = rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2))
            Y = _random_pd(rng, 2)
            true = true_val(V, Y)
            got = logdet_pair_minorant(V, Y, Vb, Yb)
            dirv = max(dirv, (got - true) / max(1.0, abs(true)))
    return tan, dirv


def check_augmented_rate_minorant(rng, n_anchors, n_samples, K=3):
    tan = dirv = 0.0
    for _ in range(n_anchors):
        h = rng.standard_normal(K) + 1j * rng.standard_normal(K)
        sigma = rng.uniform(0.2, 2.0)
        k = int(rng.integers(K))
        pb = (rng.standard_normal((K, 2)) + 1j * rng.standard_normal((K, 2))) * 0.7
        sur = augmented_rate_minorant(pb, k, h, sigma)
        true_b = augmented_rate(pb, k, h, sigma)
        tan = max(tan, abs(sur.value(pairs_to_reals(pb)) - true_b))
        for _ in range(n_samples):
            p = (rng.standard_normal((K, 2)) + 1j * rng.standard_normal((K, 2))) * 0.9
            true = augmented_rate(p, k, h, sigma)
            got = sur.value(pairs_to_reals(p))
            dirv = max(dirv, (got - true) / max(1.0, abs(true)))
    return tan, dirv


SCALAR_CHECKS = (check_rate_log_minorant, check_zf_rate_minorant,
                 check_rate_minorant, check_energy_power_majorant,
                 check_product_majorant)
MATRIX_CHECKS = (check_trace_ratio_minorant, check_logdet_pair_minorant,
                 check_augmented_rate_minorant)


def run_suite(seed, scalar_anchors, scalar_samples, matrix_anchors,
              matrix_samples):
    """Run every check; returns {name: (tangency, direction violation)}."""
    out = {}
    for fn in SCALAR_CHECKS:
        out[fn.__name__[6:]] = fn(np.random.default_rng(seed),
                                  scalar_anchors, scalar_samples)
    for fn in MATRIX_CHECKS:
        out[fn.__name__[6:]] = fn(np.random.default_rng(seed + 1),
                                  matrix_anchors, matrix_samples)
    return out
