"""Tangent surrogate builders driving the successive convex approximation.

Every function here returns either a scalar bound value or an explicit
quadratic expression over real-stacked decision variables, tangent to the
true function at the supplied anchor:

* minorants (lower bounds) of the concave-side rate expressions, shaped
  ``constant + linear . z - z^T Q z`` with Q PSD;
* majorants (upper bounds) of the convex-side power/product terms, shaped
  ``constant + linear . z + z^T Q z`` with Q PSD.
"""

from dataclasses import dataclass

import numpy as np

from .linalg import hermitian_inverse, logdet


class DomainError(Exception):
    pass


class DegenerateAnchor(Exception):
    pass


@dataclass
class QuadraticSurrogate:
    """Concave quadratic lower bound: value(z) = constant + linear.z - z^T quad z."""

    constant: float
    linear: np.ndarray
    quad: np.ndarray  # PSD

    def value(self, z):
        z = np.asarray(z, dtype=float)
        return self.constant + self.linear @ z - z @ self.quad @ z


@dataclass
class ConvexQuadraticExpr:
    """Convex quadratic upper bound: value(z) = constant + linear.z + z^T quad z."""

    constant: float
    linear: np.ndarray
    quad: np.ndarray  # PSD

    def value(self, z):
        z = np.asarray(z, dtype=float)
        return self.constant + self.linear @ z + z @ self.quad @ z


def _trace(a):
    return np.trace(a)


def trace_ratio_minorant(V, Y, anchor_V, anchor_Y):
    """Lower bound on tr(V V^H Y^{-1}), tangent at (anchor_V, anchor_Y).

    The map (V, Y) -> tr(V V^H Y^{-1}) is jointly convex for PD Y, so its
    linearization never exceeds it.
    """
    V = np.asarray(V, dtype=complex)
    Y_inv_bar = hermitian_inverse(np.asarray(anchor_Y, dtype=complex))
    Vb = np.asarray(anchor_V, dtype=complex)
    term1 = 2.0 * np.real(_trace(Vb.conj().T @ Y_inv_bar @ V))
    term2 = np.real(_trace(Vb @ Vb.conj().T @ Y_inv_bar @ np.asarray(Y, dtype=complex) @ Y_inv_bar))
    return float(term1 - term2)


def rate_log_minorant(anchor_v, anchor_y):
    """Concave quadratic minorant of ln(1 + v^2/y) over z = (v, y)."""
    if anchor_v <= 0.0 or anchor_y <= 0.0:
        raise DomainError("anchors must be positive")
    vb, yb = float(anchor_v), float(anchor_y)
    c = vb ** 2 / (yb * (yb + vb ** 2))
    constant = np.log1p(vb ** 2 / yb) - vb ** 2 / yb
    linear = np.array([2.0 * vb / yb, -c])
    quad = np.diag([c, 0.0])
    return QuadraticSurrogate(constant=float(constant), linear=linear, quad=quad)


def logdet_pair_minorant(V, Y, anchor_V, anchor_Y):
    """Lower bound on ln|I_2 + V V^H Y^{-1}| for 2x2 blocks, tangent at the anchor."""
    V = np.asarray(V, dtype=complex)
    Y = np.asarray(Y, dtype=complex)
    Vb = np.asarray(anchor_V, dtype=complex)
    Yb = np.asarray(anchor_Y, dtype=complex)
    Yb_inv = hermitian_inverse(Yb)
    gram_bar = Vb @ Vb.conj().T
    # ln|I + G Y^{-1}| = ln|G + Y| - ln|Y|, both PD
    base = logdet(gram_bar + Yb) - logdet(Yb)
    C = Yb_inv - hermitian_inverse(gram_bar + Yb)
    val = (base
           - np.real(_trace(gram_bar @ Yb_inv))
           - np.real(_trace(C.conj().T @ (V @ V.conj().T + Y)))
           + 2.0 * np.real(_trace(Vb.conj().T @ Yb_inv @ V)))
    return float(val)


def energy_power_majorant(weights, anchor_x):
    """Convex quadratic upper bound on the linear energy power pi_E(x) = w.x.

    Returns ((w.x)^2 / pi_bar + pi_bar)/2 as an expression over x; tangent and
    equal to pi_E at the anchor.
    """
    w = np.asarray(weights, dtype=float)
    pi_bar = float(w @ np.asarray(anchor_x, dtype=float))
    if pi_bar <= 0.0:
        raise DegenerateAnchor("anchor energy power is zero")
    quad = np.outer(w, w) / (2.0 * pi_bar)
    return ConvexQuadraticExpr(constant=0.5 * pi_bar, linear=np.zeros_like(w), quad=quad)


def product_majorant(anchor_gamma, anchor_t2):
    """Convex quadratic upper bound on gamma * t2 over z = (gamma, t2)."""
    gb, tb = float(anchor_gamma), float(anchor_t2)
    if gb <= 0.0 or tb <= 0.0:
        raise DomainError("anchors must be positive")
    scale = gb * tb / 4.0
    quad = scale * np.array([[1.0 / gb ** 2, 1.0 / (gb * tb)],
                             [1.0 / (gb * tb), 1.0 / tb ** 2]])
    return ConvexQuadraticExpr(constant=0.0, linear=np.zeros(2), quad=quad)


def zf_rate_minorant(anchor_p0, sigma):
    """Concave quadratic minorant of ln(1 + p0^2/sigma) over z = (p0,)."""
    if sigma <= 0.0:
        raise DomainError("sigma must be positive")
    pb = float(anchor_p0)
    c = pb ** 2 / (sigma * (sigma + pb ** 2))
    constant = np.log1p(pb ** 2 / sigma) - pb ** 2 / sigma - c * sigma
    return QuadraticSurrogate(constant=float(constant),
                              linear=np.array([2.0 * pb / sigma]),
                              quad=np.array([[c]]))


def rate_minorant(anchor_p, k, gains, sigma):
    """Concave quadratic minorant of the interference-limited rate of user k.

    ``gains`` is the row |hbar_kj|^2 over transmitters j; the surrogate lives
    on the full power vector p.
    """
    if sigma <= 0.0:
        raise DomainError("sigma must be positive")
    p_bar = np.asarray(anchor_p, dtype=float)
    g = np.asarray(gains, dtype=float)
    K = p_bar.size
    interf = float(np.sum(np.delete(g * p_bar ** 2, k))) + sigma
    signal = g[k] * p_bar[k] ** 2
    rate_bar = np.log1p(signal / interf)
    b = g[k] * p_bar[k] / interf
    c = 1.0 / interf - 1.0 / (interf + signal)
    a = rate_bar - signal / interf - sigma * c
    linear = np.zeros(K)
    linear[k] = 2.0 * b
    quad = c * np.diag(g)
    return QuadraticSurrogate(constant=float(a), linear=linear, quad=quad)


# --- improper-Gaussian (augmented 2x2) machinery ---------------------------

def augmentation_matrix(p1, p2):
    """2x2 widely-linear coefficient matrix for one transmit pair."""
    return np.array([[p1, p2], [np.conj(p2), np.conj(p1)]], dtype=complex)


def pairs_to_reals(pairs):
    """Stack K complex pairs (p1, p2) into a 4K real vector."""
    pairs = np.asarray(pairs, dtype=complex).reshape(-1, 2)
    out = np.empty(4 * pairs.shape[0])
    out[0::4] = pairs[:, 0].real
    out[1::4] = pairs[:, 0].imag
    out[2::4] = pairs[:, 1].real
    out[3::4] = pairs[:, 1].imag
    return out


def reals_to_pairs(z):
    z = np.asarray(z, dtype=float)
    p1 = z[0::4] + 1j * z[1::4]
    p2 = z[2::4] + 1j * z[3::4]
    return np.column_stack([p1, p2])


def _pair_matrix(z4):
    return augmentation_matrix(z4[0] + 1j * z4[1], z4[2] + 1j * z4[3])


def _quad_form_matrix(D):
    """Real 4x4 PSD matrix of p -> tr(V(p)^H D V(p)) by polarization."""
    basis = np.eye(4)
    def q(z):
        V = _pair_matrix(z)
        return np.real(np.trace(V.conj().T @ D @ V))
    M = np.empty((4, 4))
    qs = [q(basis[i]) for i in range(4)]
    for i in range(4):
        for j in range(i, 4):
            if i == j:
                M[i, i] = qs[i]
            else:
                M[i, j] = M[j, i] = 0.5 * (q(basis[i] + basis[j]) - qs[i] - qs[j])
    return M


def _linear_form_coeffs(G):
    """Real 4-vector of p -> 2*Re tr(G V(p))."""
    basis = np.eye(4)
    return np.array([2.0 * np.real(np.trace(G @ _pair_matrix(basis[i]))) for i in range(4)])


def augmented_rate(pairs, k, h_row, sigma):
    """ln|I_2 + S B^{-1}| for the widely-linear signal of user k (full value, not halved)."""
    pairs = np.asarray(pairs, dtype=complex).reshape(-1, 2)
    B = sigma * np.eye(2, dtype=complex)
    for j, h in enumerate(h_row):
        if j == k:
            continue
        X = np.diag([h, np.conj(h)]) @ augmentation_matrix(*pairs[j])
        B = B + X @ X.conj().T
    Xk = np.diag([h_row[k], np.conj(h_row[k])]) @ augmentation_matrix(*pairs[k])
    S = Xk @ Xk.conj().T
    return logdet(B + S) - logdet(B)


def augmented_rate_minorant(anchor_pairs, k, h_row, sigma):
    """Concave quadratic minorant of the augmented-rate ln-det of user k.

    Lives on the 4K real vector stacking (Re p1, Im p1, Re p2, Im p2) per
    transmitter; the quadratic part is block diagonal with PSD 4x4 blocks.
    """
    if sigma <= 0.0:
        raise DomainError("sigma must be positive")
    anchor_pairs = np.asarray(anchor_pairs, dtype=complex).reshape(-1, 2)
    K = anchor_pairs.shape[0]
    H = [np.diag([h, np.conj(h)]) for h in h_row]
    Vb = [augmentation_matrix(*anchor_pairs[j]) for j in range(K)]
    B = sigma * np.eye(2, dtype=complex)
    for j in range(K):
        if j == k:
            continue
        X = H[j] @ Vb[j]
        B = B + X @ X.conj().T
    B_inv = hermitian_inverse(B)
    Xk = H[k] @ Vb[k]
    S = Xk @ Xk.conj().T
    C = B_inv - hermitian_inverse(B + S)
    rho_bar = augmented_rate(anchor_pairs, k, h_row, sigma)
    a = rho_bar - np.real(np.trace(S @ B_inv)) - sigma * np.real(np.trace(C))

    linear = np.zeros(4 * K)
    G = Vb[k].conj().T @ H[k].conj().T @ B_inv @ H[k]
    linear[4 * k:4 * k + 4] = _linear_form_coeffs(G)

    quad = np.zeros((4 * K, 4 * K))
    for j in range(K):
        D = H[j].conj().T @ C @ H[j]
        quad[4 * j:4 * j + 4, 4 * j:4 * j + 4] = _quad_form_matrix(D)
    return QuadraticSurrogate(constant=float(a), linear=linear, quad=quad)
