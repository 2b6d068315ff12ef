"""Shared machinery for the RIS phase optimizers.

All optimizers move the phase vector theta by maximizing, per element, a
real part Re{e^{j theta_n} c_n}; they differ only in how the coefficient
vector c and any quadratic correction are built.
"""

from dataclasses import dataclass, field

import numpy as np

from .channel import phasor, reduce_angles
from .linalg import dominant_eigenvalue, hermitian_inverse, hermitianize


class RankDeficient(Exception):
    pass


@dataclass
class PrcRunReport:
    theta_opt: np.ndarray
    objective_trace: list = field(default_factory=list)
    iterations: int = 0
    converged: bool = False


def angle_gap(a, b):
    """Max absolute angular difference, wrapped to (-pi, pi]."""
    d = np.mod(np.asarray(a) - np.asarray(b) + np.pi, 2.0 * np.pi) - np.pi
    return float(np.max(np.abs(d)))


def phase_argmax(coefficients):
    """Per-element maximizer of Re{e^{j theta_n} c_n}: theta_n = -angle(c_n)."""
    c = np.asarray(coefficients, dtype=complex)
    theta = np.where(c == 0, 0.0, -np.angle(c))
    return reduce_angles(theta)


def direction_coefficients(channels, H, A):
    """Vector c with c_n = trace(H^H A H_n), computed without forming any H_n."""
    return np.diagonal(channels.H_BR @ (H.conj().T @ A) @ channels.H_R)


def random_theta(n, rng):
    return rng.uniform(0.0, 2.0 * np.pi, size=n)


@dataclass
class QuadSurrogateParts:
    """Tangent surrogate a + scale*(2 Re{b.x} - x^H C x) over phasors x."""

    a: float
    b: np.ndarray
    C: np.ndarray
    lam: float
    scale: float
    anchor: np.ndarray  # anchor phasor x_bar

    def ascent_coefficients(self):
        """Linear coefficients of the minorized (concave-free) form: the next
        phase vector is phase_argmax of these."""
        xb = self.anchor
        return self.b - xb.conj() @ self.C + self.lam * xb.conj()

    def value(self, theta):
        """Evaluate the fully-minorized surrogate (quadratic part bounded via lam)."""
        x = phasor(theta)
        xb = self.anchor
        n = xb.size
        lin = self.ascent_coefficients()
        const = (xb.conj() @ self.C @ xb).real - 2.0 * self.lam * n
        return self.a + self.scale * (2.0 * np.real(np.sum(x * lin)) + const)

    def quadratic_value(self, theta):
        """Evaluate the intermediate surrogate a + scale*(2Re{b.x} - x^H C x)."""
        x = phasor(theta)
        return self.a + self.scale * (2.0 * np.real(np.sum(x * self.b))
                                      - (x.conj() @ self.C @ x).real)


def trace_surrogate(channels, theta, alpha):
    """Surrogate parts for the ridge-trace objective tr(H (aI + H^H H)^{-1} H^H)."""
    H = (channels.H_R * phasor(theta)[None, :]) @ channels.H_BR
    M = channels.M
    psi = hermitian_inverse(hermitianize(alpha * np.eye(M) + H.conj().T @ H))
    a = -alpha * float(np.real(np.trace((H @ psi) @ (psi @ H.conj().T))))
    b = np.diagonal(channels.H_BR @ psi @ H.conj().T @ channels.H_R)
    T = psi @ (H.conj().T @ H) @ psi
    G_u = channels.H_R.conj().T @ channels.H_R
    W = channels.H_BR @ T @ channels.H_BR.conj().T
    C = hermitianize(G_u * W.T)
    lam = dominant_eigenvalue(C)
    return QuadSurrogateParts(a=a, b=b, C=C, lam=lam, scale=1.0, anchor=phasor(theta))


def logdet_surrogate(channels, theta, alpha):
    """Surrogate parts for the ridge log-det objective ln|aI + H H^H|.

    The surrogate is tangent to phi(theta) = ln|I + (1/a) H H^H|; the constant
    offset K*ln(a) to the reported objective does not move the maximizer.
    """
    H = (channels.H_R * phasor(theta)[None, :]) @ channels.H_BR
    K, M = H.shape
    gram_m = hermitianize(alpha * np.eye(M) + H.conj().T @ H)
    T2 = hermitianize(H @ hermitian_inverse(gram_m) @ H.conj().T)  # K x K
    from .linalg import logdet as _logdet
    phi = _logdet(hermitianize(alpha * np.eye(K) + H @ H.conj().T)) - K * np.log(alpha)
    a = phi - float(np.linalg.norm(H) ** 2) / alpha - float(np.real(np.trace(T2)))
    b = np.diagonal(channels.H_BR @ H.conj().T @ channels.H_R)
    G_v = channels.H_BR @ channels.H_BR.conj().T
    W2 = channels.H_R.conj().T @ T2 @ channels.H_R
    C = hermitianize(G_v.T * W2)
    lam = dominant_eigenvalue(C)
    return QuadSurrogateParts(a=a, b=b, C=C, lam=lam, scale=1.0 / alpha, anchor=phasor(theta))
