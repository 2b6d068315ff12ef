"""RIS phase optimization for regularized zero-forcing (any K vs M).

Two figures of merit for the ridge-regularized effective channel
H (aI + H^H H)^{-1} H^H: its trace (pushed toward K) and the log-det
ln|aI + H H^H| (ellipsoid-volume criterion), each with a full-step
ascent and the latter also with an incumbent-tracked step descent.
"""

import numpy as np

from .channel import compose, phasor
from .linalg import hermitian_inverse, hermitianize, logdet
from .phase_common import (PrcRunReport, angle_gap, direction_coefficients,
                           logdet_surrogate, phase_argmax, trace_surrogate)

__all__ = ["rzf_trace_objective", "rzf_trace_maximize", "logdet_objective",
           "logdet_step_descent", "logdet_full_step", "default_alpha"]


def default_alpha(channels, theta):
    """0.1 * mean diagonal of H^H H at theta; ties the ridge to the Gram scale."""
    H = compose(channels, theta)
    return 0.1 * float(np.mean(np.sum(np.abs(H) ** 2, axis=0))) or 1e-300


def rzf_trace_objective(channels, theta, alpha):
    """g_alpha(theta) = tr(H (aI_M + H^H H)^{-1} H^H), in [0, K]."""
    if alpha <= 0.0:
        raise ValueError("alpha must be positive")
    H = compose(channels, theta)
    M = H.shape[1]
    gram_m = hermitianize(alpha * np.eye(M) + H.conj().T @ H)
    return float(np.real(np.trace(hermitian_inverse(gram_m) @ (H.conj().T @ H))))


def rzf_trace_maximize(channels, theta0, alpha=None, max_iter=500, tol=1e-3):
    """Full-step ascent of the ridge trace (monotone by surrogate tangency)."""
    theta = np.mod(np.asarray(theta0, dtype=float), 2.0 * np.pi)
    if alpha is None:
        alpha = default_alpha(channels, theta)
    trace = [rzf_trace_objective(channels, theta, alpha)]
    converged = False
    it = 0
    for it in range(1, max_iter + 1):
        parts = trace_surrogate(channels, theta, alpha)
        theta_new = phase_argmax(parts.ascent_coefficients())
        trace.append(rzf_trace_objective(channels, theta_new, alpha))
        gap = angle_gap(theta_new, theta)
        theta = theta_new
        if gap <= tol:
            converged = True
            break
    return PrcRunReport(theta_opt=theta, objective_trace=trace,
                        iterations=it, converged=converged)


def logdet_objective(channels, theta, alpha):
    """ln|aI_K + H H^H|, always >= K ln(a)."""
    if alpha <= 0.0:
        raise ValueError("alpha must be positive")
    H = compose(channels, theta)
    K = H.shape[0]
    return logdet(hermitianize(alpha * np.eye(K) + H @ H.conj().T))


def _logdet_direction(channels, theta, alpha):
    H = compose(channels, theta)
    K = H.shape[0]
    A = hermitian_inverse(hermitianize(alpha * np.eye(K) + H @ H.conj().T))
    return direction_coefficients(channels, H, A)


def logdet_step_descent(channels, theta0, alpha=None, rule="plain", max_iter=500,
                        tol=1e-3, stall_limit=20):
    """Step ascent of ln|aI + H H^H| with incumbent tracking (ascent not granted)."""
    if rule not in ("plain", "bb", "pbb"):
        raise ValueError(f"unknown rule {rule!r}")
    from .zf_phase import _bb_update, _pbb_update

    theta = np.mod(np.asarray(theta0, dtype=float), 2.0 * np.pi)
    if alpha is None:
        alpha = default_alpha(channels, theta)
    best_theta = theta.copy()
    best_phi = logdet_objective(channels, theta, alpha)
    trace = [best_phi]
    prev = None
    stall = 0
    converged = False
    it = 0
    for it in range(1, max_iter + 1):
        theta_tilde = phase_argmax(_logdet_direction(channels, theta, alpha))
        if rule == "plain" or prev is None:
            theta_new = theta_tilde
        elif rule == "bb":
            theta_new = _bb_update(theta, theta_tilde, prev)
        else:
            theta_new = _pbb_update(theta, theta_tilde, prev)
        theta_new = np.mod(theta_new, 2.0 * np.pi)
        phi_new = logdet_objective(channels, theta_new, alpha)
        trace.append(phi_new)
        if phi_new > best_phi:
            best_phi, best_theta = phi_new, theta_new.copy()
            stall = 0
        else:
            stall += 1
        gap = angle_gap(theta_new, theta)
        prev = (theta.copy(), theta_tilde.copy())
        theta = theta_new
        if gap <= tol:
            converged = True
            break
        if stall >= stall_limit:
            break
    return PrcRunReport(theta_opt=best_theta, objective_trace=trace,
                        iterations=it, converged=converged)


def logdet_full_step(channels, theta0, alpha=None, max_iter=500, tol=1e-3):
    """Full-step ascent of the log-det criterion (monotone by surrogate tangency)."""
    theta = np.mod(np.asarray(theta0, dtype=float), 2.0 * np.pi)
    if alpha is None:
        alpha = default_alpha(channels, theta)
    trace = [logdet_objective(channels, theta, alpha)]
    converged = False
    it = 0
    for it in range(1, max_iter + 1):
        parts = logdet_surrogate(channels, theta, alpha)
        theta_new = phase_argmax(parts.ascent_coefficients())
        trace.append(logdet_objective(channels, theta_new, alpha))
        gap = angle_gap(theta_new, theta)
        theta = theta_new
        if gap <= tol:
            converged = True
            break
    return PrcRunReport(theta_opt=theta, objective_trace=trace,
                        iterations=it, converged=converged)
