"""RIS phase optimization for zero-forcing beamforming (K <= M).

Minimizes f(theta) = trace((H H^H)^{-1}) of the composite channel, either by
coordinate-wise step descent with optional Barzilai-Borwein step sizes, or by
the two full-step schemes (concave reformulation / ridge perturbation).
"""

import numpy as np

from .channel import compose, phasor
from .linalg import NotPositiveDefinite, hermitian_inverse, hermitianize, trace_of_inverse
from .phase_common import (PrcRunReport, QuadSurrogateParts, RankDeficient, angle_gap,
                           direction_coefficients, phase_argmax, random_theta,
                           trace_surrogate)

__all__ = ["zf_objective", "phase_argmax", "step_descent", "full_step_concave",
           "full_step_perturbed", "zf_throughput", "RankDeficient"]


def _gram(channels, theta):
    H = compose(channels, theta)
    return H, hermitianize(H @ H.conj().T)


def zf_objective(channels, theta):
    """f(theta) = trace((H H^H)^{-1}); raises RankDeficient for singular Grams."""
    _, gram = _gram(channels, theta)
    try:
        return trace_of_inverse(gram)
    except NotPositiveDefinite as exc:
        raise RankDeficient(str(exc)) from exc


def _descent_coefficients(channels, theta):
    """c_n = trace(H^H A H_n) with A = ((H H^H)^{-1})^2."""
    H, gram = _gram(channels, theta)
    try:
        inv = hermitian_inverse(gram)
    except NotPositiveDefinite as exc:
        raise RankDeficient(str(exc)) from exc
    return direction_coefficients(channels, H, inv @ inv)


def _bb_update(theta, theta_tilde, prev):
    """Barzilai-Borwein step on the raw angles; prev = (theta_prev, tilde_prev)."""
    psi = theta_tilde - theta
    psi_prev = prev[1] - prev[0]
    diff = psi - psi_prev
    denom = float(diff @ diff)
    if denom <= 1e-30:
        return theta_tilde
    step = abs(float(psi @ diff)) / denom
    return theta + step * psi


def _pbb_update(theta, theta_tilde, prev):
    """Projective BB step on the unit-modulus phasors."""
    x, xt = phasor(theta), phasor(theta_tilde)
    psi = xt - x
    psi_prev = phasor(prev[1]) - phasor(prev[0])
    diff = psi - psi_prev
    denom = float(np.real(diff.conj() @ diff))
    if denom <= 1e-30:
        return theta_tilde
    step = abs(float(np.real(psi.conj() @ diff)))
    cand = x + (step / denom) * psi
    return np.mod(np.angle(cand), 2.0 * np.pi)


def step_descent(channels, theta0, rule="plain", max_iter=500, tol=1e-3, rng=None,
                 stall_limit=20):
    """Coordinate phase updates with incumbent tracking (non-monotone rules).

    rule is one of plain | bb | pbb.  A rank-deficient iterate triggers a
    restart from a fresh random theta, at most 3 times.
    """
    if rule not in ("plain", "bb", "pbb"):
        raise ValueError(f"unknown rule {rule!r}")
    rng = np.random.default_rng(0) if rng is None else rng
    theta0 = np.asarray(theta0, dtype=float)

    for attempt in range(4):
        try:
            return _step_descent_run(channels, theta0, rule, max_iter, tol, stall_limit)
        except RankDeficient:
            if attempt == 3:
                raise
            theta0 = random_theta(channels.N, rng)
    raise AssertionError("unreachable")


def _step_descent_run(channels, theta0, rule, max_iter, tol, stall_limit):
    theta = np.mod(theta0, 2.0 * np.pi)
    best_theta = theta.copy()
    best_f = zf_objective(channels, theta)
    trace = [best_f]
    prev = None
    stall = 0
    converged = False
    it = 0
    for it in range(1, max_iter + 1):
        theta_tilde = phase_argmax(_descent_coefficients(channels, theta))
        if rule == "plain" or prev is None:
            theta_new = theta_tilde
        elif rule == "bb":
            theta_new = _bb_update(theta, theta_tilde, prev)
        else:
            theta_new = _pbb_update(theta, theta_tilde, prev)
        theta_new = np.mod(theta_new, 2.0 * np.pi)
        f_new = zf_objective(channels, theta_new)
        trace.append(f_new)
        if f_new < best_f:
            best_f, best_theta = f_new, theta_new.copy()
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


def full_step_concave(channels, theta0, alpha0=None, max_iter=500, tol=1e-3):
    """Full-step ascent on g(x) = alpha*||x||^2 - f(x) with adaptive alpha.

    alpha starts large enough for convexity of g, shrinks by 10 while the
    descent in f holds, and freezes at the last working value; every accepted
    iterate decreases f.
    """
    theta = np.mod(np.asarray(theta0, dtype=float), 2.0 * np.pi)
    f_cur = zf_objective(channels, theta)
    if alpha0 is None:
        alpha0 = 10.0 * _probe_curvature(channels, theta)
    alpha = max(alpha0, 1e-300)
    trace = [f_cur]
    frozen = False
    converged = False
    it = 0
    escalations = 0
    for it in range(1, max_iter + 1):
        c = alpha * phasor(theta).conj() + _descent_coefficients(channels, theta)
        theta_new = phase_argmax(c)
        f_new = zf_objective(channels, theta_new)
        if f_new <= f_cur + 1e-12 * max(1.0, abs(f_cur)):
            gap = angle_gap(theta_new, theta)
            theta, f_cur = theta_new, min(f_new, f_cur)
            trace.append(f_cur)
            if gap <= tol:
                converged = True
                break
            if not frozen:
                alpha /= 10.0
        else:
            alpha *= 10.0  # restore / escalate; candidate reverts toward theta
            frozen = True
            escalations += 1
            if escalations > 12:
                break
    return PrcRunReport(theta_opt=theta, objective_trace=trace,
                        iterations=it, converged=converged)


def _probe_curvature(channels, theta):
    """Curvature scale of f at theta: lam_max of the Hadamard-structured probe."""
    H, gram = _gram(channels, theta)
    try:
        inv = hermitian_inverse(gram)
    except NotPositiveDefinite as exc:
        raise RankDeficient(str(exc)) from exc
    A = inv @ inv
    T = H.conj().T @ A @ H
    G_u = channels.H_R.conj().T @ channels.H_R
    W = channels.H_BR @ T @ channels.H_BR.conj().T
    C = hermitianize(G_u * W.T)
    from .linalg import dominant_eigenvalue
    return max(dominant_eigenvalue(C), 1e-300)


def full_step_perturbed(channels, theta0, alpha=None, max_iter=500, tol=1e-3):
    """Full-step ascent on the ridge-trace surrogate (monotone in g_alpha)."""
    theta = np.mod(np.asarray(theta0, dtype=float), 2.0 * np.pi)
    if alpha is None:
        _, gram = _gram(channels, theta)
        alpha = 1e-3 * float(np.mean(gram.diagonal().real))
    from .rzf_phase import rzf_trace_objective
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


def zf_throughput(channels, theta, P, sigma):
    """Common per-user throughput (nats) under equal-rate ZF power allocation."""
    return float(np.log1p(P / (sigma * zf_objective(channels, theta))))
