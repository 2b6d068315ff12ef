"""Joint information and energy delivery under transmit time switching.

A slot is split into an energy phase of length 1/t1 (conjugate beams toward
the energy users) and an information phase of length 1/t2, with
1/t1 + 1/t2 <= 1.  Each outer loop maximizes the minimum per-slot
throughput gamma subject to the power budget, per-signal power caps,
the time split, and the per-user harvested-energy thresholds, by solving
a sequence of inner conic subproblems built from the tangent surrogates
in ``bounds``.

All subproblems are assembled in normalized variables (powers divided by
the budget P, noise scaled to 1) so the interior-point iterations stay
well conditioned despite nanowatt-scale physical quantities.
"""

from dataclasses import dataclass, field

import numpy as np

from .bounds import (DegenerateAnchor, DomainError, augmented_rate,
                     augmented_rate_minorant, pairs_to_reals, product_majorant,
                     rate_minorant)
from .channel import compose
from .linalg import hermitian_inverse, hermitianize
from .rzf_phase import default_alpha
from .solver import (Bound, ConicProblem, ConvexQuadratic, Hyperbolic,
                     Infeasible, Linear, solve)
from .zf_phase import zf_objective

__all__ = ["AllocationState", "EnergyModel", "DeliveryReport", "InfeasibleStart",
           "energy_tx_power", "harvested", "zf_info_power",
           "rzf_effective_channels", "rate_rzf", "rate_igs", "igs_info_power",
           "initial_point", "path_follow_zf", "path_follow_rzf",
           "path_follow_igs", "info_only"]

GAMMA_TOL = 1e-3      # outer stop: gamma improvement below this
MAX_OUTER = 100
FEAS_TOL = 1e-6       # accepted iterates must satisfy the original constraints
MONOTONE_SLACK = 1e-9
PEAK_FACTOR = 3.0     # per-signal power cap: pi <= 3P


class InfeasibleStart(Exception):
    pass


@dataclass
class AllocationState:
    """One feasible point of a delivery problem.

    p is a scalar (single-beam ZF), a length-K vector (conventional RZF), or
    a (K, 2) complex array of widely-linear pairs (improper signaling).
    """

    p: object
    x: np.ndarray
    t1: float
    t2: float
    gamma: float


@dataclass
class DeliveryReport:
    state: AllocationState
    gamma_trace: list = field(default_factory=list)
    iterations: int = 0
    converged: bool = False


@dataclass
class EnergyModel:
    """Inner products of the BS->EU channels driving conjugate energy beams."""

    gram: np.ndarray   # K_E x K_E, |<h_l, h_l'>|^2
    norms: np.ndarray  # ||h_l||^2
    zeta: float
    e_min: float

    @classmethod
    def from_channels(cls, h_E, zeta, e_min):
        h_E = np.asarray(h_E, dtype=complex)
        inner = h_E @ h_E.conj().T
        return cls(gram=np.abs(inner) ** 2,
                   norms=np.real(np.diag(inner)).copy(),
                   zeta=float(zeta), e_min=float(e_min))


def energy_tx_power(model, x):
    """pi_E(x) = sum_l ||h_l||^2 x_l, transmit power of the energy phase."""
    return float(model.norms @ np.asarray(x, dtype=float))


def harvested(model, x, ell, t1):
    """Per-slot energy collected at user ell before conversion efficiency."""
    return float(model.gram[ell] @ np.asarray(x, dtype=float) / t1)


def zf_info_power(p0, a_zf):
    """Information transmit power of the equal-rate single-power ZF scheme."""
    if a_zf <= 0.0:
        raise ValueError("a_zf must be positive")
    return float(a_zf * p0 ** 2)


@dataclass
class EffectiveChannels:
    hbar: np.ndarray   # K x K, hbar[k, j] = h_k Hrz h_j^H
    beams: np.ndarray  # ||Hrz h_j^H||^2 per stream


def rzf_effective_channels(channels, theta_opt, alpha):
    """Post-beamforming scalar channels and per-stream beam powers."""
    if alpha <= 0.0:
        raise ValueError("alpha must be positive")
    H = compose(channels, theta_opt)
    M = H.shape[1]
    Hrz = hermitian_inverse(hermitianize(H.conj().T @ H + alpha * np.eye(M)))
    B = Hrz @ H.conj().T  # M x K, beam matrix columns
    hbar = H @ B
    beams = np.real(np.sum(np.abs(B) ** 2, axis=0))
    return EffectiveChannels(hbar=hbar, beams=beams)


def rate_rzf(p, k, effective, sigma):
    """ln(1 + |h_kk|^2 p_k^2 / (sum_{j!=k} |h_kj|^2 p_j^2 + sigma))."""
    if sigma <= 0.0:
        raise ValueError("sigma must be positive")
    p = np.asarray(p, dtype=float)
    g = np.abs(effective.hbar[k]) ** 2
    interf = float(np.sum(np.delete(g * p ** 2, k))) + sigma
    return float(np.log1p(g[k] * p[k] ** 2 / interf))


def rate_igs(p_pairs, k, effective, sigma):
    """Half the augmented-channel log-det rate of user k."""
    if sigma <= 0.0:
        raise ValueError("sigma must be positive")
    return 0.5 * augmented_rate(p_pairs, k, effective.hbar[k], sigma)


def igs_info_power(p_pairs, beams):
    """Information power of the widely-linear scheme: sum_j beam_j |p_j|^2."""
    pairs = np.asarray(p_pairs, dtype=complex).reshape(-1, 2)
    return float(np.asarray(beams, dtype=float) @ np.sum(np.abs(pairs) ** 2, axis=1))


# --- normalized problem data ------------------------------------------------

@dataclass
class _DeliveryData:
    """Everything a subproblem builder needs, in budget-normalized units."""

    kind: str             # zf | rzf | igs
    P: float
    sigma: float
    model: EnergyModel | None
    beams: np.ndarray     # physical per-stream beam powers (a_zf for zf)
    ghat: np.ndarray      # K x K normalized gains |h_kj|^2 P / (beam_j sigma)
    hhat: np.ndarray | None = None  # igs only: h_kj sqrt(P / (beam_j sigma))

    @property
    def K(self):
        return self.ghat.shape[0]

    @property
    def K_E(self):
        return 0 if self.model is None else self.model.norms.size


def _zf_data(scenario, channels, theta_opt):
    a_zf = zf_objective(channels, theta_opt)
    P, sigma = scenario.P, scenario.sigma
    model = (EnergyModel.from_channels(channels.h_E, scenario.zeta, scenario.e_min)
             if scenario.K_E > 0 else None)
    return _DeliveryData(kind="zf", P=P, sigma=sigma, model=model,
                         beams=np.array([a_zf]),
                         ghat=np.array([[P / (a_zf * sigma)]]))


def _rzf_data(scenario, channels, theta_opt, alpha, kind):
    eff = rzf_effective_channels(channels, theta_opt, alpha)
    P, sigma = scenario.P, scenario.sigma
    model = (EnergyModel.from_channels(channels.h_E, scenario.zeta, scenario.e_min)
             if scenario.K_E > 0 else None)
    scale = np.sqrt(P / eff.beams)
    hhat = eff.hbar * scale[None, :] / np.sqrt(sigma)
    return _DeliveryData(kind=kind, P=P, sigma=sigma, model=model,
                         beams=eff.beams, ghat=np.abs(hhat) ** 2,
                         hhat=hhat if kind == "igs" else None)


def _encode_powers(data, p):
    """Physical powers -> normalized q with sum(q^2) = pi_I / P."""
    scale = np.sqrt(data.beams / data.P)
    if data.kind == "zf":
        return np.array([float(p)]) * scale
    if data.kind == "rzf":
        return np.asarray(p, dtype=float) * scale
    pairs = np.asarray(p, dtype=complex).reshape(-1, 2) * scale[:, None]
    return pairs


def _decode_powers(data, q):
    scale = np.sqrt(data.P / data.beams)
    if data.kind == "zf":
        return float(q[0] * scale[0])
    if data.kind == "rzf":
        return np.asarray(q, dtype=float) * scale
    return np.asarray(q, dtype=complex).reshape(-1, 2) * scale[:, None]


def _info_fraction(data, p):
    """pi_I(p) / P from the normalized representation."""
    q = _encode_powers(data, p)
    if data.kind == "igs":
        return float(np.sum(np.abs(q) ** 2))
    return float(np.sum(np.asarray(q) ** 2))


def _throughputs(data, p, t2):
    """Per-user per-slot throughput (nats) at the physical allocation."""
    if data.kind == "igs":
        q = _encode_powers(data, p)
        rates = np.array([0.5 * augmented_rate(q, k, data.hhat[k], 1.0)
                          for k in range(data.K)])
    else:
        q = _encode_powers(data, p)
        rates = np.empty(data.K)
        for k in range(data.K):
            interf = float(np.sum(np.delete(data.ghat[k] * q ** 2, k))) + 1.0
            rates[k] = np.log1p(data.ghat[k, k] * q[k] ** 2 / interf)
    return rates / t2


def _original_violation(data, st):
    """Largest residual of the true (non-surrogate) constraint system."""
    t1, t2 = st.t1, st.t2
    inv_t1 = 0.0 if np.isinf(t1) else 1.0 / t1
    pi_e_frac = 0.0
    v = -np.inf
    if data.model is not None and st.x.size:
        v = max(v, -float(np.min(st.x)))
        pi_e = energy_tx_power(data.model, st.x)
        pi_e_frac = pi_e * inv_t1 / data.P
        v = max(v, pi_e / (PEAK_FACTOR * data.P) - 1.0)
        if data.model.e_min > 0.0:
            need = t1 * data.model.e_min / data.model.zeta
            got = data.model.gram @ st.x
            v = max(v, float(np.max(1.0 - got / need)))
    pi_i_frac = _info_fraction(data, st.p)
    v = max(v, pi_i_frac / PEAK_FACTOR - 1.0)
    v = max(v, pi_e_frac + pi_i_frac / t2 - 1.0)
    v = max(v, inv_t1 + 1.0 / t2 - 1.0)
    thr = _throughputs(data, st.p, t2)
    v = max(v, st.gamma - float(np.min(thr)))
    return v


# --- subproblem assembly ----------------------------------------------------

@dataclass
class _Layout:
    d: int        # leading power reals
    K_E: int      # 0 -> reduced layout without the energy phase

    @property
    def full(self):
        return self.K_E > 0

    @property
    def n(self):
        return self.d + self.K_E + 7 if self.full else self.d + 2

    @property
    def it1(self):
        return self.d + self.K_E

    @property
    def it2(self):
        return self.d + self.K_E + 1 if self.full else self.d

    @property
    def ig(self):
        return self.d + self.K_E + 2 if self.full else self.d + 1

    @property
    def aux(self):  # s1, s2, u1, u2
        base = self.d + self.K_E + 3
        return base, base + 1, base + 2, base + 3

    def x_slice(self):
        return slice(self.d, self.d + self.K_E)


def _rate_quadratic(lay, sur, gamma_bar, t2_bar, factor=1.0):
    """Conic form of: factor * majorant(gamma*t2) - rate_minorant(q) <= 0."""
    n = lay.n
    pm = product_majorant(max(gamma_bar, 1e-9), t2_bar)
    Q = np.zeros((n, n))
    Q[:lay.d, :lay.d] = sur.quad
    idx = [lay.ig, lay.it2]
    Q[np.ix_(idx, idx)] += factor * pm.quad
    qv = np.zeros(n)
    qv[:lay.d] = -sur.linear
    return ConvexQuadratic(Q=Q, q=qv, b=sur.constant)


def _power_block(lay, n):
    Q = np.zeros((n, n))
    Q[:lay.d, :lay.d] = np.eye(lay.d)
    return Q


def _build_subproblem(data, state, frozen_p2=False):
    """One inner conic problem anchored at ``state``; returns (problem, warm, decode)."""
    q_bar = _encode_powers(data, state.p)
    if data.kind == "igs":
        q_reals = pairs_to_reals(q_bar)
        mask = (np.where(np.arange(4 * data.K) % 4 < 2)[0] if frozen_p2
                else np.arange(4 * data.K))
        q_vec = q_reals[mask]
    else:
        mask = None
        q_vec = q_bar
    lay = _Layout(d=q_vec.size, K_E=data.K_E)
    n = lay.n
    cons = []

    # signed power variables only for the widely-linear pairs
    if data.kind != "igs":
        for i in range(lay.d):
            cons.append(Bound(i=i, lo=0.0))
    cons.append(Bound(i=lay.ig, lo=0.0))
    cons.append(Bound(i=lay.it2, lo=1.0))
    cons.append(ConvexQuadratic(Q=_power_block(lay, n), q=np.zeros(n), b=PEAK_FACTOR))

    if lay.full:
        xs = lay.x_slice()
        is1, is2, iu1, iu2 = lay.aux
        for i in range(xs.start, xs.stop):
            cons.append(Bound(i=i, lo=0.0))
        # the cap keeps the barrier bounded when no energy row limits t1
        cons.append(Bound(i=lay.it1, lo=1.0, hi=1e6))
        a = np.zeros(n); a[xs] = 1.0
        cons.append(Linear(a=a, b=PEAK_FACTOR))
        # time split via inverse epigraphs: s_i t_i >= 1, s1 + s2 <= 1
        a = np.zeros(n); a[is1] = 1.0; a[is2] = 1.0
        cons.append(Linear(a=a, b=1.0))
        zero_q = np.zeros((n, n))
        cons.append(Hyperbolic(Q=zero_q, q=np.zeros(n), c=1.0, i=is1, j=lay.it1))
        cons.append(Hyperbolic(Q=zero_q, q=np.zeros(n), c=1.0, i=is2, j=lay.it2))
        # harvested-energy thresholds: t1 <= (zeta/e_min) * gram @ x
        if data.model.e_min > 0.0:
            coef = (data.model.gram * (data.P / data.model.norms)[None, :]
                    * data.model.zeta / data.model.e_min)
            for ell in range(lay.K_E):
                a = np.zeros(n)
                a[lay.it1] = 1.0
                a[xs] = -coef[ell]
                cons.append(Linear(a=a, b=0.0))
        # budget through per-phase epigraphs u1, u2
        x_bar = np.asarray(state.x, dtype=float) * data.model.norms / data.P
        pi_e_bar = float(np.sum(x_bar))
        Qe = np.zeros((n, n))
        qe = np.zeros(n)
        if pi_e_bar > 1e-12:
            Qe[xs, xs.start:xs.stop] = 1.0 / (2.0 * pi_e_bar)
            ce = pi_e_bar / 2.0
        else:
            qe[xs] = 1.0  # exact hyperbolic form; the quadratic majorant needs a
            ce = 0.0      # strictly positive anchor power
        cons.append(Hyperbolic(Q=Qe, q=qe, c=ce, i=iu1, j=lay.it1))
        cons.append(Hyperbolic(Q=_power_block(lay, n), q=np.zeros(n), c=0.0,
                               i=iu2, j=lay.it2))
        a = np.zeros(n); a[iu1] = 1.0; a[iu2] = 1.0
        cons.append(Linear(a=a, b=1.0))
    else:
        # no energy phase: pi_I / t2 <= P becomes sum q^2 - t2 <= 0
        qv = np.zeros(n); qv[lay.it2] = -1.0
        cons.append(ConvexQuadratic(Q=_power_block(lay, n), q=qv, b=0.0))
        x_bar = np.zeros(0)
        pi_e_bar = 0.0

    factor = 2.0 if data.kind == "igs" else 1.0
    for k in range(data.K):
        if data.kind == "igs":
            sur = augmented_rate_minorant(q_bar, k, data.hhat[k], 1.0)
            if frozen_p2:
                sur.linear = sur.linear[mask]
                sur.quad = sur.quad[np.ix_(mask, mask)]
        else:
            sur = rate_minorant(q_bar, k, data.ghat[k], 1.0)
        cons.append(_rate_quadratic(lay, sur, state.gamma, state.t2, factor))

    obj = np.zeros(n)
    obj[lay.ig] = 1.0
    prob = ConicProblem(num_vars=n, objective=obj, constraints=cons)

    warm = np.zeros(n)
    warm[:lay.d] = q_vec
    warm[lay.it2] = state.t2
    warm[lay.ig] = state.gamma
    pi_i_bar = float(np.sum(np.asarray(q_vec) ** 2))
    if lay.full:
        warm[lay.x_slice()] = x_bar
        warm[lay.it1] = state.t1
        is1, is2, iu1, iu2 = lay.aux
        ts_slack = max(1.0 - 1.0 / state.t1 - 1.0 / state.t2, 0.0)
        warm[is1] = 1.0 / state.t1 + ts_slack / 4.0
        warm[is2] = 1.0 / state.t2 + ts_slack / 4.0
        u1 = pi_e_bar / state.t1
        u2 = pi_i_bar / state.t2
        delta = max(1.0 - u1 - u2, 0.0) / 4.0
        warm[iu1] = u1 + delta
        warm[iu2] = u2 + delta

    def decode(z):
        q = z[:lay.d]
        if data.kind == "igs":
            full_q = np.zeros(4 * data.K)
            full_q[mask] = q
            pairs = full_q[0::4] + 1j * full_q[1::4], full_q[2::4] + 1j * full_q[3::4]
            p = _decode_powers(data, np.column_stack(pairs))
        else:
            p = _decode_powers(data, q)
        if lay.full:
            x = z[lay.x_slice()] * data.P / data.model.norms
            t1 = float(z[lay.it1])
        else:
            x = np.zeros(0)
            t1 = np.inf
        return AllocationState(p=p, x=x, t1=t1, t2=float(z[lay.it2]),
                               gamma=float(z[lay.ig]))

    return prob, warm, decode


# --- outer loops ------------------------------------------------------------

def _path_follow(data, state0, max_iter, tol, frozen_p2=False):
    state = state0
    trace = [state.gamma]
    converged = False
    it = 0
    for it in range(1, max_iter + 1):
        try:
            prob, warm, decode = _build_subproblem(data, state, frozen_p2=frozen_p2)
            res = solve(prob, start=warm)
        except (Infeasible, DomainError, DegenerateAnchor):
            break
        cand = decode(res.z_opt)
        if _original_violation(data, cand) > FEAS_TOL:
            break
        if cand.gamma < state.gamma - MONOTONE_SLACK:
            break
        gain = cand.gamma - state.gamma
        state = cand
        trace.append(state.gamma)
        if gain <= tol:
            converged = True
            break
    return DeliveryReport(state=state, gamma_trace=trace, iterations=it,
                          converged=converged)


def _initial_point_impl(data, t_init=2.2, margin=1.1, fill=0.9):
    """Deterministic strictly feasible start: load the energy beams just above
    the thresholds, then spend most of the remaining budget uniformly on
    information streams."""
    P = data.P
    K_E = data.K_E
    model = data.model
    if model is None:
        t1, t2 = np.inf, 1.25
        x = np.zeros(0)
        pi_e_frac = 0.0
    else:
        t1 = t2 = t_init
        if model.e_min <= 0.0:
            x = np.zeros(K_E)
        else:
            rhs = np.full(K_E, margin * t1 * model.e_min / model.zeta)
            try:
                x = np.linalg.solve(model.gram, rhs)
            except np.linalg.LinAlgError:
                x = np.full(K_E, -1.0)
            if np.any(x <= 0.0):
                # correlated EU channels: minimal-power loading via a small LP
                x = _min_energy_loading(model, P, rhs)
        pi_e = energy_tx_power(model, x)
        if pi_e > PEAK_FACTOR * P:
            raise InfeasibleStart("energy thresholds exceed the peak power cap")
        pi_e_frac = pi_e / (t1 * P)
        if pi_e_frac >= 0.95:
            raise InfeasibleStart("energy thresholds leave no information budget")
    pi_i_frac = min(fill * (1.0 - pi_e_frac) * t2, fill * PEAK_FACTOR)
    q = np.full(data.K, np.sqrt(pi_i_frac / data.K))
    if data.kind == "igs":
        p = _decode_powers(data, _seed_pairs(q))
    else:
        p = _decode_powers(data, q)
    st = AllocationState(p=p, x=x, t1=t1, t2=t2, gamma=0.0)
    g0 = float(np.min(_throughputs(data, p, t2)))
    st.gamma = g0 - min(1e-6, 0.5 * g0)
    if st.gamma <= 0.0 or _original_violation(data, st) > 0.0:
        raise InfeasibleStart("constructed start is not strictly feasible")
    return st


def _seed_pairs(q, eps=0.3):
    """Split per-stream amplitudes into widely-linear pairs with a small
    conjugate branch; an exactly zero branch is a stationary point the
    successive approximation can never leave."""
    K = q.size
    p1 = q.astype(complex) / np.sqrt(1.0 + eps ** 2)
    phases = np.exp(1j * (2.0 * np.pi * np.arange(K) / max(K, 1) + 0.5))
    return np.column_stack([p1, eps * p1 * phases])


def _min_energy_loading(model, P, rhs):
    """min pi_E(x) s.t. gram @ x >= rhs, x >= 0, pi_E <= 3P, in normalized vars."""
    K_E = model.norms.size
    coef = model.gram * (P / model.norms)[None, :]  # rows act on x_tilde
    cons = [Bound(i=i, lo=0.0) for i in range(K_E)]
    cons.append(Linear(a=np.ones(K_E), b=PEAK_FACTOR))
    for ell in range(K_E):
        cons.append(Linear(a=-coef[ell] / rhs[ell], b=-1.0))
    prob = ConicProblem(num_vars=K_E, objective=-np.ones(K_E), constraints=cons)
    try:
        res = solve(prob)
    except Infeasible as exc:
        raise InfeasibleStart("energy thresholds exceed the peak power cap") from exc
    return res.z_opt * P / model.norms


def _robust_initial(data, seed):
    rng = np.random.default_rng(seed + 9173)
    last = None
    for attempt in range(50):
        if attempt == 0:
            t_init, margin, fill = 2.2, 1.1, 0.9
        else:
            t_init = rng.uniform(2.05, 3.5)
            margin = rng.uniform(1.05, 1.5)
            fill = rng.uniform(0.3, 0.9)
        try:
            return _initial_point_impl(data, t_init=t_init, margin=margin, fill=fill)
        except InfeasibleStart as exc:
            last = exc
    raise last


def initial_point(kind, scenario, channels, theta_opt, alpha=None):
    """Strictly feasible start for one of the delivery problems."""
    data = _delivery_data(kind, scenario, channels, theta_opt, alpha)
    return _initial_point_impl(data)


def _delivery_data(kind, scenario, channels, theta_opt, alpha=None):
    if kind == "zf":
        return _zf_data(scenario, channels, theta_opt)
    if kind in ("rzf", "igs"):
        if alpha is None:
            alpha = default_alpha(channels, theta_opt)
        return _rzf_data(scenario, channels, theta_opt, alpha, kind)
    raise ValueError(f"unknown delivery kind {kind!r}")


def path_follow_zf(scenario, channels, theta_opt, max_iter=MAX_OUTER, tol=GAMMA_TOL):
    """Max-min throughput with single-power ZF information beams."""
    data = _zf_data(scenario, channels, theta_opt)
    state0 = _robust_initial(data, scenario.seed)
    return _path_follow(data, state0, max_iter, tol)


def path_follow_rzf(scenario, channels, theta_opt, alpha=None,
                    max_iter=MAX_OUTER, tol=GAMMA_TOL):
    """Max-min throughput with per-user proper-signal ridge beams."""
    data = _delivery_data("rzf", scenario, channels, theta_opt, alpha)
    state0 = _robust_initial(data, scenario.seed)
    return _path_follow(data, state0, max_iter, tol)


def path_follow_igs(scenario, channels, theta_opt, alpha=None,
                    max_iter=MAX_OUTER, tol=GAMMA_TOL, frozen_p2=False):
    """Max-min throughput with widely-linear (improper-signal) ridge beams.

    With frozen_p2 the conjugate branch is removed from every subproblem,
    which collapses the scheme onto the proper-signal one.
    """
    data = _delivery_data("igs", scenario, channels, theta_opt, alpha)
    state0 = _robust_initial(data, scenario.seed)
    return _path_follow(data, state0, max_iter, tol, frozen_p2=frozen_p2)


# --- information-only allocation (no energy users, t2 = 1) ------------------

def _info_only_subproblem(data, p, gamma, improper):
    q_bar = _encode_powers(data, p)
    if improper:
        q_vec = pairs_to_reals(q_bar)
    else:
        q_vec = q_bar
    d = q_vec.size
    n = d + 1
    ig = d
    cons = []
    if not improper:
        for i in range(d):
            cons.append(Bound(i=i, lo=0.0))
    cons.append(Bound(i=ig, lo=0.0))
    Qp = np.zeros((n, n))
    Qp[:d, :d] = np.eye(d)
    cons.append(ConvexQuadratic(Q=Qp, q=np.zeros(n), b=1.0))  # pi_I <= P
    for k in range(data.K):
        if improper:
            sur = augmented_rate_minorant(q_bar, k, data.hhat[k], 1.0)
            half = 0.5
        else:
            sur = rate_minorant(q_bar, k, data.ghat[k], 1.0)
            half = 1.0
        Q = np.zeros((n, n))
        Q[:d, :d] = half * sur.quad
        qv = np.zeros(n)
        qv[:d] = -half * sur.linear
        qv[ig] = 1.0
        cons.append(ConvexQuadratic(Q=Q, q=qv, b=half * sur.constant))
    obj = np.zeros(n)
    obj[ig] = 1.0
    warm = np.append(q_vec, gamma)
    prob = ConicProblem(num_vars=n, objective=obj, constraints=cons)

    def decode(z):
        if improper:
            q = z[:d]
            pairs = np.column_stack([q[0::4] + 1j * q[1::4], q[2::4] + 1j * q[3::4]])
            return _decode_powers(data, pairs), float(z[ig])
        return _decode_powers(data, z[:d]), float(z[ig])

    return prob, warm, decode


def info_only(scenario, channels, theta_opt, alpha=None, mode="proper",
              max_iter=MAX_OUTER, tol=GAMMA_TOL):
    """Max-min rate with the whole slot spent on information transfer."""
    if mode not in ("proper", "improper"):
        raise ValueError(f"unknown mode {mode!r}")
    improper = mode == "improper"
    data = _delivery_data("igs" if improper else "rzf",
                          scenario, channels, theta_opt, alpha)
    if improper:
        # warm start from the proper-signal optimum, with a small conjugate
        # branch to escape the symmetric stationary point
        base = info_only(scenario, channels, theta_opt, alpha, mode="proper",
                         max_iter=max_iter, tol=tol)
        data_p = _delivery_data("rzf", scenario, channels, theta_opt, alpha)
        q0 = np.abs(_encode_powers(data_p, base.state.p))
        p = _decode_powers(data, _seed_pairs(q0))
    else:
        q0 = np.full(data.K, np.sqrt(0.9 / data.K))
        p = _decode_powers(data, q0)
    g0 = float(np.min(_throughputs(data, p, 1.0)))
    gamma = g0 - min(1e-6, 0.5 * g0)
    trace = [gamma]
    converged = False
    it = 0
    for it in range(1, max_iter + 1):
        try:
            prob, warm, decode = _info_only_subproblem(data, p, gamma, improper)
            res = solve(prob, start=warm)
        except (Infeasible, DomainError, DegenerateAnchor):
            break
        p_new, g_new = decode(res.z_opt)
        if _info_fraction(data, p_new) > 1.0 + FEAS_TOL:
            break
        if g_new < gamma - MONOTONE_SLACK:
            break
        gain = g_new - gamma
        p, gamma = p_new, g_new
        trace.append(gamma)
        if gain <= tol:
            converged = True
            break
    state = AllocationState(p=p, x=np.zeros(0), t1=np.inf, t2=1.0, gamma=gamma)
    return DeliveryReport(state=state, gamma_trace=trace, iterations=it,
                          converged=converged)
