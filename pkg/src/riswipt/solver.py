"""Small dense interior-point solver for the SCA inner subproblems.

Maximizes a linear objective over an intersection of linear, convex
quadratic, and hyperbolic (rotated-cone style) constraints with a
logarithmic-barrier path-following method.  Problems here are tiny
(tens of variables, dense), so a textbook primal barrier with exact
Newton steps is enough; there is no sparsity handling.

Constraint catalog (z is the full variable vector):

* ``Linear(a, b)``:            a.z <= b
* ``ConvexQuadratic(Q, q, b)``: z^T Q z + q.z <= b with Q PSD
* ``Hyperbolic(Q, q, c, i, j)``: z^T Q z + q.z + c <= z_i * z_j with
  z_i >= 0, z_j >= 0 and Q PSD (quadratic-over-linear / rotated cone)
* ``Bound(i, lo, hi)``:        lo <= z_i <= hi
"""

from dataclasses import dataclass, field

import numpy as np

BARRIER_MU0 = 1.0
BARRIER_SHRINK = 10.0
GAP_TOL = 1e-8
NEWTON_LIMIT = 200
ARMIJO_ALPHA = 0.3
ARMIJO_BETA = 0.5


class Infeasible(Exception):
    pass


def _check_psd(Q):
    Q = np.asarray(Q, dtype=float)
    Q = 0.5 * (Q + Q.T)
    if Q.size:
        w = np.linalg.eigvalsh(Q)
        if w[0] < -1e-9 * max(w[-1], 1.0):
            raise ValueError(f"quadratic coefficient not PSD (min eig {w[0]:.3e})")
    return Q


@dataclass
class Linear:
    a: np.ndarray
    b: float

    def residual(self, z):
        return float(np.dot(self.a, z) - self.b)


@dataclass
class ConvexQuadratic:
    Q: np.ndarray
    q: np.ndarray
    b: float

    def __post_init__(self):
        self.Q = _check_psd(self.Q)

    def residual(self, z):
        return float(z @ self.Q @ z + np.dot(self.q, z) - self.b)


@dataclass
class Hyperbolic:
    Q: np.ndarray
    q: np.ndarray
    c: float
    i: int
    j: int

    def __post_init__(self):
        self.Q = _check_psd(self.Q)

    def residual(self, z):
        g = z @ self.Q @ z + np.dot(self.q, z) + self.c - z[self.i] * z[self.j]
        return float(max(g, -z[self.i], -z[self.j]))


@dataclass
class Bound:
    i: int
    lo: float = -np.inf
    hi: float = np.inf

    def residual(self, z):
        r = -np.inf
        if np.isfinite(self.lo):
            r = max(r, self.lo - z[self.i])
        if np.isfinite(self.hi):
            r = max(r, z[self.i] - self.hi)
        return float(r)


@dataclass
class ConicProblem:
    num_vars: int
    objective: np.ndarray  # maximize objective . z
    constraints: list = field(default_factory=list)

    def residuals(self, z):
        return np.array([c.residual(z) for c in self.constraints])

    def max_violation(self, z):
        r = self.residuals(z)
        return float(np.max(r)) if r.size else -np.inf


@dataclass
class SolveResult:
    z_opt: np.ndarray
    objective_value: float
    kkt_residual: float
    status: str  # Optimal | Infeasible | IterLimit


# --- barrier terms ---------------------------------------------------------

class _Terms:
    """Preprocessed barrier terms: stacked linear rows plus quad/hyp lists."""

    def __init__(self, problem):
        n = problem.num_vars
        rows, rhs = [], []
        self.quads = []   # (Q, q, b)
        self.hyps = []    # Hyperbolic
        for con in problem.constraints:
            if isinstance(con, Linear):
                rows.append(np.asarray(con.a, dtype=float)); rhs.append(con.b)
            elif isinstance(con, Bound):
                if np.isfinite(con.lo):
                    e = np.zeros(n); e[con.i] = -1.0
                    rows.append(e); rhs.append(-con.lo)
                if np.isfinite(con.hi):
                    e = np.zeros(n); e[con.i] = 1.0
                    rows.append(e); rhs.append(con.hi)
            elif isinstance(con, ConvexQuadratic):
                self.quads.append((con.Q, np.asarray(con.q, dtype=float), con.b))
            elif isinstance(con, Hyperbolic):
                self.hyps.append(con)
            else:
                raise TypeError(f"unknown constraint type {type(con)!r}")
        self.A = np.asarray(rows, dtype=float).reshape(len(rows), n)
        self.b = np.asarray(rhs, dtype=float)
        self.count = len(rows) + len(self.quads) + len(self.hyps)

    def value(self, z):
        """Barrier value only (inf when off-domain); cheap path for line search."""
        val = 0.0
        if self.A.shape[0]:
            s = self.b - self.A @ z
            if np.any(s <= 0.0):
                return np.inf
            val -= float(np.sum(np.log(s)))
        for Q, q, b in self.quads:
            s = b - np.dot(q, z) - z @ Q @ z
            if s <= 0.0:
                return np.inf
            val -= np.log(s)
        for con in self.hyps:
            # only the z_i, z_j > 0 branch of the cone is convex
            if z[con.i] <= 0.0 or z[con.j] <= 0.0:
                return np.inf
            s = z[con.i] * z[con.j] - (z @ con.Q @ z + np.dot(con.q, z) + con.c)
            if s <= 0.0:
                return np.inf
            val -= np.log(s)
        return val


def _barrier(z, terms):
    """Returns (value, grad, hess) of the log barrier, or (inf, None, None) off-domain."""
    n = z.size
    val = 0.0
    grad = np.zeros(n)
    hess = np.zeros((n, n))
    if terms.A.shape[0]:
        s = terms.b - terms.A @ z
        if np.any(s <= 0.0):
            return np.inf, None, None
        val -= float(np.sum(np.log(s)))
        inv_s = 1.0 / s
        grad += terms.A.T @ inv_s
        hess += (terms.A.T * inv_s ** 2) @ terms.A
    for Q, q, b in terms.quads:
        s = b - np.dot(q, z) - z @ Q @ z
        if s <= 0.0:
            return np.inf, None, None
        dg = q + 2.0 * (Q @ z)
        val -= np.log(s)
        grad += dg / s
        hess += np.outer(dg, dg) / (s * s) + 2.0 * Q / s
    for con in terms.hyps:
        zi, zj = z[con.i], z[con.j]
        if zi <= 0.0 or zj <= 0.0:
            return np.inf, None, None
        s = zi * zj - (z @ con.Q @ z + np.dot(con.q, z) + con.c)
        if s <= 0.0:
            return np.inf, None, None
        dw = -(2.0 * (con.Q @ z) + con.q)
        dw[con.i] += zj
        dw[con.j] += zi
        val -= np.log(s)
        grad -= dw / s
        h = np.outer(dw, dw) / (s * s) + 2.0 * con.Q / s
        h[con.i, con.j] -= 1.0 / s
        h[con.j, con.i] -= 1.0 / s
        hess += h
    return val, grad, hess


def _num_terms(terms):
    return terms.count


def _centering(z, c_obj, weight, terms, newton_budget):
    """Damped Newton on weight * (-c.z) + barrier(z).  Returns (z, steps_used)."""
    steps = 0
    while steps < newton_budget:
        val, grad, hess = _barrier(z, terms)
        if not np.isfinite(val):
            raise Infeasible("centering started outside the barrier domain")
        g = -weight * c_obj + grad
        H = hess + 1e-12 * np.eye(z.size)
        try:
            dz = -np.linalg.solve(H, g)
        except np.linalg.LinAlgError:
            dz = -np.linalg.lstsq(H, g, rcond=None)[0]
        decrement = -float(g @ dz)
        if decrement <= 2e-10:
            break
        f0 = weight * (-np.dot(c_obj, z)) + val
        step = 1.0
        while True:
            z_new = z + step * dz
            v_new = terms.value(z_new)
            if np.isfinite(v_new):
                f_new = weight * (-np.dot(c_obj, z_new)) + v_new
                if f_new <= f0 - ARMIJO_ALPHA * step * decrement:
                    break
            step *= ARMIJO_BETA
            if step < 1e-14:
                z_new = z
                break
        steps += 1
        if np.array_equal(z_new, z):
            break
        z = z_new
    return z, steps


def solve(problem: ConicProblem, start=None) -> SolveResult:
    """Barrier path-following solve.  ``start`` may be any point; if it is not
    strictly interior, a phase-I search is run first."""
    c_obj = np.asarray(problem.objective, dtype=float)
    terms = _Terms(problem)
    z = None
    if start is not None:
        z0 = np.asarray(start, dtype=float).copy()
        if np.isfinite(_barrier(z0, terms)[0]):
            z = z0
    if z is None:
        z = phase_one(problem, start=start)

    m = _num_terms(terms)
    mu = BARRIER_MU0
    budget = NEWTON_LIMIT
    status = "Optimal"
    mu_centered = mu
    while m * mu > GAP_TOL:
        z, used = _centering(z, c_obj, 1.0 / mu, terms, budget)
        mu_centered = mu
        budget -= used
        if budget <= 0:
            status = "IterLimit"
            break
        mu /= BARRIER_SHRINK

    kkt = _kkt_residual(z, c_obj, terms, mu_centered)
    return SolveResult(z_opt=z, objective_value=float(np.dot(c_obj, z)),
                       kkt_residual=kkt, status=status)


def _kkt_residual(z, c_obj, terms, mu):
    """Norm of the stationarity residual with barrier multipliers mu / slack."""
    _, grad, _ = _barrier(z, terms)
    if grad is None:
        return np.inf
    scale = max(1.0, float(np.linalg.norm(c_obj)))
    return float(np.linalg.norm(-c_obj + mu * grad)) / scale


def phase_one(problem: ConicProblem, start=None, margin=1e-9):
    """Find a strictly feasible point by slack minimization.

    All residuals are relaxed by a common slack that is then driven negative.
    With hyperbolic constraints the relaxed problem is not convex, but from
    near-feasible starts (the intended use) the descent still lands strictly
    inside; pure linear/quadratic problems are handled exactly.
    """
    n = problem.num_vars
    z0 = np.zeros(n) if start is None else np.asarray(start, dtype=float).copy()

    aug = ConicProblem(num_vars=n + 1, objective=np.zeros(n + 1))
    aug.objective[n] = -1.0  # maximize -sigma
    for con in problem.constraints:
        if isinstance(con, Linear):
            a = np.append(np.asarray(con.a, dtype=float), -1.0)
            aug.constraints.append(Linear(a=a, b=con.b))
        elif isinstance(con, Bound):
            if np.isfinite(con.lo):
                e = np.zeros(n + 1); e[con.i] = -1.0; e[n] = -1.0
                aug.constraints.append(Linear(a=e, b=-con.lo))
            if np.isfinite(con.hi):
                e = np.zeros(n + 1); e[con.i] = 1.0; e[n] = -1.0
                aug.constraints.append(Linear(a=e, b=con.hi))
        elif isinstance(con, ConvexQuadratic):
            Q = np.zeros((n + 1, n + 1)); Q[:n, :n] = con.Q
            q = np.append(np.asarray(con.q, dtype=float), -1.0)
            aug.constraints.append(ConvexQuadratic(Q=Q, q=q, b=con.b))
        elif isinstance(con, Hyperbolic):
            Q = np.zeros((n + 1, n + 1)); Q[:n, :n] = con.Q
            q = np.append(np.asarray(con.q, dtype=float), -1.0)
            aug.constraints.append(Hyperbolic(Q=Q, q=q, c=con.c, i=con.i, j=con.j))
            # cone-variable positivity stays unrelaxed: it keeps the barrier on
            # the convex branch and walls Newton off the z_i <= 0 corner
            for idx in (con.i, con.j):
                e = np.zeros(n + 1); e[idx] = -1.0
                aug.constraints.append(Linear(a=e, b=-1e-9))
        else:
            raise TypeError(f"unknown constraint type {type(con)!r}")

    terms = _Terms(aug)
    sigma0 = problem.max_violation(z0)
    w = np.append(z0, max(sigma0, 0.0) + 1.0)
    # the barrier only covers the positive branch of each hyperbolic cone, so
    # nudge its variables strictly positive before entering
    for con in terms.hyps:
        for idx in (con.i, con.j):
            if w[idx] <= 0.0:
                w[idx] = 1e-3
    for _ in range(50):
        if np.isfinite(_barrier(w, terms)[0]):
            break
        w[n] *= 2.0
    else:
        raise Infeasible("could not enter the relaxed barrier domain")

    mu = BARRIER_MU0
    m = _num_terms(terms)
    budget = 4 * NEWTON_LIMIT
    while m * mu > GAP_TOL:
        w, used = _centering(w, aug.objective, 1.0 / mu, terms, budget)
        budget -= used
        if w[n] < -10.0 * margin and problem.max_violation(w[:n]) < -margin:
            return w[:n]
        if budget <= 0:
            break
        mu /= BARRIER_SHRINK
    if problem.max_violation(w[:n]) < -margin:
        return w[:n]
    raise Infeasible(f"phase-I optimum {w[n]:.3e} exceeds tolerance")


def dump_problem(problem: ConicProblem, path):
    """Plain-text dump: one constraint per line, coefficient lists."""
    with open(path, "w") as fh:
        fh.write(f"vars {problem.num_vars}\n")
        fh.write("maximize " + " ".join(f"{v:.17g}" for v in problem.objective) + "\n")
        for con in problem.constraints:
            if isinstance(con, Linear):
                fh.write("linear " + " ".join(f"{v:.17g}" for v in con.a) + f" <= {con.b:.17g}\n")
            elif isinstance(con, Bound):
                fh.write(f"bound {con.i} {con.lo:.17g} {con.hi:.17g}\n")
            elif isinstance(con, ConvexQuadratic):
                fh.write("quad Q " + " ".join(f"{v:.17g}" for v in con.Q.ravel())
                         + " q " + " ".join(f"{v:.17g}" for v in con.q) + f" <= {con.b:.17g}\n")
            elif isinstance(con, Hyperbolic):
                fh.write("hyperbolic Q " + " ".join(f"{v:.17g}" for v in con.Q.ravel())
                         + " q " + " ".join(f"{v:.17g}" for v in con.q)
                         + f" c {con.c:.17g} <= z{con.i}*z{con.j}\n")
