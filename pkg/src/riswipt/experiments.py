"""Monte-Carlo experiment harness.

Runs sweeps over one scenario axis (M, N, K, or P_dBm) for a set of
phase-configuration algorithms combined with a delivery mode, and writes
CSV result tables plus per-run convergence traces.  Output is plain CSV
with a gnuplot-ready column layout; plotting is out of scope.

Trial seeds are derived by hashing (master seed, sweep value, algorithm,
trial index), so results are reproducible and independent of execution
order; re-running with the same master seed reproduces every column
byte for byte except wall_ms.
"""

import csv
import hashlib
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from pathlib import Path

import numpy as np
from scipy import stats

from .channel import Scenario, generate
from .phase_common import PrcRunReport, random_theta
from .rzf_phase import (default_alpha, logdet_full_step, logdet_step_descent,
                        rzf_trace_maximize)
from .swipt import (info_only, path_follow_igs, path_follow_rzf,
                    path_follow_zf, rate_rzf, rzf_effective_channels)
from .zf_phase import (full_step_concave, full_step_perturbed, step_descent,
                       zf_throughput)

NATS_TO_BPSHZ = float(np.log2(np.e))

PHASE_ALGORITHMS = ("alg1-plain", "alg1-bb", "alg1-pbb", "alg2a", "alg2b",
                    "alg3", "alg4", "alg5", "random-theta")
DELIVERY_MODES = ("prc-only", "zf-swipt", "rzf-swipt", "igs-swipt",
                  "info-only", "info-only-igs")
SWEEP_AXES = ("M", "N", "K", "P_dBm")

# algorithms whose phase objective is the ridge/log-det family; the rest
# target the zero-forcing trace objective
RIDGE_FAMILY = ("alg3", "alg4", "alg5")

DATA_COLUMNS = ("sweep_name", "sweep_value", "algorithm", "trial", "seed",
                "min_throughput_bpshz", "iterations", "wall_ms", "status")
AGGREGATE_COLUMNS = ("sweep_name", "sweep_value", "algorithm", "n_ok",
                     "mean_bpshz", "ci95_lo", "ci95_hi", "mean_iterations")
TRACE_COLUMNS = ("iteration", "objective", "gamma")


class ConfigError(Exception):
    pass


class UnknownRunId(Exception):
    pass


@dataclass
class ExperimentSpec:
    """One sweep: base scenario, swept axis, algorithm list, trial count."""

    scenario: Scenario
    sweep_name: str
    sweep_values: list
    algorithms: list          # list of (phase_algorithm, delivery_mode)
    trials: int = 1
    out_dir: str = "results"
    master_seed: int = 0

    def __post_init__(self):
        if self.sweep_name not in SWEEP_AXES:
            raise ConfigError(f"sweep axis must be one of {SWEEP_AXES}, "
                              f"got {self.sweep_name!r}")
        vals = list(self.sweep_values)
        if not vals or any(b <= a for a, b in zip(vals, vals[1:])):
            raise ConfigError("sweep values must be non-empty and strictly increasing")
        if self.trials < 1:
            raise ConfigError("trials must be >= 1")
        if not self.algorithms:
            raise ConfigError("at least one algorithm is required")
        for alg, mode in self.algorithms:
            if alg not in PHASE_ALGORITHMS:
                raise ConfigError(f"unknown phase algorithm {alg!r}")
            if mode not in DELIVERY_MODES:
                raise ConfigError(f"unknown delivery mode {mode!r}")


@dataclass
class TrialResult:
    sweep_value: float
    algorithm: str
    trial: int
    seed: int
    gamma_nats: float
    iterations: int
    wall_ms: float
    status: str
    objective_trace: list = field(default_factory=list)
    gamma_trace: list = field(default_factory=list)

    @property
    def bpshz(self):
        return self.gamma_nats * NATS_TO_BPSHZ


def trial_seed(master, sweep_value, algorithm, trial):
    """Stable 63-bit seed from the run coordinates (order independent)."""
    key = f"{master}|{sweep_value!r}|{algorithm}|{trial}".encode()
    digest = hashlib.blake2b(key, digest_size=8).digest()
    return int.from_bytes(digest, "big") >> 1


def run_id(sweep_value, algorithm, trial):
    tag = f"{sweep_value:g}" if isinstance(sweep_value, float) else str(sweep_value)
    return f"{tag}_{algorithm.replace('/', '-')}_{trial}"


def _sweep_scenario(spec, value):
    value = int(value) if spec.sweep_name in ("M", "N", "K") else float(value)
    return replace(spec.scenario, **{spec.sweep_name: value})


def _run_phase(alg, channels, theta0, alpha):
    if alg == "random-theta":
        return PrcRunReport(theta_opt=theta0, objective_trace=[],
                            iterations=0, converged=True)
    if alg == "alg1-plain":
        return step_descent(channels, theta0, rule="plain")
    if alg == "alg1-bb":
        return step_descent(channels, theta0, rule="bb")
    if alg == "alg1-pbb":
        return step_descent(channels, theta0, rule="pbb")
    if alg == "alg2a":
        return full_step_concave(channels, theta0)
    if alg == "alg2b":
        return full_step_perturbed(channels, theta0)
    if alg == "alg3":
        return rzf_trace_maximize(channels, theta0, alpha)
    if alg == "alg4":
        return logdet_step_descent(channels, theta0, alpha)
    if alg == "alg5":
        return logdet_full_step(channels, theta0, alpha)
    raise ConfigError(f"unknown phase algorithm {alg!r}")


def rzf_min_throughput(channels, theta, alpha, P, sigma):
    """Min-user rate (nats) under ridge beams with a uniform power split."""
    eff = rzf_effective_channels(channels, theta, alpha)
    K = eff.hbar.shape[0]
    p = np.sqrt(P / (K * eff.beams))
    return min(rate_rzf(p, k, eff, sigma) for k in range(K))


def _prc_only_metric(alg, scenario, channels, theta, alpha):
    ridge = alg in RIDGE_FAMILY or scenario.K > scenario.M
    if ridge:
        a = default_alpha(channels, theta) if alpha is None else alpha
        return rzf_min_throughput(channels, theta, a, scenario.P, scenario.sigma)
    return zf_throughput(channels, theta, scenario.P, scenario.sigma)


def run_trial(spec, sweep_value, alg, mode, trial):
    """Execute one (sweep value, algorithm, trial) cell; never raises."""
    name = f"{alg}/{mode}"
    seed = trial_seed(spec.master_seed, sweep_value, name, trial)
    t0 = time.perf_counter()
    try:
        scenario = _sweep_scenario(spec, sweep_value)
        scenario = replace(scenario, seed=seed)
        channels = generate(scenario)
        rng = np.random.default_rng([seed, 0x51])
        theta0 = random_theta(scenario.N, rng)
        alpha = scenario.alpha_rzf
        phase = _run_phase(alg, channels, theta0, alpha)
        theta = phase.theta_opt
        gamma_trace = []
        if mode == "prc-only":
            gamma = _prc_only_metric(alg, scenario, channels, theta, alpha)
            iters = phase.iterations
        else:
            if mode == "zf-swipt":
                rep = path_follow_zf(scenario, channels, theta)
            elif mode == "rzf-swipt":
                rep = path_follow_rzf(scenario, channels, theta, alpha)
            elif mode == "igs-swipt":
                rep = path_follow_igs(scenario, channels, theta, alpha)
            elif mode == "info-only":
                rep = info_only(scenario, channels, theta, alpha, mode="proper")
            elif mode == "info-only-igs":
                rep = info_only(scenario, channels, theta, alpha, mode="improper")
            else:
                raise ConfigError(f"unknown delivery mode {mode!r}")
            gamma = rep.state.gamma
            iters = rep.iterations
            gamma_trace = list(rep.gamma_trace)
        status = "ok"
        obj_trace = list(phase.objective_trace)
    except Exception as exc:  # record per-trial failures, never abort the sweep
        gamma, iters, status = float("nan"), 0, f"failed:{type(exc).__name__}"
        obj_trace, gamma_trace = [], []
    wall_ms = 1e3 * (time.perf_counter() - t0)
    return TrialResult(sweep_value=sweep_value, algorithm=name, trial=trial,
                       seed=seed, gamma_nats=gamma, iterations=iters,
                       wall_ms=wall_ms, status=status,
                       objective_trace=obj_trace, gamma_trace=gamma_trace)


def _fmt(x):
    if isinstance(x, float):
        return repr(float(x))
    return str(x)


def _write_csv(path, header, rows):
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        writer.writerows([[_fmt(v) for v in row] for row in rows])


def _aggregate(spec, results):
    rows = []
    for value in spec.sweep_values:
        for alg, mode in spec.algorithms:
            name = f"{alg}/{mode}"
            cell = [r for r in results
                    if r.sweep_value == value and r.algorithm == name
                    and r.status == "ok"]
            if not cell:
                rows.append((spec.sweep_name, value, name, 0,
                             float("nan"), float("nan"), float("nan"),
                             float("nan")))
                continue
            vals = np.array([r.bpshz for r in cell])
            mean = float(np.mean(vals))
            if vals.size > 1:
                half = float(stats.t.ppf(0.975, vals.size - 1)
                             * np.std(vals, ddof=1) / np.sqrt(vals.size))
            else:
                half = 0.0
            rows.append((spec.sweep_name, value, name, vals.size, mean,
                         mean - half, mean + half,
                         float(np.mean([r.iterations for r in cell]))))
    return rows


def _dump_traces(spec, results):
    trace_dir = Path(spec.out_dir) / "traces"
    trace_dir.mkdir(parents=True, exist_ok=True)
    for r in results:
        rid = run_id(r.sweep_value, r.algorithm, r.trial)
        n = max(len(r.objective_trace), len(r.gamma_trace))
        rows = []
        for i in range(n):
            obj = r.objective_trace[i] if i < len(r.objective_trace) else ""
            gam = r.gamma_trace[i] if i < len(r.gamma_trace) else ""
            rows.append((i, obj, gam))
        _write_csv(trace_dir / f"{rid}.csv", TRACE_COLUMNS, rows)


def run(spec: ExperimentSpec, threads=1, log=None):
    """Run the full sweep; returns the list of TrialResult rows.

    Writes results.csv (one row per trial), aggregate.csv (means and 95%
    confidence intervals of the bps/Hz metric) and traces/<run-id>.csv
    under spec.out_dir.
    """
    cells = [(value, alg, mode, trial)
             for value in spec.sweep_values
             for alg, mode in spec.algorithms
             for trial in range(spec.trials)]
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(
                lambda c: run_trial(spec, c[0], c[1], c[2], c[3]), cells))
    else:
        results = [run_trial(spec, *c) for c in cells]
    results.sort(key=lambda r: (r.sweep_value, r.algorithm, r.trial))
    if log is not None:
        for r in results:
            log(f"{spec.sweep_name}={r.sweep_value} {r.algorithm} "
                f"trial={r.trial} {r.status} "
                f"bpshz={r.bpshz:.4f} iters={r.iterations}")

    out = Path(spec.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    _write_csv(out / "results.csv", DATA_COLUMNS,
               [(spec.sweep_name, r.sweep_value, r.algorithm, r.trial, r.seed,
                 r.bpshz, r.iterations, r.wall_ms, r.status) for r in results])
    _write_csv(out / "aggregate.csv", AGGREGATE_COLUMNS, _aggregate(spec, results))
    _dump_traces(spec, results)
    return results


def convergence_dump(out_dir, rid):
    """Return the rows of a stored per-run convergence trace."""
    path = Path(out_dir) / "traces" / f"{rid}.csv"
    if not path.exists():
        raise UnknownRunId(rid)
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = tuple(next(reader))
        if header != TRACE_COLUMNS:
            raise UnknownRunId(f"{rid}: malformed trace file")
        return [tuple(row) for row in reader]
