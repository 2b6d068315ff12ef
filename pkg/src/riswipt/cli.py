"""Command-line experiment runner.

Usage:
    riswipt run <config-file> [--out DIR] [--trials N] [--seed S] [--threads T]
    riswipt trace <run-id> [--out DIR]

The config file is a flat key = value schema (# starts a comment):

    sweep = M
    values = 12, 14, 16
    algorithms = alg2a/prc-only, random-theta/prc-only
    trials = 10
    M = 8
    N = 64
    K = 10
    K_E = 3
    P_dBm = 25

Exit codes: 0 success, 2 config error, 3 all trials failed.
"""

import argparse
import sys
from dataclasses import fields

from .channel import Scenario
from .experiments import (ConfigError, ExperimentSpec, UnknownRunId,
                          convergence_dump, run)

_SCENARIO_INT = {"M", "N", "K", "K_E", "seed"}
_SCENARIO_FLOAT = {"P_dBm", "sigma_dBm", "e_min_dBm", "zeta", "alpha_rzf",
                   "rician_K", "iu_height", "eu_radius", "eu_height"}
_SPEC_KEYS = {"sweep", "values", "algorithms", "trials", "out_dir", "seed"}


def _parse_lines(text):
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected 'key = value', got {raw!r}")
        key, _, value = line.partition("=")
        yield lineno, key.strip(), value.strip()


def _convert(lineno, key, value, kind):
    try:
        return kind(value)
    except ValueError:
        raise ConfigError(f"line {lineno}: {key} must be a {kind.__name__}, "
                          f"got {value!r}") from None


def parse_config(text):
    scenario_kw = {}
    sweep = values = None
    algorithms = []
    trials = 1
    out_dir = "results"
    master_seed = 0
    scenario_fields = {f.name for f in fields(Scenario)}
    for lineno, key, value in _parse_lines(text):
        if key == "sweep":
            sweep = value
        elif key == "values":
            parts = [v.strip() for v in value.split(",") if v.strip()]
            values = [_convert(lineno, key, v, float) for v in parts]
        elif key == "algorithms":
            for item in (v.strip() for v in value.split(",") if v.strip()):
                alg, sep, mode = item.partition("/")
                if not sep:
                    raise ConfigError(
                        f"line {lineno}: algorithm entries are "
                        f"'<phase-alg>/<delivery-mode>', got {item!r}")
                algorithms.append((alg, mode))
        elif key == "trials":
            trials = _convert(lineno, key, value, int)
        elif key == "out_dir":
            out_dir = value
        elif key == "seed":
            master_seed = _convert(lineno, key, value, int)
        elif key in _SCENARIO_INT:
            scenario_kw[key] = _convert(lineno, key, value, int)
        elif key in _SCENARIO_FLOAT:
            scenario_kw[key] = _convert(lineno, key, value, float)
        elif key in scenario_fields:
            raise ConfigError(f"line {lineno}: key {key!r} is not settable "
                              "from a config file")
        else:
            raise ConfigError(f"line {lineno}: unknown key {key!r}")
    if sweep is None or values is None:
        raise ConfigError("config must set both 'sweep' and 'values'")
    if not algorithms:
        raise ConfigError("config must set 'algorithms'")
    try:
        scenario = Scenario(**scenario_kw)
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    if sweep in ("M", "N", "K"):
        values = [int(v) for v in values]
    return ExperimentSpec(scenario=scenario, sweep_name=sweep,
                          sweep_values=values, algorithms=algorithms,
                          trials=trials, out_dir=out_dir,
                          master_seed=master_seed)


def _cmd_run(args):
    try:
        with open(args.config) as fh:
            text = fh.read()
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    try:
        spec = parse_config(text)
        if args.out is not None:
            spec.out_dir = args.out
        if args.trials is not None:
            if args.trials < 1:
                raise ConfigError("trials must be >= 1")
            spec.trials = args.trials
        if args.seed is not None:
            spec.master_seed = args.seed
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    results = run(spec, threads=args.threads,
                  log=lambda msg: print(msg, file=sys.stderr))
    n_ok = sum(r.status == "ok" for r in results)
    print(f"wrote {len(results)} rows to {spec.out_dir}/results.csv "
          f"({n_ok} ok, {len(results) - n_ok} failed)")
    return 0 if n_ok > 0 else 3


def _cmd_trace(args):
    try:
        rows = convergence_dump(args.out, args.run_id)
    except UnknownRunId as exc:
        print(f"error: unknown run id {exc}", file=sys.stderr)
        return 2
    print("iteration,objective,gamma")
    for row in rows:
        print(",".join(row))
    return 0


def main(argv=None):
    parser = argparse.ArgumentParser(prog="riswipt", description=__doc__,
                                     formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = parser.add_subparsers(dest="command", required=True)
    p_run = sub.add_parser("run", help="run a Monte-Carlo sweep")
    p_run.add_argument("config")
    p_run.add_argument("--out", default=None)
    p_run.add_argument("--trials", type=int, default=None)
    p_run.add_argument("--seed", type=int, default=None)
    p_run.add_argument("--threads", type=int, default=1)
    p_run.set_defaults(func=_cmd_run)
    p_trace = sub.add_parser("trace", help="print a stored convergence trace")
    p_trace.add_argument("run_id")
    p_trace.add_argument("--out", default="results")
    p_trace.set_defaults(func=_cmd_trace)
    args = parser.parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
