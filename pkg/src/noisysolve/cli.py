"""Command-line front end.

Exit codes: 0 success, 2 bad input (parse errors, shapes, parameters),
3 numerical failure (indefinite system, eigensolver breakdown, filter pole).
"""

from __future__ import annotations

import argparse
import contextlib
import itertools
import json
import sys

import numpy as np

from . import __version__
from .errors import DivergentRegimeError, NumericalError
from .fileio import fmt, read_matrix, read_vector, write_table
from .filters import Optimal, apply_filter, parse_filter, solve_optimal
from .linalg import eigh, gram
from .model import NoiseModel, RngSpec, derive_params
from .montecarlo import ExperimentConfig, risk_curve, run_experiment
from .risk import (
    Spectrum,
    inverse_trace_oracle,
    inverse_trace_stats,
    pool_spectrum,
    risk_functional,
    risk_functional_stats,
    risk_opt,
    risk_std,
)

EXIT_INPUT = 2
EXIT_NUMERIC = 3

MC_COLUMNS = ["filter", "empirical_mean", "stderr", "theory", "z_score"]
SPECTRUM_COLUMNS = ["sample", "index", "eigenvalue"]
SWEEP_COLUMNS = ["a", "p", "q", "n", "N", "filter", "theory", "empirical", "stderr", "gap_vs_opt"]
RISK_COLUMNS = ["filter", "theory", "stderr", "gap_vs_opt"]
SWEEP_KEYS = {"a", "p", "q", "n", "N", "dims", "filters", "trials", "seed", "samples", "workers"}


class InputError(ValueError):
    pass


@contextlib.contextmanager
def _output(path):
    if path is None:
        yield sys.stdout
    else:
        with open(path, "w", newline="") as fh:
            yield fh


def _summary(lines, to_stdout):
    stream = sys.stdout if to_stdout else sys.stderr
    for key, val in lines:
        stream.write(f"{key}: {val if isinstance(val, str) else fmt(val)}\n")


def _filters_arg(text):
    return [f for f in text.split(",") if f.strip()]


def _model(args, q=None):
    return NoiseModel(args.a, args.p, args.q if q is None else q, args.n, args.N)


def cmd_solve(args):
    r = read_matrix(args.matrix)
    y = read_vector(args.rhs)
    if y.shape[0] != r.shape[0]:
        raise InputError(f"dimension mismatch: matrix is {r.shape[0]}x{r.shape[1]}, "
                         f"rhs has {y.shape[0]} entries")
    m = NoiseModel(args.a, args.p, args.q, r.shape[1], r.shape[0])
    d = derive_params(m)
    f = parse_filter(args.method, d)
    if isinstance(f, Optimal):
        est = solve_optimal(r, y, d)
    else:
        est = apply_filter(r, y, f)
    spec = Spectrum(eigh(gram(r)).eigenvalues)
    with _output(args.out) as fh:
        for v in est:
            fh.write(fmt(v) + "\n")
    _summary([
        ("theta", d.theta), ("s", d.s), ("alpha", d.alpha), ("t", d.t),
        ("method", f.name),
        ("risk", risk_functional(f, spec, d)),
        ("risk_opt", risk_opt(spec, d)),
        ("risk_std", risk_std(spec, d)),
    ], args.out is not None)


def cmd_mc(args):
    cfg = ExperimentConfig(_model(args), _filters_arg(args.filters), args.trials, args.seed,
                           args.samples, args.workers)
    res = run_experiment(cfg)
    rows = [{"filter": e.filter, "empirical_mean": e.mean, "stderr": e.stderr,
             "theory": t.d_filter, "z_score": z}
            for e, t, z in zip(res.empirical, res.theory, res.z_scores())]
    with _output(args.out) as fh:
        write_table(rows, MC_COLUMNS, fh, args.format)


def cmd_risk(args):
    m = _model(args)
    d = derive_params(m)
    spec = pool_spectrum(m, args.samples, RngSpec(args.seed, 0))
    best = risk_opt(spec, d)
    rows = []
    for f in (parse_filter(t, d) for t in _filters_arg(args.filters)):
        val, se = risk_functional_stats(f, spec, d)
        rows.append({"filter": f.name, "theory": val, "stderr": se, "gap_vs_opt": val - best})
    with _output(args.out) as fh:
        write_table(rows, RISK_COLUMNS, fh, args.format)


def cmd_spectrum(args):
    m = _model(args, q=0.0)
    spec = pool_spectrum(m, args.samples, RngSpec(args.seed, 0))
    rows = [{"sample": k, "index": i, "eigenvalue": v}
            for k, row in enumerate(spec.values) for i, v in enumerate(row)]
    with _output(args.out) as fh:
        write_table(rows, SPECTRUM_COLUMNS, fh, args.format)
    inv, inv_se = inverse_trace_stats(spec)
    lines = [("samples", spec.samples), ("eigenvalue_mean", float(np.mean(spec.values))),
             ("eigenvalue_min", float(np.min(spec.values))),
             ("inverse_trace_estimate", inv), ("inverse_trace_stderr", inv_se)]
    try:
        lines.append(("inverse_trace_oracle", inverse_trace_oracle(m)))
    except DivergentRegimeError:
        lines.append(("inverse_trace_oracle", "divergent regime"))
    _summary(lines, args.out is not None)


def _axis(cfg, key, default):
    val = cfg.get(key, default)
    return list(val) if isinstance(val, list) else [val]


def load_sweep_config(path):
    try:
        with open(path) as fh:
            cfg = json.load(fh)
    except OSError as exc:
        raise InputError(f"{path}: cannot read config: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: invalid JSON at line {exc.lineno}, column {exc.colno}") from None
    if not isinstance(cfg, dict):
        raise InputError(f"{path}: config must be a JSON object")
    unknown = sorted(set(cfg) - SWEEP_KEYS)
    if unknown:
        raise InputError(f"{path}: unknown config key {unknown[0]!r}")
    if "dims" in cfg and ("n" in cfg or "N" in cfg):
        raise InputError(f"{path}: give either 'dims' or 'n'/'N', not both")
    if "dims" in cfg:
        dims = [tuple(pair) for pair in cfg["dims"]]
    else:
        dims = list(itertools.product(_axis(cfg, "n", None), _axis(cfg, "N", None)))
        if any(v is None for pair in dims for v in pair):
            raise InputError(f"{path}: config needs 'n' and 'N' (or 'dims')")
    grid = [NoiseModel(a, p, q, n, N)
            for a, p, q in itertools.product(_axis(cfg, "a", 1.0), _axis(cfg, "p", 0.0),
                                             _axis(cfg, "q", 0.0))
            for n, N in dims]
    return {
        "grid": grid,
        "filters": _axis(cfg, "filters", ["optimal", "standard"]),
        "trials": int(cfg.get("trials", 1000)),
        "seed": int(cfg.get("seed", 0)),
        "samples": int(cfg.get("samples", 1000)),
        "workers": int(cfg.get("workers", 1)),
    }


def cmd_sweep(args):
    cfg = load_sweep_config(args.config)
    rows = risk_curve(cfg["grid"], cfg["filters"], cfg["trials"], cfg["seed"],
                      cfg["samples"], cfg["workers"])
    with _output(args.out) as fh:
        write_table([vars(r) for r in rows], SWEEP_COLUMNS, fh, args.format)


def _model_flags(p, q=True):
    p.add_argument("--a", type=float, required=True, help="prior coefficient variance scale")
    p.add_argument("--p", type=float, default=0.0, help="coefficient noise scale")
    if q:
        p.add_argument("--q", type=float, default=0.0, help="right-hand-side noise scale")
    p.add_argument("--n", type=int, required=True, help="number of unknowns")
    p.add_argument("--N", type=int, required=True, help="number of equations")
    p.add_argument("--seed", type=int, default=0)


def _output_flags(p):
    p.add_argument("--out", default=None, help="output path (default: stdout)")
    p.add_argument("--format", choices=["csv", "json"], default="csv")


def build_parser():
    parser = argparse.ArgumentParser(
        prog="noisysolve",
        description="Minimum-risk solutions of linear systems with noisy coefficients.",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="solve one observed system R x = y")
    p.add_argument("--matrix", required=True)
    p.add_argument("--rhs", required=True)
    p.add_argument("--a", type=float, required=True)
    p.add_argument("--p", type=float, default=0.0)
    p.add_argument("--q", type=float, default=0.0)
    p.add_argument("--method", default="optimal",
                   help="standard | optimal | tikhonov[:t] | confluent:lambda")
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("mc", help="Monte Carlo risk vs theory")
    _model_flags(p)
    p.add_argument("--trials", type=int, default=1000)
    p.add_argument("--samples", type=int, default=1000, help="spectra pooled for the theory side")
    p.add_argument("--filters", default="optimal,tikhonov,standard")
    p.add_argument("--workers", type=int, default=1)
    _output_flags(p)
    p.set_defaults(func=cmd_mc)

    p = sub.add_parser("risk", help="theoretical risks on a pooled spectrum")
    _model_flags(p)
    p.add_argument("--samples", type=int, default=1000)
    p.add_argument("--filters", default="optimal,tikhonov,standard")
    _output_flags(p)
    p.set_defaults(func=cmd_risk)

    p = sub.add_parser("spectrum", help="pooled eigenvalues of R^T R")
    _model_flags(p, q=False)
    p.add_argument("--samples", type=int, default=1000)
    _output_flags(p)
    p.set_defaults(func=cmd_spectrum)

    p = sub.add_parser("sweep", help="risk table over a parameter grid")
    p.add_argument("--config", required=True)
    _output_flags(p)
    p.set_defaults(func=cmd_sweep)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        args.func(args)
    except NumericalError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    return 0


if __name__ == "__main__":
    sys.exit(main())
