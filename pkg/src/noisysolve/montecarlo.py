"""Monte Carlo validation of the theoretical risk formulas.

Trial k draws its problem from stream k of the experiment seed and feeds
the same (R, y) to every filter. The theoretical side pools spectra from
streams starting at ``THEORY_STREAM_BASE`` so the two sides are
independent. Per-trial results are stored by trial index and reduced
with ``math.fsum``, which makes the output independent of worker count.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .errors import NumericalError
from .filters import apply_decomposed, parse_filter
from .linalg import eigh, gram
from .model import CheckReport, NoiseModel, RngSpec, derive_params, sample_instance, standard_normals
from .risk import (
    RiskReport,
    pool_spectrum,
    risk_functional_stats,
    risk_opt_stats,
    risk_std,
)

THEORY_STREAM_BASE = 1 << 63
QUADFORM_STREAM = (1 << 62) + 1


@dataclass
class ExperimentConfig:
    model: NoiseModel
    filters: list
    trials: int = 1000
    seed: int = 0
    spectrum_samples: int = 1000
    workers: int = 1

    def __post_init__(self):
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        if self.spectrum_samples < 1:
            raise ValueError("spectrum_samples must be >= 1")
        if not self.filters:
            raise ValueError("at least one filter is required")
        d = derive_params(self.model)
        self.filters = [parse_filter(f, d) if isinstance(f, str) else f for f in self.filters]


@dataclass(frozen=True)
class EmpiricalRisk:
    filter: str
    mean: float
    stderr: float
    trials: int
    median: float
    failures: int = 0


@dataclass
class ExperimentResult:
    config: ExperimentConfig
    empirical: list[EmpiricalRisk]
    theory: list[RiskReport]
    errors: np.ndarray = field(repr=False)  # (trials, filters) squared errors, nan on failure

    def z_scores(self) -> list[float]:
        return [z_score(e.mean, e.stderr, t.d_filter, t.d_filter_stderr)
                for e, t in zip(self.empirical, self.theory)]


def z_score(empirical, emp_se, theory, theory_se) -> float:
    if math.isnan(empirical) or math.isnan(theory):
        return math.nan
    if math.isinf(theory) or math.isinf(empirical):
        return math.nan if math.isinf(theory) and math.isinf(empirical) else (
            -math.inf if math.isinf(theory) else math.inf)
    se = math.sqrt(_nan0(emp_se) ** 2 + _nan0(theory_se) ** 2)
    diff = empirical - theory
    if se == 0.0:
        return 0.0 if diff == 0.0 else math.copysign(math.inf, diff)
    return diff / se


def _nan0(x):
    return 0.0 if math.isnan(x) else x


def _run_trials(model, filters, seed, lo, hi, out):
    base = RngSpec(seed, 0)
    for k in range(lo, hi):
        inst = sample_instance(model, base.offset(k))
        dec = eigh(gram(inst.R))  # eigensolver failure aborts the run
        rty = inst.R.T @ inst.y
        for j, f in enumerate(filters):
            try:
                est = apply_decomposed(dec, rty, f)
            except NumericalError:
                continue
            diff = inst.x - est
            out[k, j] = float(diff @ diff)


def _summarise(name, col) -> EmpiricalRisk:
    ok = col[~np.isnan(col)]
    k = ok.shape[0]
    if k == 0:
        return EmpiricalRisk(name, math.nan, math.nan, 0, math.nan, col.shape[0])
    mean = math.fsum(ok) / k
    stderr = math.sqrt(math.fsum((ok - mean) ** 2) / (k - 1) / k) if k > 1 else math.nan
    return EmpiricalRisk(name, mean, stderr, k, float(np.median(ok)), col.shape[0] - k)


def run_experiment(cfg: ExperimentConfig) -> ExperimentResult:
    m = cfg.model
    d = derive_params(m)
    errors = np.full((cfg.trials, len(cfg.filters)), np.nan)
    workers = max(1, min(cfg.workers, cfg.trials))
    if workers == 1:
        _run_trials(m, cfg.filters, cfg.seed, 0, cfg.trials, errors)
    else:
        bounds = np.linspace(0, cfg.trials, workers + 1).astype(int)
        with ThreadPoolExecutor(workers) as pool:
            futures = [pool.submit(_run_trials, m, cfg.filters, cfg.seed, lo, hi, errors)
                       for lo, hi in zip(bounds[:-1], bounds[1:])]
            for fut in futures:
                fut.result()
    empirical = [_summarise(f.name, errors[:, j]) for j, f in enumerate(cfg.filters)]

    spec = pool_spectrum(m, cfg.spectrum_samples, RngSpec(cfg.seed, THEORY_STREAM_BASE))
    d_opt, d_opt_se = risk_opt_stats(spec, d)
    d_std = risk_std(spec, d)
    theory = []
    for f in cfg.filters:
        try:
            val, se = risk_functional_stats(f, spec, d)
        except NumericalError:
            val, se = math.nan, math.nan
        theory.append(RiskReport(f.name, val, se, d_opt, d_opt_se, d_std, spec.samples, m))
    return ExperimentResult(cfg, empirical, theory, errors)


@dataclass(frozen=True)
class CurveRow:
    a: float
    p: float
    q: float
    n: int
    N: int
    filter: str
    theory: float
    theory_stderr: float
    empirical: float
    stderr: float
    gap_vs_opt: float


def risk_curve(model_grid, filter_kinds, trials, seed, spectrum_samples=1000, workers=1):
    """One row per (model, filter): theoretical risk, empirical risk and gap to the optimum.

    ``filter_kinds`` are strings for ``parse_filter`` so that ``optimal`` and
    ``tikhonov`` pick up each model's own constants.
    """
    if not model_grid:
        raise ValueError("model grid is empty")
    rows = []
    for m in model_grid:
        cfg = ExperimentConfig(m, list(filter_kinds), trials, seed, spectrum_samples, workers)
        res = run_experiment(cfg)
        for emp, th in zip(res.empirical, res.theory):
            if math.isinf(th.d_filter):
                gap = math.inf
            else:
                gap = th.d_filter - th.d_opt
            rows.append(CurveRow(m.a, m.p, m.q, m.n, m.N, emp.filter, th.d_filter,
                                 th.d_filter_stderr, emp.mean, emp.stderr, gap))
    return rows


def rhs_quadratic_form_check(m: NoiseModel, trials: int, seed: int = 0, matrix=None) -> CheckReport:
    """Monte Carlo E[db^T M db] against q n^-1 tr M for db_i ~ N(0, q/n).

    ``matrix`` defaults to a fixed random symmetric N x N matrix drawn from ``seed``.
    """
    if trials < 1000:
        raise ValueError("rhs_quadratic_form_check needs at least 1000 trials")
    N = m.N
    if matrix is None:
        g = standard_normals(RngSpec(seed, QUADFORM_STREAM), N * N).reshape(N, N)
        matrix = 0.5 * (g + g.T)
    matrix = np.asarray(matrix, dtype=np.float64)
    if matrix.shape != (N, N):
        raise ValueError(f"matrix must be {N}x{N}, got {matrix.shape}")
    db = math.sqrt(m.q / m.n) * standard_normals(RngSpec(seed, QUADFORM_STREAM + 1), trials * N)
    db = db.reshape(trials, N)
    forms = np.einsum("ti,ij,tj->t", db, matrix, db)
    rhs = m.q / m.n * float(np.trace(matrix))
    stderr = float(np.std(forms, ddof=1) / math.sqrt(trials))
    return CheckReport(math.fsum(forms) / trials, rhs, stderr)

