"""Theoretical quadratic risk of spectral filters.

The eigenvalue distribution F(u) of R^T R is represented by a pooled sample
of spectra (``Spectrum``), and every integral over dF(u) is the average of
its integrand over the pooled eigenvalues. Because each sampled matrix
contributes exactly n eigenvalues, averaging per sample and then across
samples gives the same number; the per-sample averages are also kept so a
standard error can be attached.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DivergentRegimeError, ShapeError
from .filters import Standard
from .linalg import eigh, gram
from .model import DerivedParams, NoiseModel, RngSpec, sample_instance

NEG_CLAMP_REL_TOL = 1e-10
ZERO_EIGENVALUE = 1e-300


@dataclass(frozen=True, eq=False)
class Spectrum:
    """Eigenvalues of ``samples`` matrices R^T R, one ascending row per sample."""

    values: np.ndarray

    def __post_init__(self):
        v = np.array(self.values, dtype=np.float64)
        if v.ndim == 1:
            v = v[None, :]
        if v.ndim != 2 or v.size == 0:
            raise ShapeError(f"spectrum must be a (samples, n) array, got {v.shape}", v.shape)
        if not np.all(np.isfinite(v)):
            raise ValueError("spectrum eigenvalues must be finite")
        floor = -NEG_CLAMP_REL_TOL * max(float(np.max(np.abs(v))), 0.0)
        if np.any(v < floor):
            raise ValueError(f"negative eigenvalue {float(np.min(v))!r} in spectrum")
        v = np.sort(np.maximum(v, 0.0), axis=1)
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    @property
    def n(self) -> int:
        return self.values.shape[1]

    @property
    def samples(self) -> int:
        return self.values.shape[0]

    @property
    def eigenvalues(self) -> np.ndarray:
        """All pooled eigenvalues, ascending."""
        return np.sort(self.values, axis=None)

    def average(self, integrand) -> tuple[float, float]:
        """Mean of ``integrand(u)`` over dF(u) and its standard error across samples."""
        per_sample = np.mean(integrand(self.values), axis=1)
        return _mean_and_stderr(per_sample)


def _mean_and_stderr(x: np.ndarray) -> tuple[float, float]:
    k = x.shape[0]
    if np.any(np.isinf(x)):
        return math.inf, math.nan
    mean = math.fsum(x) / k
    if k < 2:
        return mean, math.nan
    var = math.fsum((x - mean) ** 2) / (k - 1)
    return mean, math.sqrt(var / k)


def pool_spectrum(m: NoiseModel, samples: int, rng: RngSpec = RngSpec()) -> Spectrum:
    """Eigenvalues of R^T R for ``samples`` instances drawn on streams rng.stream + k."""
    if samples < 1:
        raise ValueError("samples must be >= 1")
    rows = np.empty((samples, m.n))
    for k in range(samples):
        inst = sample_instance(m, rng.offset(k))
        rows[k] = eigh(gram(inst.R)).eigenvalues
    return Spectrum(rows)


def risk_integrand(u, g, theta, s):
    """Pointwise risk 1 - 2 theta u g + theta^2 u^2 g^2 + s u g^2 of gain g at eigenvalue u.

    Evaluated as (1 - theta u g)^2 + s u g^2, which is the same polynomial
    but cannot go negative through cancellation.
    """
    return (1.0 - theta * u * g) ** 2 + s * u * g**2


def _std_integrand(d: DerivedParams):
    def f(u):
        if d.s > 0 and np.any(u <= ZERO_EIGENVALUE):
            return np.full(u.shape, math.inf)
        with np.errstate(divide="ignore", invalid="ignore"):
            tail = np.where(u > ZERO_EIGENVALUE, d.s / u, 0.0)
        return (1.0 - d.theta) ** 2 + tail
    return f


def _opt_integrand(d: DerivedParams):
    def f(u):
        denom = d.s + d.theta**2 * u
        with np.errstate(divide="ignore", invalid="ignore"):
            # 0/0 in a dead direction with s = 0 contributes the prior variance 1
            return np.where(denom > 0, d.s / np.where(denom > 0, denom, 1.0), 1.0)
    return f


def risk_functional_stats(f, spec: Spectrum, d: DerivedParams) -> tuple[float, float]:
    """Eq. (3) risk of filter ``f`` over ``spec`` with its standard error."""
    if isinstance(f, Standard):
        return spec.average(_std_integrand(d))
    return spec.average(lambda u: risk_integrand(u, f.gains(u), d.theta, d.s))


def risk_functional(f, spec: Spectrum, d: DerivedParams) -> float:
    return risk_functional_stats(f, spec, d)[0]


def risk_opt_stats(spec: Spectrum, d: DerivedParams) -> tuple[float, float]:
    return spec.average(_opt_integrand(d))


def risk_opt(spec: Spectrum, d: DerivedParams) -> float:
    """Minimal attainable risk, the average of s / (s + theta^2 u)."""
    return risk_opt_stats(spec, d)[0]


def risk_std(spec: Spectrum, d: DerivedParams) -> float:
    """Risk of the standard solution, the average of (1 - theta)^2 + s/u; inf on a zero eigenvalue."""
    return spec.average(_std_integrand(d))[0]


def risk_gap(spec: Spectrum, d: DerivedParams) -> float:
    std = risk_std(spec, d)
    if math.isinf(std):
        return math.inf
    return std - risk_opt(spec, d)


def inverse_trace_stats(spec: Spectrum) -> tuple[float, float]:
    """Pooled estimate of the integral of 1/u dF(u), i.e. E n^-1 tr W^-1."""
    with np.errstate(divide="ignore"):
        return spec.average(lambda u: np.where(u > 0, 1.0 / np.where(u > 0, u, 1.0), np.inf))


def inverse_trace_oracle(m: NoiseModel) -> float:
    """Closed-form E n^-1 tr W^-1 for W = R^T R Wishart with scale (a+p)/n and N dof."""
    dof = m.N - m.n - 1
    if dof < 1:
        raise DivergentRegimeError(
            f"divergent regime: N - n - 1 = {dof} < 1, E tr W^-1 is infinite"
        )
    return m.n / ((m.a + m.p) * dof)


@dataclass(frozen=True)
class RiskReport:
    filter: str
    d_filter: float
    d_filter_stderr: float
    d_opt: float
    d_opt_stderr: float
    d_std: float
    spectrum_samples: int
    model: NoiseModel
