"""Spectral estimators x_hat = Gamma R^T y.

Gamma shares eigenvectors with R^T R and scales eigendirection i by a
scalar gain gamma(lambda_i). Each filter below is a frozen dataclass whose
``gains`` method maps an array of eigenvalues to gains.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DeflationSingularityError, ShapeError
from .linalg import EigenDecomposition, eigh, gram, solve_spd
from .model import DerivedParams

PINV_REL_TOL = 1e-10
DEFLATION_REL_TOL = 1e-8


def _truncated_reciprocal(denom: np.ndarray, u: np.ndarray, numer: float = 1.0) -> np.ndarray:
    # Directions with u <= 1e-10 * max(u, 1) get gain 0 (minimum-norm completion).
    cutoff = PINV_REL_TOL * max(float(np.max(u)) if u.size else 0.0, 1.0)
    out = np.zeros_like(u, dtype=np.float64)
    live = u > cutoff
    out[live] = numer / denom[live]
    return out


@dataclass(frozen=True)
class Standard:
    """gamma(u) = 1/u, with pseudoinverse truncation near u = 0."""

    name = "standard"

    def gains(self, u):
        u = np.asarray(u, dtype=np.float64)
        return _truncated_reciprocal(u, u)


@dataclass(frozen=True)
class Tikhonov:
    t: float

    def __post_init__(self):
        if not self.t >= 0:
            raise ValueError(f"Tikhonov parameter must be >= 0, got {self.t}")

    @property
    def name(self):
        return f"tikhonov:{self.t!r}"

    def gains(self, u):
        u = np.asarray(u, dtype=np.float64)
        if self.t == 0:
            return _truncated_reciprocal(u, u)
        return 1.0 / (u + self.t)


@dataclass(frozen=True)
class Optimal:
    """gamma(u) = theta / (theta^2 u + s), the minimum-risk filter."""

    theta: float
    s: float

    def __post_init__(self):
        if not 0 < self.theta <= 1:
            raise ValueError(f"theta must lie in (0, 1], got {self.theta}")
        if not self.s >= 0:
            raise ValueError(f"s must be >= 0, got {self.s}")

    @classmethod
    def from_params(cls, d: DerivedParams) -> Optimal:
        return cls(d.theta, d.s)

    name = "optimal"

    def gains(self, u):
        u = np.asarray(u, dtype=np.float64)
        denom = self.theta**2 * u + self.s
        if self.s == 0:
            return _truncated_reciprocal(denom, u, self.theta)
        return self.theta / denom


@dataclass(frozen=True)
class Confluent:
    """gamma(u) = 1/(u - lam). Not in class K; errors at its pole."""

    lam: float

    def __post_init__(self):
        if not self.lam >= 0:
            raise ValueError(f"confluent lambda must be >= 0, got {self.lam}")

    @property
    def name(self):
        return f"confluent:{self.lam!r}"

    def gains(self, u):
        u = np.asarray(u, dtype=np.float64)
        gap = u - self.lam
        if u.size:
            tol = DEFLATION_REL_TOL * float(np.max(u))
            close = np.abs(gap) <= tol
            if np.any(close):
                raise DeflationSingularityError(float(u[np.argmax(close)]), self.lam)
        return 1.0 / gap


@dataclass(frozen=True)
class Custom:
    """Gains tabulated at eigenvalue nodes; evaluated by piecewise-linear lookup."""

    nodes: tuple
    values: tuple
    name: str = "custom"

    def __post_init__(self):
        nodes = np.asarray(self.nodes, dtype=np.float64)
        values = np.asarray(self.values, dtype=np.float64)
        if nodes.ndim != 1 or nodes.shape != values.shape or nodes.size == 0:
            raise ShapeError("custom filter needs equal-length, non-empty nodes and values")
        if np.any(np.diff(nodes) < 0):
            raise ValueError("custom filter nodes must be ascending")
        if np.any(values < 0) or not np.all(np.isfinite(values)):
            raise ValueError("custom filter gains must be finite and >= 0")
        object.__setattr__(self, "nodes", tuple(nodes.tolist()))
        object.__setattr__(self, "values", tuple(values.tolist()))

    def gains(self, u):
        return np.interp(np.asarray(u, dtype=np.float64), self.nodes, self.values)


def parse_filter(text: str, d: DerivedParams | None = None):
    """Build a filter from ``standard``, ``optimal``, ``tikhonov[:t]`` or ``confluent:lam``.

    ``optimal`` and bare ``tikhonov`` take their constants from ``d``.
    """
    kind, _, arg = text.strip().lower().partition(":")
    if kind == "standard" and not arg:
        return Standard()
    if kind == "optimal" and not arg:
        if d is None:
            raise ValueError("optimal filter needs model parameters")
        return Optimal.from_params(d)
    if kind == "tikhonov":
        if arg:
            return Tikhonov(float(arg))
        if d is None:
            raise ValueError("tikhonov without a parameter needs model parameters")
        return Tikhonov(d.t)
    if kind == "confluent" and arg:
        return Confluent(float(arg))
    raise ValueError(f"unknown filter {text!r}")


def _check_system(r, y):
    if r.ndim != 2 or y.ndim != 1 or r.shape[0] != y.shape[0]:
        raise ShapeError(f"system shapes do not conform: R {r.shape}, y {y.shape}", r.shape, y.shape)


def apply_decomposed(dec: EigenDecomposition, rty: np.ndarray, f) -> np.ndarray:
    """Filtered estimate from a precomputed eigendecomposition of R^T R and R^T y."""
    return dec.apply(f.gains(dec.eigenvalues), rty)


def apply_filter(r: np.ndarray, y: np.ndarray, f) -> np.ndarray:
    _check_system(r, y)
    return apply_decomposed(eigh(gram(r)), r.T @ y, f)


def solve_optimal(r: np.ndarray, y: np.ndarray, d: DerivedParams) -> np.ndarray:
    """Ridge form of the optimal estimate: alpha * (R^T R + t I)^{-1} R^T y."""
    _check_system(r, y)
    g = gram(r)
    g[np.diag_indices_from(g)] += d.t
    return d.alpha * solve_spd(g, r.T @ y)


def solve_standard(r: np.ndarray, y: np.ndarray) -> np.ndarray:
    return apply_filter(r, y, Standard())


def class_k_witness(f, eigenvalues) -> float:
    """max of u (1 + u) gamma(u)^2 over the given eigenvalues."""
    u = np.asarray(getattr(eigenvalues, "eigenvalues", eigenvalues), dtype=np.float64)
    if isinstance(f, Standard):
        # the witness uses gamma = 1/u literally; it is infinite at u = 0
        with np.errstate(divide="ignore"):
            g = 1.0 / u
    else:
        g = f.gains(u)
    with np.errstate(invalid="ignore"):
        w = u * (1.0 + u) * g * g
    w = np.where(u == 0, np.where(np.isinf(g), np.inf, 0.0), w)
    return float(np.max(w))
