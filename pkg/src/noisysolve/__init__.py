"""Minimum quadratic risk solutions of linear systems with Gaussian noise
in both the coefficient matrix and the right-hand side."""

__version__ = "0.1.0"

from .filters import (
    Confluent,
    Custom,
    Optimal,
    Standard,
    Tikhonov,
    apply_filter,
    class_k_witness,
    solve_optimal,
    solve_standard,
)
from .model import DerivedParams, NoiseModel, RngSpec, derive_params, sample_instance
from .risk import Spectrum, pool_spectrum, risk_functional, risk_gap, risk_opt, risk_std
