"""Bayes sampling model for noisy linear systems and its derived constants.

Every random quantity is addressed by a ``(seed, stream)`` pair: the pair
keys a Philox counter-based generator, uniforms from it are turned into
normals by Box-Muller, and the normals are consumed in a fixed order
(A row-major, x, dA row-major, db). Trial k of an experiment uses
stream k, so samples never depend on execution order.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

U64 = 1 << 64


@dataclass(frozen=True)
class NoiseModel:
    """Entries A_ij ~ N(0, a/n), x_j ~ N(0, 1/n), dA_ij ~ N(0, p/n), db_i ~ N(0, q/n)."""

    a: float
    p: float
    q: float
    n: int
    N: int

    def __post_init__(self):
        for name in ("a", "p", "q"):
            val = getattr(self, name)
            if not isinstance(val, (int, float)) or not math.isfinite(val):
                raise ValueError(f"{name} must be a finite real, got {val!r}")
        if not self.a > 0:
            raise ValueError(f"a must be > 0, got {self.a}")
        if self.p < 0 or self.q < 0:
            raise ValueError(f"p and q must be >= 0, got p={self.p}, q={self.q}")
        for name in ("n", "N"):
            val = getattr(self, name)
            if isinstance(val, bool) or not isinstance(val, (int, np.integer)) or val < 1:
                raise ValueError(f"{name} must be an integer >= 1, got {val!r}")

    @property
    def tall(self) -> bool:
        """Advisory: the system has at least as many equations as unknowns."""
        return self.N >= self.n


@dataclass(frozen=True)
class DerivedParams:
    theta: float
    s: float
    alpha: float
    t: float


def derive_params(m: NoiseModel) -> DerivedParams:
    theta = m.a / (m.a + m.p)
    s = m.a * m.p / (m.a + m.p) + m.q
    return DerivedParams(theta=theta, s=s, alpha=1.0 / theta, t=s / theta**2)


@dataclass(frozen=True)
class RngSpec:
    seed: int = 0
    stream: int = 0

    def __post_init__(self):
        for name in ("seed", "stream"):
            val = getattr(self, name)
            if not 0 <= val < U64:
                raise ValueError(f"{name} must fit in an unsigned 64-bit integer, got {val}")

    def offset(self, k: int) -> RngSpec:
        return RngSpec(self.seed, (self.stream + k) % U64)


def _generator(rng: RngSpec) -> np.random.Generator:
    key = np.array([rng.seed, rng.stream], dtype=np.uint64)
    return np.random.Generator(np.random.Philox(key=key))


def standard_normals(rng: RngSpec, count: int) -> np.ndarray:
    """First ``count`` standard normals of stream ``rng`` (Box-Muller, pairs interleaved)."""
    pairs = (count + 1) // 2
    u = _generator(rng).random(2 * pairs)
    radius = np.sqrt(-2.0 * np.log(1.0 - u[0::2]))
    angle = 2.0 * np.pi * u[1::2]
    out = np.empty(2 * pairs)
    out[0::2] = radius * np.cos(angle)
    out[1::2] = radius * np.sin(angle)
    return out[:count]


@dataclass(frozen=True)
class ProblemSample:
    A: np.ndarray
    x: np.ndarray
    b: np.ndarray
    R: np.ndarray
    y: np.ndarray


def sample_instance(m: NoiseModel, rng: RngSpec) -> ProblemSample:
    n, N = m.n, m.N
    z = standard_normals(rng, 2 * N * n + n + N)
    k = N * n
    A = math.sqrt(m.a / n) * z[:k].reshape(N, n)
    x = math.sqrt(1.0 / n) * z[k:k + n]
    dA = math.sqrt(m.p / n) * z[k + n:2 * k + n].reshape(N, n)
    db = math.sqrt(m.q / n) * z[2 * k + n:]
    b = A @ x
    return ProblemSample(A=A, x=x, b=b, R=A + dA, y=b + db)


@dataclass(frozen=True)
class CheckReport:
    """Two Monte Carlo estimates of the same expectation."""

    lhs: float
    rhs: float
    stderr: float

    @property
    def z(self) -> float:
        diff = self.lhs - self.rhs
        if self.stderr == 0.0:
            return 0.0 if diff == 0.0 else math.copysign(math.inf, diff)
        return diff / self.stderr

    def passes(self, k: float = 3.0) -> bool:
        return abs(self.lhs - self.rhs) <= k * self.stderr


def stein_check(sigma2: float, trials: int, rng: RngSpec = RngSpec()) -> CheckReport:
    """Compare E[r f(r)] with sigma2 * E[f'(r)] for f(r) = r / (1 + r^2), r ~ N(0, sigma2)."""
    if not sigma2 > 0:
        raise ValueError("sigma2 must be > 0")
    if trials < 1000:
        raise ValueError("stein_check needs at least 1000 trials")
    r = math.sqrt(sigma2) * standard_normals(rng, trials)
    left = r * r / (1.0 + r * r)
    right = sigma2 * (1.0 - r * r) / (1.0 + r * r) ** 2
    diff = left - right
    stderr = float(np.std(diff, ddof=1) / math.sqrt(trials))
    return CheckReport(math.fsum(left) / trials, math.fsum(right) / trials, stderr)
