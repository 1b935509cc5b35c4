"""Small dense real linear algebra.

Matrices and vectors are plain float64 numpy arrays; ``as_matrix`` and
``as_vector`` are the validating constructors. The eigensolver is cyclic
Jacobi and the SPD solver is an unpivoted Cholesky factorisation, both
compiled with numba so that tens of thousands of 20x20..60x60 problems
run in seconds.
"""

from __future__ import annotations

from dataclasses import dataclass

import numba
import numpy as np

from .errors import ConvergenceError, NotPositiveDefiniteError, NotSymmetricError, ShapeError

JACOBI_REL_TOL = 1e-12
JACOBI_MAX_SWEEPS = 100
SYMMETRY_REL_TOL = 1e-9
PIVOT_REL_TOL = 1e-13


def as_matrix(data) -> np.ndarray:
    m = np.array(data, dtype=np.float64)
    if m.ndim != 2 or m.shape[0] < 1 or m.shape[1] < 1:
        raise ShapeError(f"expected a non-empty 2-d matrix, got shape {m.shape}", m.shape)
    if not np.all(np.isfinite(m)):
        raise ValueError("matrix entries must be finite")
    return m


def as_vector(data) -> np.ndarray:
    v = np.array(data, dtype=np.float64)
    if v.ndim == 2 and 1 in v.shape:
        v = v.reshape(-1)
    if v.ndim != 1 or v.shape[0] < 1:
        raise ShapeError(f"expected a non-empty vector, got shape {v.shape}", v.shape)
    if not np.all(np.isfinite(v)):
        raise ValueError("vector entries must be finite")
    return v


def matmul(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    if a.ndim != 2 or b.ndim != 2 or a.shape[1] != b.shape[0]:
        raise ShapeError(
            f"cannot multiply matrices of shapes {a.shape} and {b.shape}", a.shape, b.shape
        )
    return a @ b


def gram(r: np.ndarray) -> np.ndarray:
    """Return ``r.T @ r`` with the lower triangle mirrored from the upper."""
    g = r.T @ r
    iu = np.triu_indices(g.shape[0], 1)
    g[(iu[1], iu[0])] = g[iu]
    return g


@dataclass(frozen=True)
class EigenDecomposition:
    eigenvalues: np.ndarray  # ascending
    eigenvectors: np.ndarray  # column i pairs with eigenvalues[i]

    def reconstruct(self) -> np.ndarray:
        q = self.eigenvectors
        return (q * self.eigenvalues) @ q.T

    def apply(self, gains: np.ndarray, v: np.ndarray) -> np.ndarray:
        """Return ``Q diag(gains) Q^T v``."""
        q = self.eigenvectors
        return q @ (gains * (q.T @ v))


@numba.njit(cache=True, nogil=True)
def _jacobi(a, tol, max_sweeps):
    n = a.shape[0]
    v = np.eye(n)
    off = 0.0
    for sweep in range(max_sweeps + 1):
        off = 0.0
        for i in range(n):
            for j in range(n):
                if i != j:
                    off += a[i, j] * a[i, j]
        off = np.sqrt(off)
        if off <= tol:
            return v, sweep, off
        if sweep == max_sweeps:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if apq == 0.0:
                    continue
                theta = (a[q, q] - a[p, p]) / (2.0 * apq)
                t = 1.0 / (abs(theta) + np.sqrt(theta * theta + 1.0))
                if theta < 0.0:
                    t = -t
                c = 1.0 / np.sqrt(t * t + 1.0)
                s = t * c
                a[p, p] -= t * apq
                a[q, q] += t * apq
                a[p, q] = 0.0
                a[q, p] = 0.0
                for r in range(n):
                    if r != p and r != q:
                        arp = a[r, p]
                        arq = a[r, q]
                        a[r, p] = c * arp - s * arq
                        a[p, r] = a[r, p]
                        a[r, q] = s * arp + c * arq
                        a[q, r] = a[r, q]
                for r in range(n):
                    vrp = v[r, p]
                    vrq = v[r, q]
                    v[r, p] = c * vrp - s * vrq
                    v[r, q] = s * vrp + c * vrq
    return v, -1, off


def eigh(s: np.ndarray) -> EigenDecomposition:
    """Symmetric eigendecomposition by cyclic Jacobi rotations.

    Iterates full sweeps until the off-diagonal Frobenius norm drops below
    ``1e-12 * ||s||_F``; raises ``ConvergenceError`` after 100 sweeps.
    """
    if s.ndim != 2 or s.shape[0] != s.shape[1]:
        raise ShapeError(f"eigh needs a square matrix, got {s.shape}", s.shape)
    scale = max(1.0, float(np.max(np.abs(s))))
    if np.max(np.abs(s - s.T)) > SYMMETRY_REL_TOL * scale:
        raise NotSymmetricError("eigh input is not symmetric")
    work = np.array(0.5 * (s + s.T), dtype=np.float64)
    tol = JACOBI_REL_TOL * float(np.linalg.norm(work))
    vecs, sweeps, off = _jacobi(work, tol, JACOBI_MAX_SWEEPS)
    if sweeps < 0:
        raise ConvergenceError(JACOBI_MAX_SWEEPS, off)
    vals = np.diag(work).copy()
    order = np.argsort(vals, kind="stable")
    return EigenDecomposition(vals[order], vecs[:, order])


@numba.njit(cache=True, nogil=True)
def _cholesky_solve(s, rhs, pivot_tol):
    n = s.shape[0]
    low = np.zeros((n, n))
    for j in range(n):
        d = s[j, j]
        for k in range(j):
            d -= low[j, k] * low[j, k]
        if d <= pivot_tol:
            return np.zeros(n), j, d
        ljj = np.sqrt(d)
        low[j, j] = ljj
        for i in range(j + 1, n):
            acc = s[i, j]
            for k in range(j):
                acc -= low[i, k] * low[j, k]
            low[i, j] = acc / ljj
    z = np.empty(n)
    for i in range(n):
        acc = rhs[i]
        for k in range(i):
            acc -= low[i, k] * z[k]
        z[i] = acc / low[i, i]
    for i in range(n - 1, -1, -1):
        acc = z[i]
        for k in range(i + 1, n):
            acc -= low[k, i] * z[k]
        z[i] = acc / low[i, i]
    return z, -1, 0.0


def solve_spd(s: np.ndarray, rhs: np.ndarray) -> np.ndarray:
    if s.ndim != 2 or s.shape[0] != s.shape[1] or rhs.shape != (s.shape[0],):
        raise ShapeError(
            f"solve_spd shape mismatch: matrix {s.shape}, rhs {rhs.shape}", s.shape, rhs.shape
        )
    tol = PIVOT_REL_TOL * float(np.max(np.abs(s)))
    z, bad, pivot = _cholesky_solve(np.ascontiguousarray(s, dtype=np.float64),
                                    np.ascontiguousarray(rhs, dtype=np.float64), tol)
    if bad >= 0:
        raise NotPositiveDefiniteError(int(bad), float(pivot))
    return z
