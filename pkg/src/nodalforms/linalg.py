"""Dense symmetric numerical kernels: Jacobi eigensolver and Cholesky solve.

Self-contained, no domain knowledge. Desk scale: dense storage, matrices up
to a few thousand rows. The Jacobi sweep loop is jitted with numba; the rest
is plain numpy.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numba
import numpy as np

from .errors import InvalidMatrix, NoConvergence, NotPositiveDefinite

#: relative asymmetry tolerated at construction time
SYMMETRY_RTOL = 1e-12

#: default relative off-diagonal target for the Jacobi iteration
DEFAULT_EIG_TOL = 1e-12

DEFAULT_MAX_SWEEPS = 100


class DenseSymMatrix:
    """Symmetric real matrix with the upper triangle authoritative.

    Construction rejects non-finite entries and asymmetry beyond
    ``SYMMETRY_RTOL * max|entry|``, then symmetrizes exactly via
    ``(S + S.T) / 2``. The stored array is read-only.
    """

    __slots__ = ("a",)

    def __init__(self, entries):
        if isinstance(entries, DenseSymMatrix):
            self.a = entries.a
            return
        a = np.array(entries, dtype=float)
        if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape[0] < 1:
            raise InvalidMatrix(f"expected a square matrix, got shape {a.shape}")
        if not np.all(np.isfinite(a)):
            raise InvalidMatrix("matrix has non-finite entries")
        scale = float(np.max(np.abs(a)))
        if float(np.max(np.abs(a - a.T))) > SYMMETRY_RTOL * scale:
            raise InvalidMatrix("matrix is not symmetric within tolerance")
        a = 0.5 * (a + a.T)
        a.setflags(write=False)
        self.a = a

    @property
    def dim(self) -> int:
        return self.a.shape[0]

    def __repr__(self):
        return f"DenseSymMatrix(dim={self.dim})"


@dataclass(frozen=True)
class EigenDecomposition:
    """Eigenvalues ascending; column j of ``vectors`` is a unit eigenvector."""

    values: np.ndarray
    vectors: np.ndarray


@numba.njit(cache=True, nogil=True)
def _jacobi_sweeps(a, v, elem_thr, target, max_sweeps):  # pragma: no cover
    n = a.shape[0]
    for sweep in range(max_sweeps):
        off2 = 0.0
        for i in range(n - 1):
            for j in range(i + 1, n):
                off2 += 2.0 * a[i, j] * a[i, j]
        if math.sqrt(off2) <= target:
            return sweep
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if abs(apq) <= elem_thr:
                    continue
                tau = (a[q, q] - a[p, p]) / (2.0 * apq)
                if tau >= 0.0:
                    t = 1.0 / (tau + math.sqrt(1.0 + tau * tau))
                else:
                    t = -1.0 / (-tau + math.sqrt(1.0 + tau * tau))
                c = 1.0 / math.sqrt(1.0 + t * t)
                s = t * c
                for k in range(n):
                    akp = a[k, p]
                    akq = a[k, q]
                    a[k, p] = c * akp - s * akq
                    a[k, q] = s * akp + c * akq
                for k in range(n):
                    apk = a[p, k]
                    aqk = a[q, k]
                    a[p, k] = c * apk - s * aqk
                    a[q, k] = s * apk + c * aqk
                a[p, q] = 0.0
                a[q, p] = 0.0
                for k in range(n):
                    vkp = v[k, p]
                    vkq = v[k, q]
                    v[k, p] = c * vkp - s * vkq
                    v[k, q] = s * vkp + c * vkq
    return -1


def jacobi_eigh(S, eig_tol: float = DEFAULT_EIG_TOL,
                max_sweeps: int = DEFAULT_MAX_SWEEPS) -> EigenDecomposition:
    """Full eigendecomposition of a symmetric matrix by cyclic-by-row Jacobi.

    Sweeps run until the off-diagonal Frobenius norm drops below
    ``eig_tol * ||S||_F``. Individual rotations are skipped once the pivot
    falls below ``eig_tol * ||S||_F / dim``, which is small enough to keep the
    global criterion reachable. Eigenvalues are sorted ascending with a stable
    permutation so that degenerate values keep the solver-produced vector
    order; no basis choice inside a degenerate cluster is promised.

    Raises ``NoConvergence`` after ``max_sweeps`` full sweeps.
    """
    if eig_tol <= 0.0:
        raise ValueError("eig_tol must be positive")
    S = DenseSymMatrix(S)
    n = S.dim
    a = S.a.copy()
    v = np.eye(n)
    fro = float(np.linalg.norm(a, "fro"))
    if fro > 0.0:
        sweeps = _jacobi_sweeps(a, v, eig_tol * fro / n, eig_tol * fro, max_sweeps)
        if sweeps < 0:
            raise NoConvergence(f"Jacobi did not converge in {max_sweeps} sweeps")
    values = np.diag(a).copy()
    order = np.argsort(values, kind="stable")
    values = values[order]
    vectors = v[:, order]
    values.setflags(write=False)
    vectors.setflags(write=False)
    return EigenDecomposition(values=values, vectors=vectors)


def cholesky_factor(S) -> np.ndarray:
    """Lower-triangular L with L @ L.T == S; raises NotPositiveDefinite."""
    S = DenseSymMatrix(S)
    a = S.a
    n = S.dim
    L = np.zeros_like(a)
    for j in range(n):
        d = a[j, j] - L[j, :j] @ L[j, :j]
        if not d > 0.0:
            raise NotPositiveDefinite(f"non-positive pivot at row {j}: {d!r}")
        L[j, j] = math.sqrt(d)
        if j + 1 < n:
            L[j + 1:, j] = (a[j + 1:, j] - L[j + 1:, :j] @ L[j, :j]) / L[j, j]
    return L


def _forward_substitute(L, b):
    y = np.zeros_like(b)
    for i in range(L.shape[0]):
        y[i] = (b[i] - L[i, :i] @ y[:i]) / L[i, i]
    return y


def _back_substitute(L, y):
    n = L.shape[0]
    x = np.zeros_like(y)
    for i in range(n - 1, -1, -1):
        x[i] = (y[i] - L[i + 1:, i] @ x[i + 1:]) / L[i, i]
    return x


def solve_spd(S, rhs) -> np.ndarray:
    """Solve ``S x = rhs`` for symmetric positive definite S via Cholesky.

    ``rhs`` may be a vector or a matrix of stacked right-hand-side columns;
    the factorization is computed once either way.
    """
    rhs = np.asarray(rhs, dtype=float)
    S = DenseSymMatrix(S)
    if rhs.shape[0] != S.dim:
        raise InvalidMatrix(
            f"rhs has leading dimension {rhs.shape[0]}, matrix has {S.dim}")
    L = cholesky_factor(S)
    return _back_substitute(L, _forward_substitute(L, rhs))
