"""Eigensystems with multiplicity clustering, resolvents, variational checks.

Eigenpairs of the pencil (A, M) are computed by solving the ordinary
symmetric problem for M^{-1/2} A M^{-1/2} and mapping vectors back, which
makes them orthonormal in the measure-weighted inner product. Eigenvalue
multiplicity is a numerical notion here: values are grouped by a relative
gap rule, and a gap falling too close to the grouping threshold marks the
system as ambiguous instead of silently guessing.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from . import forms
from .errors import ZeroVector, PreconditionError
from .forms import FormOperator, m_inner, m_norm
from .linalg import DEFAULT_EIG_TOL, jacobi_eigh, solve_spd

DEFAULT_CLUSTER_TOL = 1e-7

#: gaps within this factor of the clustering threshold (either side) are
#: reported as ambiguous rather than resolved
AMBIGUITY_BAND = 16.0


class Cluster(NamedTuple):
    start: int          # 0-based index of the first eigenvalue in the cluster
    count: int          # multiplicity
    value: float        # representative eigenvalue (mean over the cluster)
    ambiguous: bool     # a boundary gap fell inside the ambiguity band


@dataclass(frozen=True)
class EigenSystem:
    """Ascending eigenvalues with m-orthonormal eigenvector columns."""

    operator: FormOperator
    values: np.ndarray
    vectors: np.ndarray
    clusters: tuple
    cluster_tol: float

    @property
    def dim(self) -> int:
        return self.values.shape[0]

    @property
    def ambiguous(self) -> bool:
        return any(cl.ambiguous for cl in self.clusters)

    def value(self, n: int) -> float:
        """Eigenvalue by 1-based index."""
        self._check_index(n)
        return float(self.values[n - 1])

    def vector(self, n: int) -> np.ndarray:
        """Eigenvector by 1-based index (copy)."""
        self._check_index(n)
        return self.vectors[:, n - 1].copy()

    def cluster_of(self, n: int) -> Cluster:
        self._check_index(n)
        for cl in self.clusters:
            if cl.start <= n - 1 < cl.start + cl.count:
                return cl
        raise AssertionError("clusters do not partition the spectrum")

    def cluster_vectors(self, cl: Cluster) -> np.ndarray:
        return self.vectors[:, cl.start:cl.start + cl.count].copy()

    def _check_index(self, n: int):
        if not 1 <= n <= self.dim:
            raise IndexError(f"eigen index {n} out of range 1..{self.dim}")


@dataclass(frozen=True)
class Resolvent:
    """Matrix of G_alpha = (A + alpha M)^{-1} M in the m-inner product."""

    alpha: float
    matrix: np.ndarray


def _cluster_values(values: np.ndarray, cluster_tol: float) -> tuple:
    clusters = []
    n = values.shape[0]
    start = 0
    ambiguous = False
    for i in range(n):
        last = i == n - 1
        if not last:
            gap = values[i + 1] - values[i]
            thr = cluster_tol * (1.0 + abs(values[i + 1]))
            if thr / AMBIGUITY_BAND < gap <= AMBIGUITY_BAND * thr:
                ambiguous = True
            close = gap <= thr
        else:
            close = False
        if not close:
            count = i - start + 1
            value = float(np.mean(values[start:i + 1]))
            clusters.append(Cluster(start, count, value, ambiguous))
            start = i + 1
            ambiguous = False
    return tuple(clusters)


def _m_orthonormalize(vectors: np.ndarray, m: np.ndarray) -> np.ndarray:
    """Modified Gram-Schmidt in the m-weighted inner product, in place order."""
    v = vectors.copy()
    n = v.shape[1]
    for j in range(n):
        for i in range(j):
            v[:, j] -= np.sum(v[:, j] * v[:, i] * m) * v[:, i]
        norm = np.sqrt(np.sum(v[:, j] * v[:, j] * m))
        if norm == 0.0:
            raise ZeroVector("eigenvector collapsed during orthonormalization")
        v[:, j] /= norm
    return v


def eigensystem(op: FormOperator, cluster_tol: float = DEFAULT_CLUSTER_TOL,
                eig_tol: float = DEFAULT_EIG_TOL) -> EigenSystem:
    """Full eigensystem of the form with multiplicity clusters.

    Values ascend; two consecutive values join a cluster when their gap is
    at most ``cluster_tol * (1 + |value|)``. Clusters whose boundary gap is
    within a factor ``AMBIGUITY_BAND`` of that threshold carry an ambiguity
    flag, which callers surface instead of trusting the grouping.
    """
    if cluster_tol <= 0.0:
        raise ValueError("cluster_tol must be positive")
    ed = jacobi_eigh(op.symmetrized, eig_tol=eig_tol)
    vectors = ed.vectors / np.sqrt(op.m)[:, None]
    vectors = _m_orthonormalize(vectors, op.m)
    values = ed.values.copy()
    values.setflags(write=False)
    vectors.setflags(write=False)
    return EigenSystem(operator=op, values=values, vectors=vectors,
                       clusters=_cluster_values(values, cluster_tol),
                       cluster_tol=cluster_tol)


def resolvent(op: FormOperator, alpha: float) -> Resolvent:
    """Resolvent G_alpha of the form, the inverse of (generator + alpha).

    Defined through Q(G_a u, v) + alpha <G_a u, v>_m = <u, v>_m for all v;
    in matrix form (A + alpha M)^{-1} M. The stiffness is positive
    semidefinite, so the shifted solve cannot fail for alpha > 0 on sane
    data; a NotPositiveDefinite escaping here signals corruption.
    """
    if alpha <= 0.0:
        raise ValueError("alpha must be positive")
    s = op.stiffness + alpha * np.diag(op.m)
    g = solve_spd(s, np.diag(op.m))
    return Resolvent(alpha=alpha, matrix=g)


def rayleigh(op: FormOperator, v) -> float:
    """Rayleigh quotient Q(v) / <v, v>_m."""
    g = op.graph
    nrm2 = m_inner(g, v, v)
    if nrm2 == 0.0:
        raise ZeroVector("Rayleigh quotient of the zero vector")
    return forms.quadratic_form(g, v) / nrm2


def check_variational(es: EigenSystem, v, n: int):
    """Variational principle at the n-th eigenvalue (1-based).

    Requires v to be m-orthogonal to the first n-1 eigenvectors (within
    1e-9 relative). Returns ``(holds, is_eigen_if_equal)``: the Rayleigh
    quotient dominates lambda_n up to 1e-8, and when it equals lambda_n to
    that accuracy the second flag verifies that v is itself an eigenvector.
    """
    es._check_index(n)
    g = es.operator.graph
    v = np.asarray(v, dtype=float)
    nrm = m_norm(g, v)
    if nrm == 0.0:
        raise ZeroVector("variational check needs a nonzero vector")
    for i in range(n - 1):
        if abs(m_inner(g, v, es.vectors[:, i])) > 1e-9 * nrm:
            raise PreconditionError(
                f"vector is not m-orthogonal to eigenvector {i + 1}")
    lam = es.values[n - 1]
    quotient = rayleigh(es.operator, v)
    holds = quotient >= lam - 1e-8
    is_eigen = False
    if abs(quotient - lam) <= 1e-8:
        residual = es.operator.apply_generator(v) - lam * v
        is_eigen = m_norm(g, residual) <= 1e-7 * nrm
    return holds, is_eigen


def multiplicity(es: EigenSystem, n: int):
    """Multiplicity of the cluster containing the n-th eigenvalue.

    Returns ``(k, first_index)`` with both the count and the 1-based index
    of the first eigenvalue in the cluster.
    """
    cl = es.cluster_of(n)
    return cl.count, cl.start + 1
