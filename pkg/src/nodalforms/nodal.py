"""Sign sets, nodal domains of eigenfunctions, and the Courant bound verdict.

A nodal domain of an eigenfunction f is a connected component of the
strictly-positive set {f > tau} or the strictly-negative set {f < -tau},
where edges are those of the graph restricted to the sign set. Vertices
with |f| <= tau form the zero set and belong to no domain: floating point
forces a threshold, and excluding numerical zeros is the faithful reading
of the strict-sign definition. Zeros therefore separate domains; other
graph conventions exist.

For the n-th eigenvalue with multiplicity k the domain count l obeys
l <= n + k - 1; the stronger bound l <= n is evaluated on request (it is a
continuum statement under unique continuation and is measured here, not
assumed).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import DimensionError, PreconditionError
from .forms import (VertexSubset, WeightedGraph, assemble_operator,
                    bilinear_form, m_inner, m_norm, quadratic_form, restrict)
from .invariance import _UnionFind
from .linalg import solve_spd
from .spectral import EigenSystem, multiplicity

#: default sign tolerance, relative to the sup norm of the eigenfunction
DEFAULT_TAU_FACTOR = 1e-9


@dataclass(frozen=True)
class SignPattern:
    """Partition of the vertices by sign against the tolerance tau."""

    tau: float
    positive_set: VertexSubset
    negative_set: VertexSubset
    zero_set: VertexSubset


@dataclass(frozen=True)
class NodalDecomposition:
    """Connected components of the positive and negative sign sets."""

    sign_pattern: SignPattern
    positive_domains: tuple
    negative_domains: tuple

    @property
    def domains(self) -> tuple:
        return self.positive_domains + self.negative_domains

    @property
    def count(self) -> int:
        return len(self.positive_domains) + len(self.negative_domains)


@dataclass(frozen=True)
class CourantReport:
    """Verdict for one eigenfunction: l domains against the bound n+k-1."""

    n: int                      # eigenvalue index, 1-based
    lambda_n: float
    k: int                      # multiplicity of the cluster of lambda_n
    l: int                      # number of nodal domains
    bound: int                  # n + k - 1
    passes: bool
    strong_passes: Optional[bool]
    tau: float
    cluster_tol: float
    eigenvector_source: str
    ambiguous: bool
    decomposition: NodalDecomposition

    def to_json_dict(self, g: WeightedGraph) -> dict:
        nd = self.decomposition
        return {
            "n": self.n,
            "lambda": self.lambda_n,
            "k": self.k,
            "l": self.l,
            "bound": self.bound,
            "passes": self.passes,
            "strong_passes": self.strong_passes,
            "tau": self.tau,
            "cluster_tol": self.cluster_tol,
            "source": self.eigenvector_source,
            "positive_domains": [list(d.labels(g)) for d in nd.positive_domains],
            "negative_domains": [list(d.labels(g)) for d in nd.negative_domains],
        }


def default_tau(f) -> float:
    f = np.asarray(f, dtype=float)
    return DEFAULT_TAU_FACTOR * float(np.max(np.abs(f))) if f.size else 0.0


def sign_sets(f, tau: float) -> SignPattern:
    """Deterministic sign partition by strict comparison against +-tau."""
    if tau < 0.0:
        raise PreconditionError("tau must be >= 0")
    f = np.asarray(f, dtype=float)
    pos = f > tau
    neg = f < -tau
    zero = ~(pos | neg)
    return SignPattern(tau=tau, positive_set=VertexSubset(pos),
                       negative_set=VertexSubset(neg),
                       zero_set=VertexSubset(zero))


def _sign_components(g: WeightedGraph, bits: np.ndarray) -> tuple:
    """Components of the subgraph induced on a sign set, ordered by least index."""
    members = np.flatnonzero(bits)
    if members.size == 0:
        return ()
    uf = _UnionFind(g.n_vertices)
    for u, v in zip(g.edge_u, g.edge_v):
        if bits[u] and bits[v]:
            uf.union(int(u), int(v))
    roots = {}
    for i in members:
        roots.setdefault(uf.find(int(i)), []).append(int(i))
    return tuple(VertexSubset.from_indices(g.n_vertices, mem)
                 for _, mem in sorted(roots.items()))


def nodal_decompose(g: WeightedGraph, f, tau: Optional[float] = None
                    ) -> NodalDecomposition:
    """Nodal domains of f: components of the induced graphs on {f > tau} and
    {f < -tau}. ``tau=None`` uses the default 1e-9 * max|f|."""
    f = np.asarray(f, dtype=float)
    if f.shape != (g.n_vertices,):
        raise DimensionError("f has wrong length")
    if tau is None:
        tau = default_tau(f)
    pattern = sign_sets(f, tau)
    return NodalDecomposition(
        sign_pattern=pattern,
        positive_domains=_sign_components(g, pattern.positive_set.bits),
        negative_domains=_sign_components(g, pattern.negative_set.bits))


def eigenspace_sample(es: EigenSystem, n: int, seed: int) -> np.ndarray:
    """Random unit-m-norm vector in the eigenspace of lambda_n's cluster.

    Deterministic under the seed. With multiplicity one this is just the
    solver vector up to sign.
    """
    cl = es.cluster_of(n)
    basis = es.cluster_vectors(cl)
    rng = np.random.default_rng(seed)
    g = es.operator.graph
    for _ in range(16):
        coeffs = rng.standard_normal(cl.count)
        v = basis @ coeffs
        norm = m_norm(g, v)
        if norm > 1e-12:
            return v / norm
    raise PreconditionError("degenerate sampling: cluster basis collapsed")


def courant_check(g: WeightedGraph, es: EigenSystem, n: int,
                  tau: Optional[float] = None, source: str = "solver",
                  seed: Optional[int] = None, vector=None,
                  strong: bool = False) -> CourantReport:
    """Count nodal domains of an eigenfunction for lambda_n and compare
    against n + k - 1.

    ``source`` selects the representative: "solver" takes the n-th solver
    vector, "sample" a seeded random unit vector from the cluster's
    eigenspace (the bound quantifies over every representative, and the
    basis inside a degenerate cluster is solver-dependent), and "explicit"
    uses ``vector`` after verifying it is an eigenfunction for lambda_n.
    ``strong=True`` additionally evaluates the strong bound l <= n.
    """
    es._check_index(n)
    k, _first = multiplicity(es, n)
    lam = es.value(n)
    cl = es.cluster_of(n)

    if source == "solver":
        f = es.vector(n)
        label = "solver_basis"
    elif source == "sample":
        if seed is None:
            raise PreconditionError("source='sample' needs a seed")
        f = eigenspace_sample(es, n, seed)
        label = f"random_rotation(seed={seed})"
    elif source == "explicit":
        if vector is None:
            raise PreconditionError("source='explicit' needs a vector")
        f = np.asarray(vector, dtype=float)
        nrm = m_norm(g, f)
        if nrm == 0.0:
            raise PreconditionError("explicit vector is zero")
        residual = es.operator.apply_generator(f) - lam * f
        if m_norm(g, residual) > 1e-7 * nrm:
            raise PreconditionError(
                "explicit vector is not an eigenfunction for lambda_n")
        label = "explicit"
    else:
        raise ValueError(f"unknown eigenvector source {source!r}")

    if tau is None:
        tau = default_tau(f)
    nd = nodal_decompose(g, f, tau)
    l = nd.count
    bound = n + k - 1
    return CourantReport(
        n=n, lambda_n=lam, k=k, l=l, bound=bound, passes=l <= bound,
        strong_passes=(l <= n) if strong else None, tau=tau,
        cluster_tol=es.cluster_tol, eigenvector_source=label,
        ambiguous=cl.ambiguous, decomposition=nd)


def cross_form_matrix(g: WeightedGraph, f, nd: NodalDecomposition) -> np.ndarray:
    """Matrix of Q(f 1_{C_i}, f 1_{C_j}) over all nodal domains.

    Every entry is nonnegative (up to roundoff): diagonal entries are
    energies, same-sign off-diagonal entries vanish by invariance inside
    the sign set, and opposite-sign entries pick up the positive coupling
    across the zero crossing. Also verifies that the domain pieces
    reassemble f exactly on the union of the sign sets (the zero set is
    excluded by the tau truncation).
    """
    f = np.asarray(f, dtype=float)
    domains = nd.domains
    pieces = [f * d.bits for d in domains]
    support = nd.sign_pattern.positive_set.bits | nd.sign_pattern.negative_set.bits
    if domains:
        recombined = np.sum(pieces, axis=0)
        if np.max(np.abs((recombined - f)[support])) != 0.0:
            raise PreconditionError(
                "domains do not reassemble f on its sign support; "
                "was the decomposition computed for this f and tau?")
    l = len(domains)
    out = np.zeros((l, l))
    for i in range(l):
        for j in range(i, l):
            out[i, j] = out[j, i] = bilinear_form(g, pieces[i], pieces[j])
    return out


def sum_lemma_residual(g: WeightedGraph, f, nd: NodalDecomposition,
                       coeffs, mu: float) -> float:
    """Residual of the energy rearrangement identity behind the bound.

    For v = sum_i c_i f 1_{C_i} and any mu > 0:

        Q(v) - mu ||v||_m^2
            = sum_i c_i^2 (Q(f 1_{C_i}, f) - mu ||f 1_{C_i}||_m^2)
              - 1/2 sum_{i,j} (c_i - c_j)^2 Q(f 1_{C_i}, f 1_{C_j}).

    Returns |LHS - RHS|; the identity is exact algebra whenever the zero
    set carries no mass of f, so the residual is pure roundoff there.
    """
    f = np.asarray(f, dtype=float)
    coeffs = np.asarray(coeffs, dtype=float)
    domains = nd.domains
    if coeffs.shape != (len(domains),):
        raise DimensionError(
            f"{len(domains)} domains but {coeffs.shape} coefficients")
    pieces = [f * d.bits for d in domains]
    v = np.zeros_like(f)
    for ci, piece in zip(coeffs, pieces):
        v += ci * piece
    lhs = quadratic_form(g, v) - mu * m_inner(g, v, v)
    rhs = 0.0
    for ci, piece in zip(coeffs, pieces):
        rhs += ci * ci * (bilinear_form(g, piece, f) - mu * m_inner(g, piece, piece))
    for i, pi in enumerate(pieces):
        for j, pj in enumerate(pieces):
            rhs -= 0.5 * (coeffs[i] - coeffs[j]) ** 2 * bilinear_form(g, pi, pj)
    return abs(lhs - rhs)


def restricted_resolvent_bound_check(g: WeightedGraph, es: EigenSystem,
                                     n: int, tau: Optional[float] = None
                                     ) -> bool:
    """Lower resolvent bound on the sign sets of the n-th eigenfunction.

    Builds the resolvent at alpha = 1 of the graph restricted to each
    nonempty sign set and checks (G_1^{F+-} f^{+-})(x) >= f^{+-}(x)/(1+lambda_n)
    - 1e-9 on that set.
    """
    f = es.vector(n)
    lam = es.value(n)
    if tau is None:
        tau = default_tau(f)
    pattern = sign_sets(f, tau)
    for side, part in ((pattern.positive_set, np.maximum(f, 0.0)),
                       (pattern.negative_set, np.maximum(-f, 0.0))):
        if side.is_empty():
            continue
        sub = restrict(g, side)
        sub_op = assemble_operator(sub)
        # apply G_1 = (A + M)^{-1} M to the one vector we need
        u = part[side.indices()]
        g1u = solve_spd(sub_op.stiffness + np.diag(sub.m), sub.m * u)
        if np.any(g1u < u / (1.0 + lam) - 1e-9):
            return False
    return True
