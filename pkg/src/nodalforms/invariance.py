"""Invariant sets, irreducibility, components, and brute-force oracles.

A vertex subset is invariant for the form when multiplication by its
indicator commutes with every resolvent; on a finite graph this happens
exactly when no positive-weight edge crosses the boundary, i.e. the subset
is a union of connected components. Both characterizations are computed
here, independently, so each can serve as an oracle for the other.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (DimensionError, EmptySubset, HypothesisNotMet,
                     NodalFormsError, PreconditionError, SizeLimit)
from .forms import (FormOperator, VertexSubset, WeightedGraph,
                    assemble_operator, restrict)
from .linalg import solve_spd
from .spectral import resolvent

DEFAULT_INVARIANCE_TOL = 1e-9


@dataclass(frozen=True)
class InvarianceCertificate:
    """Evidence for or against invariance of one subset.

    ``commutator_norm`` is the largest absolute entry of
    ``1_A G_alpha - G_alpha 1_A``; ``crossing_edges`` lists the positive
    edges leaving the subset, computed from the graph alone. The two
    criteria agree on every sane input: empty crossing list iff the
    commutator vanishes up to ``tol * (1 + max|G_alpha|)``.
    """

    subset: VertexSubset
    alpha_tested: float
    commutator_norm: float
    crossing_edges: tuple
    threshold: float
    invariant: bool


@dataclass(frozen=True)
class ComponentPartition:
    """Disjoint connected components covering the whole vertex set."""

    components: tuple

    def __len__(self):
        return len(self.components)

    def component_of(self, vertex: int) -> VertexSubset:
        for comp in self.components:
            if comp.bits[vertex]:
                return comp
        raise IndexError(f"vertex {vertex} not covered")


class _UnionFind:
    def __init__(self, n):
        self.parent = list(range(n))

    def find(self, i):
        root = i
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[i] != root:
            self.parent[i], i = root, self.parent[i]
        return root

    def union(self, i, j):
        ri, rj = self.find(i), self.find(j)
        if ri != rj:
            # anchor at the smaller index for deterministic component order
            if rj < ri:
                ri, rj = rj, ri
            self.parent[rj] = ri


def connected_components(g: WeightedGraph) -> ComponentPartition:
    """Components of the positive-weight edge relation.

    Deterministic: components are ordered by their smallest vertex index.
    """
    uf = _UnionFind(g.n_vertices)
    for u, v in zip(g.edge_u, g.edge_v):
        uf.union(int(u), int(v))
    roots = {}
    for i in range(g.n_vertices):
        roots.setdefault(uf.find(i), []).append(i)
    comps = [VertexSubset.from_indices(g.n_vertices, members)
             for _, members in sorted(roots.items())]
    return ComponentPartition(components=tuple(comps))


def is_irreducible(g: WeightedGraph) -> bool:
    """True iff the graph is connected (single component)."""
    return len(connected_components(g)) == 1


def crossing_edges(g: WeightedGraph, subset: VertexSubset) -> tuple:
    """Positive edges (x in A, y not in A, b(x,y)) leaving the subset."""
    bits = subset.bits
    out = []
    for u, v, w in zip(g.edge_u, g.edge_v, g.edge_w):
        if bits[u] != bits[v]:
            inside, outside = (u, v) if bits[u] else (v, u)
            out.append((int(inside), int(outside), float(w)))
    return tuple(out)


def is_invariant_combinatorial(g: WeightedGraph, subset: VertexSubset) -> bool:
    """True iff no positive edge crosses the subset boundary."""
    bits = subset.bits
    return not np.any(bits[g.edge_u] != bits[g.edge_v])


def _commutator_max(g_matrix: np.ndarray, bits: np.ndarray) -> float:
    """max |1_A G - G 1_A| entrywise; nonzero only on crossing index pairs."""
    inside = np.flatnonzero(bits)
    outside = np.flatnonzero(~bits)
    if inside.size == 0 or outside.size == 0:
        return 0.0
    block = g_matrix[np.ix_(inside, outside)]
    block_t = g_matrix[np.ix_(outside, inside)]
    return float(max(np.max(np.abs(block)), np.max(np.abs(block_t))))


def _certificate(g: WeightedGraph, g_matrix: np.ndarray, subset: VertexSubset,
                 alpha: float, tol: float) -> InvarianceCertificate:
    norm = _commutator_max(g_matrix, subset.bits)
    threshold = tol * (1.0 + float(np.max(np.abs(g_matrix))))
    return InvarianceCertificate(
        subset=subset, alpha_tested=alpha, commutator_norm=norm,
        crossing_edges=crossing_edges(g, subset), threshold=threshold,
        invariant=norm <= threshold)


def is_invariant_resolvent(op: FormOperator, subset: VertexSubset,
                           alpha: float = 1.0,
                           tol: float = DEFAULT_INVARIANCE_TOL
                           ) -> InvarianceCertificate:
    """Certificate of resolvent-commutation invariance at one alpha.

    The commutator norm is compared against ``tol * (1 + max|G_alpha|)``
    since commutator entries scale with the resolvent entries; the crossing
    edge list is filled independently from the graph.
    """
    if alpha <= 0.0:
        raise ValueError("alpha must be positive")
    if tol <= 0.0:
        raise ValueError("tol must be positive")
    g_matrix = resolvent(op, alpha).matrix
    return _certificate(op.graph, g_matrix, subset, alpha, tol)


def gerlach_decompose(op: FormOperator, f, tol: float = DEFAULT_INVARIANCE_TOL
                      ) -> ComponentPartition:
    """Decompose the vertex set into components, hypothesis-checked.

    Requires f strictly positive with G_1 f >= c f entrywise for some
    c > tol (c is computed as the minimum of (G_1 f)(x) / f(x)). The
    partition is computed combinatorially and cross-validated against the
    support pattern of G_1: entries inside a component block must exceed
    ``tol * max|G_1|`` while entries across blocks must stay below it.
    """
    g = op.graph
    f = np.asarray(f, dtype=float)
    if f.shape != (g.n_vertices,):
        raise DimensionError("f has wrong length")
    if not np.all(f > 0.0):
        raise PreconditionError("f must be strictly positive everywhere")
    g1 = resolvent(op, 1.0).matrix
    c = float(np.min((g1 @ f) / f))
    if not c > tol:
        raise HypothesisNotMet(
            f"no constant c > {tol} with G_1 f >= c f (got c = {c:.3e})")
    parts = connected_components(g)
    scale = tol * float(np.max(np.abs(g1)))
    for i, comp_i in enumerate(parts.components):
        ii = comp_i.indices()
        inside = np.abs(g1[np.ix_(ii, ii)])
        if np.min(inside) <= scale:
            raise NodalFormsError(
                "resolvent support pattern disagrees with graph components "
                f"(weak entry inside component {i})")
        for comp_j in parts.components[i + 1:]:
            jj = comp_j.indices()
            across = np.abs(g1[np.ix_(ii, jj)])
            if np.max(across) > scale:
                raise NodalFormsError(
                    "resolvent support pattern disagrees with graph "
                    "components (coupling across components)")
    return parts


def invariant_subsets_bruteforce(op: FormOperator, alpha: float = 1.0,
                                 tol: float = DEFAULT_INVARIANCE_TOL) -> list:
    """All invariant subsets by exhaustive 2^n enumeration (n <= 20).

    Output is canonical: sorted by cardinality, then by index tuple. The
    family is verified to be closed under complement and intersection
    before returning.
    """
    g = op.graph
    n = g.n_vertices
    if n > 20:
        raise SizeLimit(f"brute force over 2^{n} subsets refused")
    g_matrix = resolvent(op, alpha).matrix
    threshold = tol * (1.0 + float(np.max(np.abs(g_matrix))))
    found = []
    for mask in range(1 << n):
        bits = np.array([(mask >> i) & 1 for i in range(n)], dtype=bool)
        if _commutator_max(g_matrix, bits) <= threshold:
            found.append(VertexSubset(bits))
    family = set(found)
    for a in found:
        if ~a not in family:
            raise NodalFormsError("invariant family not closed under complement")
        for b in found:
            if (a & b) not in family:
                raise NodalFormsError(
                    "invariant family not closed under intersection")
    found.sort(key=lambda s: (s.count(), tuple(s.indices().tolist())))
    return found


def q_projection(op: FormOperator, subset: VertexSubset) -> np.ndarray:
    """Orthogonal projection onto functions supported in A, in the form norm.

    The inner product is <f, h> = Q(f, h) + <f, h>_m with Gram matrix
    S = A + M; the projection onto the coordinate subspace of A solves the
    normal equations S_AA p_A = (S f)_A, i.e. P_A = E S_AA^{-1} E^T S.
    """
    if subset.is_empty():
        raise EmptySubset("projection onto the empty subset")
    if subset.size != op.n:
        raise DimensionError("subset size does not match the operator")
    s = op.stiffness + np.diag(op.m)
    idx = subset.indices()
    x = solve_spd(s[np.ix_(idx, idx)], s[idx, :])
    p = np.zeros((op.n, op.n))
    p[idx, :] = x
    return p


def projection_domination_check(op: FormOperator, subset: VertexSubset,
                                trials: int = 100, seed: int = 0) -> bool:
    """For random f >= 0, verify (P_A f)(x) <= f(x) + 1e-9 everywhere."""
    if trials < 1:
        raise ValueError("trials must be >= 1")
    p = q_projection(op, subset)
    rng = np.random.default_rng(seed)
    for _ in range(trials):
        f = np.abs(rng.standard_normal(op.n))
        if np.any(p @ f > f + 1e-9):
            return False
    return True


def invariance_transfer_check(g: WeightedGraph, a: VertexSubset,
                              b: VertexSubset, alpha: float = 1.0,
                              tol: float = DEFAULT_INVARIANCE_TOL) -> bool:
    """Both transfer directions between invariance for Q and for Q_A.

    (a) when A is invariant and B∩A is invariant for the restricted form,
        B∩A must be invariant for the full form;
    (b) when B is invariant for the full form, B∩A must be invariant for
        the restricted form on any nonempty A.
    Returns True iff every applicable implication holds on this instance.
    """
    op = assemble_operator(g)
    cert_a = is_invariant_resolvent(op, a, alpha, tol)
    cert_b = is_invariant_resolvent(op, b, alpha, tol)
    inter = a & b

    restricted = None
    inter_in_a = None
    if not a.is_empty():
        restricted = assemble_operator(restrict(g, a))
        sub_bits = inter.bits[a.indices()]
        inter_in_a = VertexSubset(sub_bits)

    if cert_a.invariant and restricted is not None:
        cert_sub = is_invariant_resolvent(restricted, inter_in_a, alpha, tol)
        if cert_sub.invariant:
            if not is_invariant_resolvent(op, inter, alpha, tol).invariant:
                return False

    if cert_b.invariant and restricted is not None:
        if not is_invariant_resolvent(restricted, inter_in_a, alpha,
                                      tol).invariant:
            return False
    return True


def invariance_transfer_exhaustive(g: WeightedGraph, alpha: float = 1.0,
                                   tol: float = DEFAULT_INVARIANCE_TOL):
    """Run the transfer check over all subset pairs; returns (checked, failures).

    Exhaustive over all (A, B) pairs, so the vertex set is capped at 12.
    Full-form invariance is tabulated once over all masks, and restricted
    certificates are memoized per submask of each A, which brings the pair
    loop down to table lookups.
    """
    n = g.n_vertices
    if n > 12:
        raise SizeLimit(f"exhaustive transfer check over 4^{n} pairs refused")
    op = assemble_operator(g)
    g_full = resolvent(op, alpha).matrix
    thr_full = tol * (1.0 + float(np.max(np.abs(g_full))))

    all_bits = [np.array([(mask >> i) & 1 for i in range(n)], dtype=bool)
                for mask in range(1 << n)]
    full_invariant = [_commutator_max(g_full, bits) <= thr_full
                      for bits in all_bits]

    checked = 0
    failures = 0
    for mask_a in range(1, 1 << n):
        bits_a = all_bits[mask_a]
        a = VertexSubset(bits_a)
        a_invariant = full_invariant[mask_a]
        sub_op = assemble_operator(restrict(g, a))
        g_sub = resolvent(sub_op, alpha).matrix
        thr_sub = tol * (1.0 + float(np.max(np.abs(g_sub))))
        a_idx = a.indices()
        sub_cache = {}
        for mask_b in range(1 << n):
            inter_mask = mask_a & mask_b
            sub_invariant = sub_cache.get(inter_mask)
            if sub_invariant is None:
                sub_bits = all_bits[inter_mask][a_idx]
                sub_invariant = _commutator_max(g_sub, sub_bits) <= thr_sub
                sub_cache[inter_mask] = sub_invariant
            if a_invariant and sub_invariant:
                checked += 1
                if not full_invariant[inter_mask]:
                    failures += 1
            if full_invariant[mask_b]:
                checked += 1
                if not sub_invariant:
                    failures += 1
    return checked, failures
