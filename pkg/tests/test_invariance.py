import numpy as np
import pytest
from numpy.testing import assert_allclose

from nodalforms import corpus
from nodalforms.errors import (EmptySubset, HypothesisNotMet,
                               PreconditionError, SizeLimit)
from nodalforms.forms import (VertexSubset, WeightedGraph, assemble_operator,
                              positivity_preserving_check, quadratic_form,
                              restrict)
from nodalforms.invariance import (connected_components, gerlach_decompose,
                                   invariance_transfer_check,
                                   invariance_transfer_exhaustive,
                                   invariant_subsets_bruteforce,
                                   is_invariant_combinatorial,
                                   is_invariant_resolvent, is_irreducible,
                                   projection_domination_check, q_projection)
from nodalforms.spectral import resolvent

TWO_PATHS = corpus.disjoint_union(corpus.path_graph(2), corpus.path_graph(2))
P2_P3 = corpus.disjoint_union(corpus.path_graph(2), corpus.path_graph(3))


class TestCertificates:
    def test_trivial_subsets(self):
        op = assemble_operator(corpus.path_graph(4))
        for sub in (VertexSubset.empty(4), VertexSubset.full(4)):
            cert = is_invariant_resolvent(op, sub)
            assert cert.invariant
            assert cert.commutator_norm == 0.0
            assert cert.crossing_edges == ()

    def test_component_is_invariant(self):
        op = assemble_operator(TWO_PATHS)
        cert = is_invariant_resolvent(op, VertexSubset([1, 1, 0, 0]))
        assert cert.invariant and not cert.crossing_edges

    def test_half_of_p2_is_not(self):
        op = assemble_operator(corpus.path_graph(2))
        cert = is_invariant_resolvent(op, VertexSubset([True, False]))
        assert not cert.invariant
        assert cert.crossing_edges == ((0, 1, 1.0),)
        assert cert.commutator_norm > cert.threshold

    def test_criteria_agree_exhaustively(self, small_random_graphs):
        graphs = [g for g in small_random_graphs if g.n_vertices <= 10]
        graphs += [TWO_PATHS, P2_P3, corpus.cycle_graph(5)]
        for g in graphs:
            op = assemble_operator(g)
            g1 = resolvent(op, 1.0).matrix
            n = g.n_vertices
            for mask in range(1 << n):
                bits = np.array([(mask >> i) & 1 for i in range(n)], dtype=bool)
                sub = VertexSubset(bits)
                cert = is_invariant_resolvent(op, sub)
                assert cert.invariant == is_invariant_combinatorial(g, sub)
                assert cert.invariant == (len(cert.crossing_edges) == 0)


class TestComponents:
    def test_connected(self):
        assert len(connected_components(corpus.cycle_graph(5))) == 1

    def test_edgeless(self):
        g = WeightedGraph(labels=list("abcd"), m=[1] * 4, c=[0] * 4, edges=[])
        parts = connected_components(g)
        assert len(parts) == 4
        assert all(comp.count() == 1 for comp in parts.components)

    def test_two_triangles(self):
        g = corpus.disjoint_union(corpus.cycle_graph(3), corpus.cycle_graph(3))
        parts = connected_components(g)
        assert [comp.count() for comp in parts.components] == [3, 3]

    def test_deterministic_order(self):
        parts = connected_components(P2_P3)
        assert [tuple(c.indices()) for c in parts.components] == \
            [(0, 1), (2, 3, 4)]

    def test_irreducible(self):
        assert is_irreducible(corpus.complete_graph(4))
        g = WeightedGraph(labels=["a", "b"], m=[1, 1], c=[0, 0], edges=[])
        assert not is_irreducible(g)

    def test_irreducible_matches_bruteforce(self, small_random_graphs):
        for g in small_random_graphs:
            if g.n_vertices > 10:
                continue
            op = assemble_operator(g)
            family = invariant_subsets_bruteforce(op)
            nontrivial = [s for s in family
                          if not s.is_empty() and s.count() < g.n_vertices]
            assert is_irreducible(g) == (len(nontrivial) == 0)


class TestGerlach:
    def test_connected_single_component(self):
        op = assemble_operator(corpus.cycle_graph(5))
        assert len(gerlach_decompose(op, np.ones(5))) == 1

    def test_union_matches_components(self):
        op = assemble_operator(P2_P3)
        parts = gerlach_decompose(op, np.ones(5))
        expected = connected_components(P2_P3)
        assert tuple(parts.components) == tuple(expected.components)

    def test_scale_free(self, rng):
        op = assemble_operator(P2_P3)
        f = np.abs(rng.standard_normal(5)) + 0.5
        a = gerlach_decompose(op, f)
        b = gerlach_decompose(op, 2.0 * f)
        assert tuple(a.components) == tuple(b.components)

    def test_requires_positive(self):
        op = assemble_operator(corpus.path_graph(3))
        with pytest.raises(PreconditionError):
            gerlach_decompose(op, np.array([1.0, 0.0, 1.0]))

    def test_hypothesis_not_met(self):
        # an enormous on-site term crushes the resolvent below the tolerance
        g = WeightedGraph(labels=["a"], m=[1.0], c=[1e12], edges=[])
        with pytest.raises(HypothesisNotMet):
            gerlach_decompose(assemble_operator(g), np.ones(1))


class TestBruteForce:
    def test_connected_three(self):
        op = assemble_operator(corpus.path_graph(3))
        family = invariant_subsets_bruteforce(op)
        assert [s.count() for s in family] == [0, 3]

    def test_two_components(self):
        op = assemble_operator(TWO_PATHS)
        family = invariant_subsets_bruteforce(op)
        assert len(family) == 4

    def test_count_is_power_of_two(self, small_random_graphs):
        for g in small_random_graphs:
            if g.n_vertices > 10:
                continue
            count = len(invariant_subsets_bruteforce(assemble_operator(g)))
            assert count & (count - 1) == 0

    def test_atoms_are_components(self):
        g = corpus.disjoint_union(corpus.cycle_graph(3), corpus.path_graph(2),
                                  corpus.path_graph(1))
        family = invariant_subsets_bruteforce(assemble_operator(g))
        assert len(family) == 8  # sigma-algebra over three atoms
        atoms = [s for s in family if not s.is_empty()
                 and not any(o.issubset(s) and o != s and not o.is_empty()
                             for o in family)]
        assert sorted(tuple(a.indices()) for a in atoms) == \
            sorted(tuple(c.indices())
                   for c in connected_components(g).components)

    def test_size_limit(self):
        op = assemble_operator(corpus.path_graph(21))
        with pytest.raises(SizeLimit):
            invariant_subsets_bruteforce(op)


class TestProjection:
    def test_full_subset_is_identity(self):
        op = assemble_operator(corpus.path_graph(4))
        assert_allclose(q_projection(op, VertexSubset.full(4)), np.eye(4),
                        atol=1e-12)

    def test_idempotent(self, rng, small_random_graphs):
        for g in small_random_graphs[:5]:
            op = assemble_operator(g)
            bits = rng.random(g.n_vertices) < 0.5
            if not bits.any():
                bits[0] = True
            p = q_projection(op, VertexSubset(bits))
            assert np.max(np.abs(p @ p - p)) <= 1e-9

    def test_projected_resolvent_identity(self, rng, small_random_graphs):
        # G_1 of the restricted graph, extended by zero, equals P_A G_1
        for g in small_random_graphs[:5]:
            op = assemble_operator(g)
            n = g.n_vertices
            bits = rng.random(n) < 0.5
            if not bits.any():
                bits[0] = True
            sub = VertexSubset(bits)
            p = q_projection(op, sub)
            g1 = resolvent(op, 1.0).matrix
            idx = sub.indices()
            restricted = resolvent(assemble_operator(restrict(g, sub)), 1.0)
            extended = np.zeros((n, n))
            extended[np.ix_(idx, idx)] = restricted.matrix
            assert np.max(np.abs(p @ g1 - extended)) <= 1e-8

    def test_empty_subset(self):
        op = assemble_operator(corpus.path_graph(3))
        with pytest.raises(EmptySubset):
            q_projection(op, VertexSubset.empty(3))

    def test_domination_fixed_points(self):
        op = assemble_operator(corpus.path_graph(4))
        sub = VertexSubset([True, True, False, False])
        p = q_projection(op, sub)
        assert_allclose(p @ np.zeros(4), np.zeros(4), atol=1e-15)
        f = np.array([2.0, 1.0, 0.0, 0.0])  # supported inside the subset
        assert_allclose(p @ f, f, atol=1e-10)

    def test_domination_random(self, rng, small_random_graphs):
        checked = 0
        for g in small_random_graphs:
            op = assemble_operator(g)
            for trial in range(8):
                bits = rng.random(g.n_vertices) < 0.5
                if not bits.any():
                    bits[0] = True
                assert projection_domination_check(op, VertexSubset(bits),
                                                   trials=10, seed=trial)
                checked += 1
        assert checked == 8 * len(small_random_graphs)


class TestTransfer:
    def test_full_set_reduces_to_plain_invariance(self):
        g = P2_P3
        full = VertexSubset.full(5)
        comp = VertexSubset([1, 1, 0, 0, 0])
        assert invariance_transfer_check(g, full, comp)

    def test_three_components(self):
        g = corpus.disjoint_union(corpus.path_graph(2), corpus.path_graph(2),
                                  corpus.path_graph(2))
        a = VertexSubset([1, 1, 1, 1, 0, 0])     # two components
        b = VertexSubset([1, 1, 0, 0, 0, 0])     # one of them
        assert invariance_transfer_check(g, a, b)

    def test_exhaustive_small(self):
        for g in (P2_P3, corpus.path_graph(4),
                  corpus.disjoint_union(corpus.cycle_graph(3),
                                        corpus.path_graph(2))):
            checked, failures = invariance_transfer_exhaustive(g)
            assert checked > 0
            assert failures == 0

    def test_size_limit(self):
        with pytest.raises(SizeLimit):
            invariance_transfer_exhaustive(corpus.path_graph(13))


class TestCharInvSplitting:
    def test_invariant_sets_split_energy(self, rng):
        g = P2_P3
        comps = connected_components(g).components
        for sub in (comps[0], comps[1], comps[0] | comps[1]):
            bits = sub.bits
            for _ in range(20):
                f = rng.standard_normal(5)
                qf = quadratic_form(g, f)
                split = quadratic_form(g, f * bits) + quadratic_form(g, f * ~bits)
                assert abs(qf - split) <= 1e-10 * (1 + abs(qf))

    def test_non_invariant_set_violates(self):
        g = corpus.path_graph(2)
        f = np.array([1.0, 1.0])  # indicator of a crossing edge pair
        bits = np.array([True, False])
        qf = quadratic_form(g, f)
        split = quadratic_form(g, f * bits) + quadratic_form(g, f * ~bits)
        assert split - qf == pytest.approx(2.0)  # 2 b(x,y)


class TestRestrictedResolventBlock:
    def test_block_identity_on_invariant_sets(self):
        g = P2_P3
        op = assemble_operator(g)
        comp = connected_components(g).components[1]
        idx = comp.indices()
        for alpha in (0.5, 1.0, 2.0):
            full = resolvent(op, alpha).matrix
            sub = resolvent(assemble_operator(restrict(g, comp)), alpha).matrix
            assert np.max(np.abs(full[np.ix_(idx, idx)] - sub)) <= 1e-9

    def test_restrictions_stay_positivity_preserving(self, rng,
                                                     small_random_graphs):
        for g in small_random_graphs[:5]:
            bits = rng.random(g.n_vertices) < 0.5
            if not bits.any():
                bits[0] = True
            sub = restrict(g, VertexSubset(bits))
            assert positivity_preserving_check(sub, trials=50, seed=3)
