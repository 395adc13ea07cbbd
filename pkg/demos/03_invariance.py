"""Invariant sets, the component sigma-algebra, and the decomposition of a
disconnected graph under a strictly positive vector.

A subset is invariant exactly when the indicator commutes with every
resolvent, which on graphs means no positive edge leaves it. Enumerating
all subsets of a small disconnected graph exhibits the lattice.
"""

import numpy as np

from nodalforms import (assemble_operator, connected_components,
                        gerlach_decompose, invariance_transfer_exhaustive,
                        invariant_subsets_bruteforce, is_invariant_resolvent,
                        is_irreducible)
from nodalforms.corpus import cycle_graph, disjoint_union, path_graph
from nodalforms.forms import VertexSubset

g = disjoint_union(cycle_graph(3), path_graph(2))
op = assemble_operator(g)
print("graph:", g.labels)
print("irreducible:", is_irreducible(g))

family = invariant_subsets_bruteforce(op)
print(f"\ninvariant subsets ({len(family)} of {2 ** g.n_vertices}):")
for sub in family:
    cert = is_invariant_resolvent(op, sub)
    print(f"  {list(sub.labels(g)) or '{}'}  commutator={cert.commutator_norm:.2e}")

bad = VertexSubset([True, False, False, False, False])
cert = is_invariant_resolvent(op, bad)
print(f"\nnon-invariant {list(bad.labels(g))}: commutator="
      f"{cert.commutator_norm:.2e}, crossing edges={len(cert.crossing_edges)}")

parts = gerlach_decompose(op, np.ones(g.n_vertices))
print("\ndecomposition under f = 1:",
      [list(c.labels(g)) for c in parts.components])
assert tuple(parts.components) == tuple(connected_components(g).components)

checked, failures = invariance_transfer_exhaustive(g)
print(f"invariance transfer, exhaustive over subset pairs: "
      f"{checked} implications, {failures} failures")
