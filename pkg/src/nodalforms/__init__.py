"""Positivity preserving quadratic forms on finite weighted graphs.

Spectra, invariant sets, nodal-domain decompositions and the generalized
Courant bound l <= n + k - 1, with every supporting fact available as an
executable check. Grid discretizations of divergence-form elliptic
operators plug into the same graph machinery.
"""

from .elliptic import (GridSpec, build_grid_form, dirichlet_interval_eigenvalues,
                       dirichlet_rectangle_eigenvalues, grid_spec_from_json,
                       make_grid_spec, strong_bound_report)
from .errors import (DimensionError, EmptyDomain, EmptySubset,
                     HypothesisNotMet, InvalidMatrix, NoConvergence,
                     NodalFormsError, NotPositiveDefinite, PreconditionError,
                     SchemaError, SizeLimit, ZeroVector)
from .forms import (FormOperator, VertexSubset, WeightedGraph,
                    assemble_operator, bilinear_form, graph_from_json,
                    graph_to_json, m_inner, m_norm,
                    positivity_preserving_check, quadratic_form, restrict)
from .invariance import (ComponentPartition, InvarianceCertificate,
                         connected_components, gerlach_decompose,
                         invariance_transfer_check,
                         invariance_transfer_exhaustive,
                         invariant_subsets_bruteforce,
                         is_invariant_combinatorial, is_invariant_resolvent,
                         is_irreducible, projection_domination_check,
                         q_projection)
from .linalg import (DenseSymMatrix, EigenDecomposition, cholesky_factor,
                     jacobi_eigh, solve_spd)
from .nodal import (CourantReport, NodalDecomposition, SignPattern,
                    courant_check, cross_form_matrix, default_tau,
                    eigenspace_sample, nodal_decompose,
                    restricted_resolvent_bound_check, sign_sets,
                    sum_lemma_residual)
from .spectral import (Cluster, EigenSystem, Resolvent, check_variational,
                       eigensystem, multiplicity, rayleigh, resolvent)

__version__ = "0.1.0"

__all__ = [
    "GridSpec", "build_grid_form", "dirichlet_interval_eigenvalues",
    "dirichlet_rectangle_eigenvalues", "grid_spec_from_json", "make_grid_spec",
    "strong_bound_report",
    "DimensionError", "EmptyDomain", "EmptySubset", "HypothesisNotMet",
    "InvalidMatrix", "NoConvergence", "NodalFormsError", "NotPositiveDefinite",
    "PreconditionError", "SchemaError", "SizeLimit", "ZeroVector",
    "FormOperator", "VertexSubset", "WeightedGraph", "assemble_operator",
    "bilinear_form", "graph_from_json", "graph_to_json", "m_inner", "m_norm",
    "positivity_preserving_check", "quadratic_form", "restrict",
    "ComponentPartition", "InvarianceCertificate", "connected_components",
    "gerlach_decompose", "invariance_transfer_check",
    "invariance_transfer_exhaustive", "invariant_subsets_bruteforce",
    "is_invariant_combinatorial", "is_invariant_resolvent", "is_irreducible",
    "projection_domination_check", "q_projection",
    "DenseSymMatrix", "EigenDecomposition", "cholesky_factor", "jacobi_eigh",
    "solve_spd",
    "CourantReport", "NodalDecomposition", "SignPattern", "courant_check",
    "cross_form_matrix", "default_tau", "eigenspace_sample", "nodal_decompose",
    "restricted_resolvent_bound_check", "sign_sets", "sum_lemma_residual",
    "Cluster", "EigenSystem", "Resolvent", "check_variational", "eigensystem",
    "multiplicity", "rayleigh", "resolvent",
]
