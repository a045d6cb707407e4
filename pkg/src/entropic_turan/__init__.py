"""Entropic and spectral tools for hypergraph Turan densities."""

__version__ = "0.1.0"

from .errors import (EntropicTuranError, HypergraphFormatError, InvalidParameters, NoEdges, NotAForest,
                     NotCertified, PreconditionFailure, SymmetryViolation, TooLarge)
from .hypergraph import (Hypergraph, PartialHypergraph, blowup, extend, find_isomorphism, is_isomorphic,
                         iterated_blowup, iterated_blowup_density_series, make_complete, make_complete_bipartite,
                         make_cycle, make_Fks, make_Fks_partial, make_partial_tent, make_path, make_star, make_tent,
                         random_hypergraph, read_hypergraph, tent_family, write_hypergraph)
from .homs import count_tree_homs, find_hom, is_hom_free
from .lagrangian import OptResult, adjacency_spectral_radius, blowup_density, closed_form_complete, p_spectral
from .entropy import (EdgeDistribution, FiniteDistribution, entropic_density, entropy, cond_entropy,
                      mixture_bound, ratio_sequence, uniform_edge_distribution)
from .forests import (certify_disjointness, derive_constraint, sampled_hom_distribution, validate_forest)
from .verify import CheckReport
from .constructions import find_G1, g1_iterated_density, intersection_design
