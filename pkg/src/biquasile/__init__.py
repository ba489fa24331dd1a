"""Finite biquasiles, dual graph diagrams of oriented links, and coloring counts."""
from .algebra import (BiquasileMap, FiniteBiquasile, StructureError, TableError, canonical_form,
                      check_axioms, check_axioms_fg, dehn_biquasile, divisions, is_isomorphic,
                      is_latin, is_simple, iso_classes, parse_block_matrices,
                      subbiquasile_closure)
from .alexander import (AlexanderParams, LaurentMatrix, LaurentPoly, classify_params,
                        enumerate_params, materialize, specialize, symbolic_relation_row)
from .diagram import (BraidWord, CrossingRelation, DualGraphDiagram, OrientedPDCode,
                      braid_closure, crossing_relations, directed_component_count, dual_graph,
                      parse_pd, regions, validate_reconstruction)
from .enumerate import enumerate_biquasiles
from .solve import (ColoringProblem, LinearSystem, count_colorings, count_solutions_mod_m,
                    enumerate_colorings, phi_invariant, phi_linear, smith_normal_form)
from .words import Presentation, fundamental_presentation, simplify, tietze_eliminate

__version__ = "0.1.0"
