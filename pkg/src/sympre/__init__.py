"""Symmetry-preserving CNF preprocessing, symmetry detection and verification."""

from .autgrp import (IncompleteSearchError, SearchStats, brute_force_automorphisms,
                     find_automorphisms, formula_automorphisms)
from .cnf import (Clause, DimacsParseError, Formula, OracleLimitError, model_set,
                  parse_dimacs, resolve, satisfies, simplify, write_dimacs)
from .gen import PhpSpec, gen_php, gen_random
from .groups import (PermGroup, lift_up, pointwise_stabilizer_order, restrict_down,
                     schreier_sims, trivial_group)
from .metrics import SymmetryMetrics, compute_metrics
from .model_graph import (KERNEL, ColoredGraph, StablePartition, asymmetric_variables,
                          build_model_graph, color_refinement, export_graph,
                          parse_graph, prune_discrete)
from .perms import (GeneratorParseError, LitPermutation, compose, format_permutation,
                    is_semantic_symmetry, is_syntactic_symmetry, parse_generators,
                    parse_permutation, write_generators)
from .properties import (PropertyReport, check_equiv, check_sl, check_sp, check_wsp,
                         enumerate_semantic_symmetries)
from .transforms import (PipelineConfig, TransformResult, TransformTrace, add_resolvent,
                         bce_exhaustive, bounded_ve, bve_eliminate, extend_model,
                         parse_trace, preprocess_pipeline, pure_exhaustive, replay_trace,
                         self_subsume_naive, serialize_trace,
                         simultaneous_self_subsumption_fixpoint,
                         simultaneous_self_subsumption_round, subsumption_exhaustive,
                         symmetric_bve, unit_conflict_exhaustive)

__version__ = "0.1.0"
