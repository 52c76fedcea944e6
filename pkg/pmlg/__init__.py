name = 'pmlg'
version = '0.1.0'

from .graph import (
    LabeledGraph, # node-labeled graph, directed or undirected
    NodeRole, # role of a node in a reduction instance
    parse_graph,
    serialize_graph,
    find_bridges,
    max_degree,
    is_dag,
    expand_to_unit_labels,
)
from .sat import CnfFormula, HalfAssignment, parse_dimacs, make_even, mirror_clauses, brute_force_sat
from .matcher import Pattern, Occurrence, match_exact, match_bruteforce
from .reduction import (
    ReductionArtifacts, # pattern + graph + roles of one instance
    build_pattern,
    build_satisfaction_matrix,
    build_gadget_gf,
    build_gadget_gu,
    build_full_graph,
)
from .transform import to_degree3, encode_binary, orient_dag, reverse_reading_cover, verify_encoding_table
from .evaluator import CampaignConfig, run_campaign, run_lemma_suite
