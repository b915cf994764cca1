"""Unique sink orientations of hypercubes: construction, analysis and census."""
from .analysis import (
    Parity,
    PseudoCycleWitness,
    SinkReport,
    check_holt_klee,
    check_locally_uniform,
    find_pseudo_cycle,
    global_sink,
    global_source,
    is_pseudo_uso,
    is_uso,
    longest_directed_path_length,
    pseudo_outdegree_parity,
    sinks_in_face,
)
from .constructions import (
    CombedSpec,
    contains_copy,
    is_kaleidoscope,
    matching_reversal,
    pcube_kaleidoscope,
    product_kaleidoscope,
    recursively_combed,
    split_lh,
    uniform_uso,
)
from .cube import (
    Automorphism,
    Direction,
    Face,
    OutMap,
    apply_automorphism,
    dims_of,
    dimset,
    edge_direction,
    face_subcube,
    is_orientation,
    mirror,
    permute_dims,
    reverse,
)
from .iso import (
    IsoClassRecord,
    all_automorphisms,
    are_isomorphic,
    canonical_form,
    census,
    enumerate_usos,
    exists_property_l_copy,
)
from .lcp import (
    LcpSolution,
    blowup_pmatrix,
    build_mv,
    dcube_outmap,
    is_p_matrix,
    is_spd,
    lcp_solution_at,
    pcube_outmap,
    schur_reduce,
    solve_exact,
)
from .lgraph import LGraph, PropertyLReport, has_property_l, lgraph, property_l_implies_uso_check

__version__ = "0.1.0"
