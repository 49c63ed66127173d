"""Strong shift equivalence toolkit for finite directed multigraphs."""

from .graphs import (
    DirectedMultigraph,
    Edge,
    EdgeFunction,
    GraphError,
    GraphFormatError,
    GraphIsomorphism,
    NonnegIntMatrix,
    Path,
    adjacency_matrix,
    canonical_key,
    canonical_text,
    classify_vertices,
    graph_from_matrix,
    is_isomorphic,
    parse_graph,
    parse_graph_with_weights,
    path_weight,
    paths_between,
    same_graph,
    serialize_graph,
    to_dot,
)
from .invariants import (
    InvariantFilterResult,
    PeriodicPointProfile,
    periodic_point_profile,
    sse_invariant_filter,
)
from .splits import (
    ReverseTransportResult,
    SplitApplication,
    SplitReport,
    SplitSpec,
    SplitSpecError,
    SplitWitnessBundle,
    insplit_apply,
    insplit_reverse_transport,
    insplit_transport_f,
    insplit_witness,
    outsplit_apply,
    outsplit_transport_f,
    outsplit_witness,
    parse_split_spec,
    split_is_proper,
    validate_split_spec,
)
from .sse import (
    ChainSearchResult,
    ChainStep,
    EssePair,
    EsseWitnessBundle,
    SseWitness,
    WitnessConstructionError,
    WitnessReferenceError,
    WitnessReport,
    find_theta_bijections,
    matrix_essse_search,
    matrix_essse_verify,
    parse_witness,
    sse_chain_search,
    verify_sse_witness,
    witness_from_essse,
    witness_to_json_obj,
)
from .weights import (
    LiftEquation,
    LiftOutcome,
    TransportError,
    WeightTriple,
    check_weight_preserving,
    lift_edge_function,
    transport_g_from_h,
    weights_from_f_E12,
    weights_from_f_E21,
)

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
