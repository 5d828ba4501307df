"""Hopset and shortcut construction for directed graphs.

Turns any shortcut/hopset oracle for shallow digraphs into a constructor
for arbitrary digraphs, via a randomized low-diameter decomposition and a
clustered-DAG reduction, with brute-force verification of every
guarantee.
"""

__version__ = "0.1.0"

from .dag_reduce import (
    ClusteredInput,
    DagIterationRecord,
    DagReduceTrace,
    merge_groups,
    reduce_clustered_dag,
    strip_cross_edges,
)
from .generators import FAMILIES, GeneratorSpec, generate
from .graphs import (
    INF,
    DiGraph,
    EdgeSet,
    PathWitness,
    WeightedEdgeSet,
    check_approx_hopbound,
    dist_all_pairs,
    dist_from_sources,
    hop_limited_dist,
    induced_subgraph,
    reachability_diameter,
    reachable_pairs,
    scc_topological,
    strong_diameter,
    weak_diameter,
)
from .ldd import (
    LddParams,
    LddResult,
    ball,
    estimate_removal_probability,
    find_balanced_set,
    low_diameter_decomposition,
    sample_truncated_geometric,
)
from .oracles import (
    ExactReachabilityOracle,
    ExactTransitiveOracle,
    HubSamplingOracle,
    OracleCall,
    OracleSizeLaw,
    ShallowOracle,
    ShortcutOracleAdapter,
    SizeLawViolation,
    checked_call,
    shortcut_as_hopset,
)
from .shallow_reduce import (
    PhasePlan,
    ReductionConfig,
    ReductionReport,
    build_stars,
    compute_size_bound,
    phase_sigma,
    reduce_hopset,
    reduce_shortcut,
    run_phase,
    scale_down_graph,
    scaled_length,
)
from .verify import (
    DEFAULT_CEILING,
    SizeCeilingError,
    VerificationReport,
    Violation,
    verify_clustered,
    verify_distance_preservation,
    verify_hopset,
    verify_ldd,
    verify_shortcut,
)

__all__ = [
    "INF",
    "DEFAULT_CEILING",
    "FAMILIES",
    "DiGraph",
    "EdgeSet",
    "WeightedEdgeSet",
    "PathWitness",
    "GeneratorSpec",
    "generate",
    "dist_all_pairs",
    "dist_from_sources",
    "hop_limited_dist",
    "check_approx_hopbound",
    "reachability_diameter",
    "reachable_pairs",
    "scc_topological",
    "strong_diameter",
    "weak_diameter",
    "induced_subgraph",
    "LddParams",
    "LddResult",
    "ball",
    "find_balanced_set",
    "low_diameter_decomposition",
    "estimate_removal_probability",
    "sample_truncated_geometric",
    "OracleCall",
    "OracleSizeLaw",
    "ShallowOracle",
    "SizeLawViolation",
    "checked_call",
    "ExactTransitiveOracle",
    "ExactReachabilityOracle",
    "HubSamplingOracle",
    "ShortcutOracleAdapter",
    "shortcut_as_hopset",
    "ClusteredInput",
    "DagIterationRecord",
    "DagReduceTrace",
    "merge_groups",
    "strip_cross_edges",
    "reduce_clustered_dag",
    "ReductionConfig",
    "ReductionReport",
    "PhasePlan",
    "phase_sigma",
    "scaled_length",
    "scale_down_graph",
    "build_stars",
    "run_phase",
    "reduce_hopset",
    "reduce_shortcut",
    "compute_size_bound",
    "Violation",
    "VerificationReport",
    "SizeCeilingError",
    "verify_distance_preservation",
    "verify_hopset",
    "verify_shortcut",
    "verify_ldd",
    "verify_clustered",
]
