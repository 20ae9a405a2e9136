"""Weighted subgraph search: heaviest cliques, cycles, and patterns in
vertex- and edge-weighted graphs, plus the matrix machinery underneath
(packed Boolean products, dominance counting, witness recovery) and a
buyer-seller stable matching built on the same kernels.

Everything ships with a brute-force reference in :mod:`hsub.oracle`.
"""
from .graphs import (
    Graph,
    GraphFormatError,
    SubgraphResult,
    VertexColoring,
    better_result,
    clique_result,
    cycle_result,
    generate_random_graph,
    parse_graph,
    random_vertex_coloring,
    serialize_graph,
)
from .matrices import (
    BoolMatrix,
    bool_product,
    count_product,
    max_plus_product,
    min_plus_product,
    parse_matrix,
    serialize_matrix,
    set_threads,
)
from .dominance import (
    DominanceParams,
    MsbResult,
    PointSet,
    distance_threshold,
    dominance_matrix,
    msb_distance_product,
    naive_dominance,
    weighted_dominance,
)
from .witness import (
    PlanParameters,
    WitnessMatrix,
    interval_witness,
    max_witness_product,
    plan_parameters,
    top_k_witnesses,
)
from .vertexmax import (
    AdjacencySystem,
    AllPairsBest,
    adjacency_system,
    all_pairs_max_clique,
    all_pairs_max_pattern,
    edge_cover_number,
    heaviest_k2k,
    heaviest_triangle_det,
    heaviest_triangle_monotone,
    heaviest_triangle_rand,
    heaviest_triangle_sparse,
    sample_triangle,
    triangle_threshold_edge,
)
from .edgemax import (
    ColorTrialPlan,
    all_pairs_heaviest_k_path,
    colorful_cycle_through,
    densest_k_subgraph,
    heaviest_k_cycle_dense,
    heaviest_k_cycle_sparse,
    heaviest_subgraph_distance_product,
)
from .chromatic import (
    ColorPartition,
    ColorReduction,
    enumerate_partitions,
    mono_clique,
    mono_k4,
    mono_triangle,
    rainbow_clique,
)
from .market import (
    Buyer,
    MarketInstance,
    PreferenceSpec,
    Seller,
    TransactionMatrices,
    blocking_pairs,
    generate_random_market,
    parse_market,
    serialize_market,
    stable_matching,
    transaction_matrices,
)

__version__ = "0.1.0"

import types as _types

__all__ = sorted(
    name for name, value in globals().items()
    if not name.startswith("_") and not isinstance(value, _types.ModuleType)
)
