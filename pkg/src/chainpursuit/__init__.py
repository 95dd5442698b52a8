"""Probabilistic chain pursuit on graphs: simulation and exact walk-chain analysis."""

from .graph import (
    UNREACHABLE,
    Graph,
    GraphFormatError,
    PathCountOverflow,
    PathLimitExceeded,
    UnreachableError,
    all_pairs_distances,
    complete_graph,
    count_shortest_paths,
    count_shortest_paths_via_edge,
    cycle_graph,
    disk,
    dump_graph,
    enumerate_shortest_paths,
    grid_graph,
    load_graph,
    path_graph,
    sample_pursuit_step,
)
from .markov import (
    ClosedClass,
    Convergence,
    Stability,
    class_of,
    enumerate_closed_classes,
    is_convergent_bounded,
    is_stable_bounded,
    sequential_shuffle,
    shuffle_walk,
    stationary_distribution,
    transition_matrix,
    transition_probability,
)
from .products import cartesian_product, project_walk, strong_product, xy_scores
from .recognizers import is_chordal, is_pseudo_modular
from .simulation import PursuitConfig, PursuitTrace, run_pursuit
from .walks import (
    BudgetExceeded,
    atomic_deformations,
    deformation_closure,
    discrepancy_pairs,
    is_delta_optimal,
    validate_walk,
)

__all__ = [
    "all_pairs_distances",
    "atomic_deformations",
    "BudgetExceeded",
    "cartesian_product",
    "class_of",
    "ClosedClass",
    "complete_graph",
    "Convergence",
    "count_shortest_paths",
    "count_shortest_paths_via_edge",
    "cycle_graph",
    "deformation_closure",
    "discrepancy_pairs",
    "disk",
    "dump_graph",
    "enumerate_closed_classes",
    "enumerate_shortest_paths",
    "Graph",
    "GraphFormatError",
    "grid_graph",
    "is_chordal",
    "is_convergent_bounded",
    "is_delta_optimal",
    "is_pseudo_modular",
    "is_stable_bounded",
    "load_graph",
    "path_graph",
    "PathCountOverflow",
    "PathLimitExceeded",
    "project_walk",
    "PursuitConfig",
    "PursuitTrace",
    "run_pursuit",
    "sample_pursuit_step",
    "sequential_shuffle",
    "shuffle_walk",
    "Stability",
    "stationary_distribution",
    "strong_product",
    "transition_matrix",
    "transition_probability",
    "UNREACHABLE",
    "UnreachableError",
    "validate_walk",
    "xy_scores",
]

__version__ = "0.1.0"
