"""Discrete curvature and curvature-flow distance embeddings for weighted
graphs.

The library computes per-edge curvature from exact optimal transport between
endpoint neighborhood measures, iterates the rescaled multiplicative flow to
a constant-curvature fixed point, and exposes the resulting edge distances
for structural analysis. Distance matrices are produced by multi-destination
Dijkstra over vertex-batched tasks executed on a thread pool, with
deterministic results for any worker count.
"""

__version__ = "0.1.0"

from . import analysis, bench, curvature, flow, generators, transport
from .curvature import (
    CurvatureConfig,
    CurvatureReport,
    all_curvatures,
    alpha_curvature,
    edge_distributions,
    lly_curvature,
    lly_dual_oracle,
)
from .errors import RicciError
from .flow import FlowConfig, FlowTrace, contraction_gap, initial_state, run, step
from .graph import (
    EPS_FLOOR,
    DistanceState,
    Graph,
    dumps_edge_list,
    from_edges,
    load_edge_list,
    rescale,
    save_edge_list,
    scale_distances,
    state_from_weights,
    validate_connected,
)
from .shortest_paths import (
    CurvatureTask,
    DistanceMatrix,
    SearchStats,
    build_tasks,
    run_tasks_parallel,
    ssmd,
    sssd,
    task_distance_matrix,
)

__all__ = [
    "EPS_FLOOR",
    "CurvatureConfig",
    "CurvatureReport",
    "CurvatureTask",
    "DistanceMatrix",
    "DistanceState",
    "FlowConfig",
    "FlowTrace",
    "Graph",
    "RicciError",
    "SearchStats",
    "all_curvatures",
    "alpha_curvature",
    "analysis",
    "bench",
    "build_tasks",
    "contraction_gap",
    "curvature",
    "dumps_edge_list",
    "edge_distributions",
    "flow",
    "from_edges",
    "generators",
    "initial_state",
    "lly_curvature",
    "lly_dual_oracle",
    "load_edge_list",
    "rescale",
    "run",
    "run_tasks_parallel",
    "save_edge_list",
    "scale_distances",
    "ssmd",
    "sssd",
    "state_from_weights",
    "step",
    "task_distance_matrix",
    "transport",
    "validate_connected",
]
