"""Edge curvature from optimal transport between endpoint neighborhood
measures.

For an edge (x, y), each endpoint carries a lazy measure: mass ``alpha``
stays on the endpoint and the rest spreads over its neighbors proportionally
to edge weight. The alpha-curvature is ``1 - C*/d(x, y)`` where ``C*`` is the
optimal transport cost between the two measures under shortest-path ground
distances. The limit curvature (slope of the last linear segment as alpha
approaches 1) is evaluated at a single alpha close to 1 and divided by
``1 - alpha``; a second evaluation point guards against alpha0 sitting left
of the final segment boundary, since the curve is piecewise linear with at
most three parts.

The independent check ``lly_dual_oracle`` solves the equivalent potential
LP: minimize the Laplacian gradient across the edge over unit-gradient
Lipschitz vertex functions.
"""

from __future__ import annotations

import logging
import os
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import linprog

from . import transport
from .errors import (
    DegenerateNeighborhood,
    DualInfeasible,
    IncompleteMatrix,
    InvalidParams,
    NotConnected,
    OracleTooLarge,
)
from .graph import EPS_FLOOR, DistanceState, Graph, validate_connected
from .shortest_paths import (
    DistanceMatrix,
    SearchStats,
    build_tasks,
    run_tasks_parallel,
    task_distance_matrix,
)

log = logging.getLogger(__name__)

WEIGHT_MODES = ("fixed-w", "evolving-d")

# Two-point slope disagreement beyond this flags a segment-boundary problem.
SLOPE_TOL = 1e-6


@dataclass(frozen=True)
class MassDistribution:
    support: np.ndarray  # vertex ids, no duplicates
    mass: np.ndarray     # matching probabilities, sum 1


@dataclass(frozen=True)
class CurvatureConfig:
    """Evaluation-point and execution options for curvature passes."""

    alpha0: float = 0.99
    weight_mode: str = "fixed-w"
    slope_check_alpha: float | None = 0.97
    worker_count: int | None = None

    def __post_init__(self):
        if not (0.5 <= self.alpha0 < 1.0):
            raise InvalidParams(f"alpha0 must lie in [0.5, 1), got {self.alpha0}")
        if self.weight_mode not in WEIGHT_MODES:
            raise InvalidParams(f"weight_mode must be one of {WEIGHT_MODES}")
        if self.slope_check_alpha is not None and not (
            0.0 < self.slope_check_alpha < self.alpha0
        ):
            raise InvalidParams("slope_check_alpha must lie in (0, alpha0)")


def resolve_workers(worker_count: int | None) -> int:
    if worker_count is not None:
        if worker_count < 1:
            raise InvalidParams("worker_count must be >= 1")
        return worker_count
    return os.cpu_count() or 1


@dataclass
class CurvatureReport:
    """Per-edge curvatures with summary statistics (edge-id order)."""

    kappa: np.ndarray
    alpha_used: float
    weight_mode: str
    mean: float
    std: float
    clamp_events: int
    slope_warnings: int = 0
    search: SearchStats = field(default_factory=SearchStats)


def _neighbor_weights(g: Graph, s: DistanceState, v: int, mode: str) -> np.ndarray:
    eids = g.incident_edges(v)
    if mode == "fixed-w":
        return g.weights[eids]
    return s.d[eids]


def edge_distributions(
    g: Graph,
    s: DistanceState,
    e: int,
    alpha: float,
    mode: str = "fixed-w",
) -> tuple[MassDistribution, MassDistribution]:
    """Endpoint measures of edge ``e``: mass ``alpha`` on the endpoint, the
    rest split over its neighbors proportionally to weight (original weights
    in mode ``fixed-w``, current distances in mode ``evolving-d``)."""
    if not (0.0 <= alpha <= 1.0):
        raise InvalidParams(f"alpha must lie in [0, 1], got {alpha}")
    if mode not in WEIGHT_MODES:
        raise InvalidParams(f"weight_mode must be one of {WEIGHT_MODES}")
    x, y = g.endpoints(e)
    return _vertex_distribution(g, s, x, alpha, mode), _vertex_distribution(
        g, s, y, alpha, mode
    )


def _vertex_distribution(
    g: Graph, s: DistanceState, v: int, alpha: float, mode: str
) -> MassDistribution:
    nbrs = g.neighbors(v)
    w = _neighbor_weights(g, s, v, mode)
    total = float(w.sum())
    if total < EPS_FLOOR:
        raise DegenerateNeighborhood(
            f"all neighbor weights of vertex {g.labels[v]} fall below {EPS_FLOOR}"
        )
    support = np.concatenate(([v], nbrs)).astype(np.int64)
    mass = np.concatenate(([alpha], (1.0 - alpha) * (w / total)))
    return MassDistribution(support=support, mass=mass)


def _restricted_cost(dm: DistanceMatrix, mu: MassDistribution, nu: MassDistribution):
    try:
        rows = [dm.row_of[int(v)] for v in mu.support]
        cols = [dm.col_of[int(v)] for v in nu.support]
    except KeyError as exc:
        raise IncompleteMatrix(f"distance matrix misses vertex {exc.args[0]}") from None
    return dm.entries[np.ix_(rows, cols)]


def alpha_curvature(
    g: Graph,
    s: DistanceState,
    e: int,
    alpha: float,
    dm: DistanceMatrix,
    mode: str = "fixed-w",
    mu_vertex: int | None = None,
) -> float:
    """Idleness-``alpha`` curvature ``1 - C*/d`` of edge ``e``.

    ``d`` is the current edge distance (the quantity the flow updates), and
    the transport cost matrix is read from ``dm``, never recomputed.
    ``mu_vertex`` selects which endpoint carries the source measure; the
    result is symmetric in that choice up to float roundoff.
    """
    x, y = g.endpoints(e)
    if mu_vertex is not None and mu_vertex == y:
        x, y = y, x
    d_xy = float(s.d[e])
    if d_xy < EPS_FLOOR:
        raise InvalidParams(f"edge {e} distance {d_xy} below the distance floor")
    mu, nu = (
        _vertex_distribution(g, s, x, alpha, mode),
        _vertex_distribution(g, s, y, alpha, mode),
    )
    cost = _restricted_cost(dm, mu, nu)
    plan = transport.solve(transport.TransportProblem(mu.mass, nu.mass, cost))
    return 1.0 - plan.total_cost / d_xy


def _lly_edge(
    g: Graph,
    s: DistanceState,
    e: int,
    dm: DistanceMatrix,
    cfg: CurvatureConfig,
    mu_vertex: int | None,
) -> tuple[float, bool]:
    kappa = alpha_curvature(
        g, s, e, cfg.alpha0, dm, mode=cfg.weight_mode, mu_vertex=mu_vertex
    ) / (1.0 - cfg.alpha0)
    warned = False
    if cfg.slope_check_alpha is not None:
        other = alpha_curvature(
            g, s, e, cfg.slope_check_alpha, dm, mode=cfg.weight_mode, mu_vertex=mu_vertex
        ) / (1.0 - cfg.slope_check_alpha)
        if abs(other - kappa) > SLOPE_TOL:
            warned = True
            log.warning(
                "edge %d: slopes at alpha=%g and %g disagree (%.3g vs %.3g); "
                "alpha0 may sit left of the final linear segment",
                e, cfg.alpha0, cfg.slope_check_alpha, kappa, other,
            )
    return kappa, warned


def lly_curvature(
    g: Graph,
    s: DistanceState,
    e: int,
    dm: DistanceMatrix,
    cfg: CurvatureConfig | None = None,
    mu_vertex: int | None = None,
) -> float:
    """Limit curvature of edge ``e``: ``alpha_curvature(alpha0) / (1 - alpha0)``.

    If ``cfg.slope_check_alpha`` is set, the slope is re-derived at that
    second point and a disagreement beyond 1e-6 is logged as a
    segment-boundary warning.
    """
    cfg = cfg or CurvatureConfig()
    kappa, _ = _lly_edge(g, s, e, dm, cfg, mu_vertex)
    return kappa


def lly_dual_oracle(
    g: Graph,
    s: DistanceState,
    e: int,
    mode: str = "fixed-w",
) -> float:
    """Limit curvature via the potential LP (test-scale independent check).

    Minimizes the Laplacian gradient across the edge over vertex functions f
    with f(y) - f(x) = d(x, y) and |f(u) - f(v)| <= d(u, v) on every edge.
    The Lipschitz constraints use the current distances; the Laplacian
    weights follow ``mode``. Infeasibility signals a metric/consistency bug.
    """
    if g.n_vertices > 200:
        raise OracleTooLarge("dual oracle limited to graphs with <= 200 vertices")
    if mode not in WEIGHT_MODES:
        raise InvalidParams(f"weight_mode must be one of {WEIGHT_MODES}")
    x, y = g.endpoints(e)
    n = g.n_vertices
    d_xy = float(s.d[e])

    c = np.zeros(n)

    def add_laplacian(v: int, sign: float):
        nbrs = g.neighbors(v)
        w = _neighbor_weights(g, s, v, mode)
        total = float(w.sum())
        if total < EPS_FLOOR:
            raise DegenerateNeighborhood(
                f"all neighbor weights of vertex {g.labels[v]} fall below {EPS_FLOOR}"
            )
        for t, wt in zip(nbrs, w):
            c[t] += sign * wt / total
        c[v] -= sign

    add_laplacian(x, 1.0)
    add_laplacian(y, -1.0)
    c /= d_xy

    m = g.n_edges
    a_ub = np.zeros((2 * m, n))
    b_ub = np.empty(2 * m)
    for eid in range(m):
        u, v = g.endpoints(eid)
        a_ub[2 * eid, u] = 1.0
        a_ub[2 * eid, v] = -1.0
        a_ub[2 * eid + 1, u] = -1.0
        a_ub[2 * eid + 1, v] = 1.0
        b_ub[2 * eid] = s.d[eid]
        b_ub[2 * eid + 1] = s.d[eid]
    a_eq = np.zeros((2, n))
    a_eq[0, y] = 1.0
    a_eq[0, x] = -1.0
    a_eq[1, x] = 1.0
    b_eq = np.array([d_xy, 0.0])

    res = linprog(
        c, A_ub=a_ub, b_ub=b_ub, A_eq=a_eq, b_eq=b_eq,
        bounds=(None, None), method="highs",
    )
    if not res.success:
        raise DualInfeasible(
            f"potential LP for edge {e} failed: {res.message}"
        )
    return float(res.fun)


def all_curvatures(
    g: Graph, s: DistanceState, cfg: CurvatureConfig | None = None
) -> CurvatureReport:
    """Limit curvature of every edge via vertex-batched distance matrices.

    Tasks are built in vertex order, each task's matrix is produced by
    multi-destination Dijkstra, and the per-edge transport problems are
    solved from sub-matrices of it. Results land in per-edge slots, so the
    report is identical for any worker count.
    """
    cfg = cfg or CurvatureConfig()
    if not validate_connected(g):
        raise NotConnected("curvature requires a connected graph")
    workers = resolve_workers(cfg.worker_count)
    tasks = build_tasks(g)

    def per_task(g_, s_, task):
        stats = SearchStats()
        dm = task_distance_matrix(g_, s_, task, stats)
        pairs = []
        for eid in task.edges:
            kappa, warned = _lly_edge(g_, s_, int(eid), dm, cfg, task.init_vertex)
            pairs.append((int(eid), (kappa, warned)))
        return pairs, stats

    merged, extras = run_tasks_parallel(g, s, tasks, workers, per_task)
    kappa = np.empty(g.n_edges, dtype=np.float64)
    warnings = 0
    for eid in range(g.n_edges):
        k, warned = merged[eid]
        kappa[eid] = k
        warnings += warned
    totals = SearchStats()
    for st in extras:
        totals.add(st)
    return CurvatureReport(
        kappa=kappa,
        alpha_used=cfg.alpha0,
        weight_mode=cfg.weight_mode,
        mean=float(kappa.mean()) if kappa.size else 0.0,
        std=float(kappa.std()) if kappa.size else 0.0,
        clamp_events=s.clamp_events,
        slope_warnings=warnings,
        search=totals,
    )
