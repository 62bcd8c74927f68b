"""Benchmark harness comparing the three distance-matrix strategies for a
full all-edges curvature pass.

Methods:
  * ``sssd-per-edge``        one task per edge, one single-destination
                             Dijkstra per matrix cell;
  * ``ssmd-no-arrangement``  one task per edge, one multi-destination
                             Dijkstra per source;
  * ``ssmd-arrangement``     vertex-batched tasks sharing one matrix across
                             all edges claimed at a vertex.

All three produce identical curvatures; what differs is the amount of
shortest-path work. Wall time is hardware-bound, so the harness also reports
machine-independent counters (distances computed, vertices settled) and
acceptance checks lean on those plus relative ordering.
"""

from __future__ import annotations

import statistics
import time
from dataclasses import dataclass, replace

import numpy as np

from .curvature import CurvatureConfig, _lly_edge, all_curvatures, resolve_workers
from .errors import InvalidMethod
from .graph import DistanceState, Graph
from .shortest_paths import (
    DistanceMatrix,
    SearchStats,
    build_tasks,
    run_tasks_parallel,
    sssd,
    ssmd,
)

METHODS = ("sssd-per-edge", "ssmd-no-arrangement", "ssmd-arrangement")

_ARRANGEMENT = {
    "sssd-per-edge": "edge",
    "ssmd-no-arrangement": "edge",
    "ssmd-arrangement": "vertex",
}


@dataclass
class BenchResult:
    method: str
    arrangement: str
    graph: str
    n: int
    m: int
    shortest_paths: int
    settled_vertices: int
    heap_pushes: int
    wall_seconds: float
    kappa: np.ndarray

    def csv_row(self) -> str:
        base = self.method.split("-")[0]
        return (
            f"{base},{self.arrangement},{self.graph},{self.n},{self.m},"
            f"{self.shortest_paths},{float(self.wall_seconds)!r},"
            f"{self.settled_vertices}"
        )


CSV_HEADER = "method,arrangement,graph,n,m,shortest_paths,wall_seconds,settled_vertices"


def _per_edge_tasks(g: Graph):
    """One task per edge, oriented like the vertex arrangement (the source
    measure sits at the claiming vertex) so curvatures match bit for bit."""
    tasks = []
    for t in build_tasks(g):
        for eid in t.edges:
            a, b = g.endpoints(int(eid))
            far = b if a == t.init_vertex else a
            tasks.append((int(eid), t.init_vertex, far))
    return tasks


def _edge_pass(g, s, cfg, workers, use_ssmd):
    def per_task(g_, s_, task):
        eid, init, far = task
        stats = SearchStats()
        S = np.concatenate([g_.neighbors(init), [init]]).astype(np.int64)
        D = np.concatenate([[far], g_.neighbors(far)]).astype(np.int64)
        entries = np.empty((S.size, D.size), dtype=np.float64)
        if use_ssmd:
            for i in range(S.size):
                dmap = ssmd(g_, s_, int(S[i]), D, stats)
                entries[i] = [dmap[int(t)] for t in D]
        else:
            for i in range(S.size):
                for j in range(D.size):
                    entries[i, j] = sssd(g_, s_, int(S[i]), int(D[j]), stats)
        dm = DistanceMatrix(
            sources=S,
            destinations=D,
            entries=entries,
            row_of={int(v): i for i, v in enumerate(S)},
            col_of={int(v): j for j, v in enumerate(D)},
        )
        kappa, _ = _lly_edge(g_, s_, eid, dm, cfg, init)
        return [(eid, kappa)], stats

    merged, extras = run_tasks_parallel(g, s, _per_edge_tasks(g), workers, per_task)
    kappa = np.array([merged[e] for e in range(g.n_edges)], dtype=np.float64)
    totals = SearchStats()
    for st in extras:
        totals.add(st)
    return kappa, totals


def _one_pass(g, s, method, cfg, workers):
    if method == "ssmd-arrangement":
        report = all_curvatures(g, s, replace(cfg, worker_count=workers))
        return report.kappa, report.search
    if method == "ssmd-no-arrangement":
        return _edge_pass(g, s, cfg, workers, use_ssmd=True)
    if method == "sssd-per-edge":
        return _edge_pass(g, s, cfg, workers, use_ssmd=False)
    raise InvalidMethod(f"unknown method {method!r}, expected one of {METHODS}")


def bench_curvature_pass(
    g: Graph,
    s: DistanceState,
    method: str,
    worker_count: int | None = None,
    cfg: CurvatureConfig | None = None,
    graph_name: str = "graph",
    timed_runs: int = 3,
) -> BenchResult:
    """Time one full all-edges curvature pass with the selected method.

    Runs one untimed warm-up pass (counters are taken from it; they are
    deterministic) and reports the median wall time of ``timed_runs`` timed
    passes.
    """
    if method not in METHODS:
        raise InvalidMethod(f"unknown method {method!r}, expected one of {METHODS}")
    cfg = cfg or CurvatureConfig()
    workers = resolve_workers(worker_count)
    kappa, stats = _one_pass(g, s, method, cfg, workers)
    times = []
    for _ in range(timed_runs):
        t0 = time.perf_counter()
        _one_pass(g, s, method, cfg, workers)
        times.append(time.perf_counter() - t0)
    return BenchResult(
        method=method,
        arrangement=_ARRANGEMENT[method],
        graph=graph_name,
        n=g.n_vertices,
        m=g.n_edges,
        shortest_paths=stats.shortest_paths,
        settled_vertices=stats.settled,
        heap_pushes=stats.pushes,
        wall_seconds=statistics.median(times),
        kappa=kappa,
    )


def assert_methods_agree(results: list[BenchResult], tol: float = 1e-9) -> None:
    """Cross-check that every benched method produced the same curvatures."""
    for other in results[1:]:
        diff = np.max(np.abs(results[0].kappa - other.kappa))
        if diff > tol:
            raise AssertionError(
                f"methods {results[0].method} and {other.method} disagree "
                f"by {diff:g}"
            )
