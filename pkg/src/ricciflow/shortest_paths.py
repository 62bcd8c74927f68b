"""Distance-matrix production: single- and multi-destination Dijkstra,
vertex-arranged task batching, and parallel task execution.

The multi-destination variant (``ssmd``) runs one heap until every requested
destination is settled, so source-sharing edges reuse one traversal instead
of re-exploring the same region per destination. Batching all unprocessed
edges adjacent to one vertex into a task lets a single |S|x|D| matrix serve
every transport problem of those edges; tasks are independent and run on a
fixed-size thread pool (the kernels release the GIL).

Determinism: heap ties break on vertex id, task results land in pre-assigned
per-edge slots, so outputs are identical for any worker count.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence

import numpy as np
from numba import njit

from .errors import InvalidParams, Unreachable
from .graph import DistanceState, Graph


@njit(cache=True, nogil=True)
def _dijkstra_kernel(indptr, nbr, eid, edist, src, dst_ids):
    """Settle vertices from ``src`` until all of ``dst_ids`` are settled.

    Returns (dist, settled_count, pushes, remaining); ``remaining`` > 0 means
    some destination is unreachable. Heap order is (distance, vertex id).
    """
    n = indptr.size - 1
    dist = np.full(n, np.inf)
    settled = np.zeros(n, np.uint8)
    is_dst = np.zeros(n, np.uint8)
    remaining = 0
    for t in dst_ids:
        if is_dst[t] == 0:
            is_dst[t] = 1
            remaining += 1
    cap = nbr.size + 8  # pushes <= 1 + number of improving relaxations
    hd = np.empty(cap, np.float64)
    hv = np.empty(cap, np.int64)
    hd[0] = 0.0
    hv[0] = src
    size = 1
    dist[src] = 0.0
    pushes = 1
    settled_count = 0
    while size > 0 and remaining > 0:
        d0 = hd[0]
        v0 = hv[0]
        size -= 1
        if size > 0:
            ld = hd[size]
            lv = hv[size]
            pos = 0
            while True:
                child = 2 * pos + 1
                if child >= size:
                    break
                rc = child + 1
                if rc < size and (hd[rc] < hd[child] or (hd[rc] == hd[child] and hv[rc] < hv[child])):
                    child = rc
                if hd[child] < ld or (hd[child] == ld and hv[child] < lv):
                    hd[pos] = hd[child]
                    hv[pos] = hv[child]
                    pos = child
                else:
                    break
            hd[pos] = ld
            hv[pos] = lv
        if settled[v0] == 1:
            continue
        settled[v0] = 1
        settled_count += 1
        if is_dst[v0] == 1:
            remaining -= 1
            if remaining == 0:
                break
        for k in range(indptr[v0], indptr[v0 + 1]):
            u = nbr[k]
            if settled[u] == 1:
                continue
            nd = d0 + edist[eid[k]]
            if nd < dist[u]:
                dist[u] = nd
                pos = size
                size += 1
                while pos > 0:
                    par = (pos - 1) >> 1
                    if hd[par] > nd or (hd[par] == nd and hv[par] > u):
                        hd[pos] = hd[par]
                        hv[pos] = hv[par]
                        pos = par
                    else:
                        break
                hd[pos] = nd
                hv[pos] = u
                pushes += 1
    return dist, settled_count, pushes, remaining


@dataclass
class SearchStats:
    """Machine-independent work counters, accumulated across runs."""

    shortest_paths: int = 0
    settled: int = 0
    pushes: int = 0

    def add(self, other: "SearchStats") -> None:
        self.shortest_paths += other.shortest_paths
        self.settled += other.settled
        self.pushes += other.pushes


def _run(g: Graph, s: DistanceState, src: int, dst_ids: np.ndarray):
    dist, settled, pushes, remaining = _dijkstra_kernel(
        g.adj_indptr, g.adj_nbr, g.adj_eid, s.d, src, dst_ids
    )
    if remaining > 0:
        missing = min(int(t) for t in dst_ids if not np.isfinite(dist[t]))
        raise Unreachable(g.labels[missing])
    return dist, settled, pushes


def sssd(
    g: Graph,
    s: DistanceState,
    src: int,
    dst: int,
    stats: SearchStats | None = None,
) -> float:
    """Exact shortest-path length from ``src`` to ``dst`` under state ``s``.

    Dijkstra terminates as soon as ``dst`` is settled.
    """
    dist, settled, pushes, remaining = _dijkstra_kernel(
        g.adj_indptr, g.adj_nbr, g.adj_eid, s.d, src,
        np.array([dst], dtype=np.int64),
    )
    if remaining > 0:
        raise Unreachable(g.labels[dst])
    if stats is not None:
        stats.shortest_paths += 1
        stats.settled += settled
        stats.pushes += pushes
    return float(dist[dst])


def ssmd(
    g: Graph,
    s: DistanceState,
    src: int,
    dsts: Iterable[int],
    stats: SearchStats | None = None,
) -> dict[int, float]:
    """Distances from ``src`` to every vertex in ``dsts`` with one heap run.

    Equivalent to calling :func:`sssd` per destination, but each vertex of the
    explored region is settled at most once.
    """
    dst_ids = np.fromiter((int(t) for t in dsts), dtype=np.int64)
    if dst_ids.size == 0:
        raise InvalidParams("destination set must be non-empty")
    dist, settled, pushes = _run(g, s, src, dst_ids)
    if stats is not None:
        stats.shortest_paths += dst_ids.size
        stats.settled += settled
        stats.pushes += pushes
    return {int(t): float(dist[t]) for t in dst_ids}


@dataclass(frozen=True)
class CurvatureTask:
    """All still-unprocessed edges adjacent to ``init_vertex``, with the
    source/destination sets whose distance matrix serves each edge's
    transport problem.

    ``sources`` covers the neighborhood measure at ``init_vertex``;
    ``destinations`` covers the measures at the claimed far endpoints only
    (edges already claimed by earlier tasks contribute no destinations).
    """

    init_vertex: int
    edges: np.ndarray        # edge ids, one endpoint == init_vertex
    sources: np.ndarray      # N(init) in id order, then init itself
    destinations: np.ndarray


def _task_for(g: Graph, v: int, claimed_eids: Sequence[int]) -> CurvatureTask:
    nbrs = g.neighbors(v)
    sources = np.concatenate([nbrs, [v]]).astype(np.int64)
    dest: list[int] = [v]
    seen = {v}
    for eid in claimed_eids:
        a, b = g.endpoints(eid)
        far = b if a == v else a
        for t in (far, *g.neighbors(far)):
            t = int(t)
            if t not in seen:
                seen.add(t)
                dest.append(t)
    return CurvatureTask(
        init_vertex=v,
        edges=np.asarray(claimed_eids, dtype=np.int64),
        sources=sources,
        destinations=np.asarray(dest, dtype=np.int64),
    )


def build_tasks(g: Graph) -> list[CurvatureTask]:
    """Partition the edge set into vertex-batched tasks.

    Vertices are visited in id order; each claims its not-yet-claimed
    incident edges. Tasks that would claim nothing are omitted; the returned
    tasks' edge sets are disjoint and cover every edge exactly once.
    """
    claimed = np.zeros(g.n_edges, dtype=bool)
    tasks: list[CurvatureTask] = []
    for v in range(g.n_vertices):
        eids = [int(e) for e in g.incident_edges(v) if not claimed[e]]
        if not eids:
            continue
        for e in eids:
            claimed[e] = True
        tasks.append(_task_for(g, v, eids))
    return tasks


@dataclass
class DistanceMatrix:
    """Shortest-path distances from each source (row) to each destination
    (column) under one distance state."""

    sources: np.ndarray
    destinations: np.ndarray
    entries: np.ndarray
    row_of: dict[int, int] = field(repr=False)
    col_of: dict[int, int] = field(repr=False)

    def lookup(self, src: int, dst: int) -> float:
        return float(self.entries[self.row_of[src], self.col_of[dst]])


def task_distance_matrix(
    g: Graph,
    s: DistanceState,
    task: CurvatureTask,
    stats: SearchStats | None = None,
) -> DistanceMatrix:
    """Run one multi-destination Dijkstra per source of ``task`` and assemble
    the |S|x|D| matrix."""
    S, D = task.sources, task.destinations
    entries = np.empty((S.size, D.size), dtype=np.float64)
    settled = 0
    pushes = 0
    for i in range(S.size):
        dist, st, pu = _run(g, s, int(S[i]), D)
        entries[i] = dist[D]
        settled += st
        pushes += pu
    if stats is not None:
        stats.shortest_paths += S.size * D.size
        stats.settled += settled
        stats.pushes += pushes
    return DistanceMatrix(
        sources=S,
        destinations=D,
        entries=entries,
        row_of={int(v): i for i, v in enumerate(S)},
        col_of={int(v): j for j, v in enumerate(D)},
    )


def run_tasks_parallel(
    g: Graph,
    s: DistanceState,
    tasks: Sequence,
    worker_count: int,
    per_task_fn: Callable,
) -> tuple[dict, list]:
    """Execute ``per_task_fn(g, s, task)`` for every task on a fixed-size
    thread pool and merge the per-edge results.

    ``per_task_fn`` must be pure given its arguments and return
    ``(pairs, extra)`` where ``pairs`` is an iterable of ``(edge_id, value)``.
    Results are written into per-edge slots, so the merged output does not
    depend on scheduling order. The first failing task (in task order) wins.
    """
    results: list = [None] * len(tasks)
    if worker_count <= 1 or len(tasks) <= 1:
        for idx, task in enumerate(tasks):
            results[idx] = per_task_fn(g, s, task)
    else:
        with ThreadPoolExecutor(max_workers=worker_count) as pool:
            futures = [pool.submit(per_task_fn, g, s, task) for task in tasks]
            for idx, fut in enumerate(futures):
                results[idx] = fut.result()
    merged: dict = {}
    extras: list = []
    for pairs, extra in results:
        extras.append(extra)
        for eid, value in pairs:
            if eid in merged:
                raise AssertionError(f"edge {eid} produced by two tasks")
            merged[eid] = value
    return merged, extras
