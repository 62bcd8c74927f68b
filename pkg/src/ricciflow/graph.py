"""Immutable weighted-graph representation and the per-edge distance state.

Vertices carry arbitrary string labels externally and dense integer ids
internally (assigned in first-appearance order so outputs are reproducible).
Edges are identified by their index in input order; every per-edge vector in
the package (distances, curvatures) is keyed by that edge id.

Adjacency is stored in compressed (CSR) form: ``adj_indptr[v]:adj_indptr[v+1]``
slices ``adj_nbr`` / ``adj_eid``, sorted by neighbor id within each vertex.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, TextIO

import numpy as np

from .errors import (
    DegenerateState,
    DuplicateEdge,
    InvalidScale,
    InvalidWeight,
    ParseError,
    SelfLoop,
)

# Distances are clamped here instead of being allowed to reach 0: a literal 0
# breaks the neighbor-weight normalization of the curvature distributions.
EPS_FLOOR = 1e-12


def _frozen(a: np.ndarray) -> np.ndarray:
    a.flags.writeable = False
    return a


@dataclass(frozen=True)
class Graph:
    """Undirected weighted graph, immutable after construction."""

    n_vertices: int
    edge_u: np.ndarray          # int64, shape (m,)
    edge_v: np.ndarray          # int64, shape (m,)
    weights: np.ndarray         # float64, shape (m,)
    labels: tuple[str, ...]
    adj_indptr: np.ndarray      # int64, shape (n+1,)
    adj_nbr: np.ndarray         # int64, shape (2m,)
    adj_eid: np.ndarray         # int64, shape (2m,)
    label_to_id: dict[str, int] = field(repr=False)

    @property
    def n_edges(self) -> int:
        return self.edge_u.size

    def degree(self, v: int) -> int:
        return int(self.adj_indptr[v + 1] - self.adj_indptr[v])

    def neighbors(self, v: int) -> np.ndarray:
        """Neighbor ids of ``v``, sorted ascending."""
        return self.adj_nbr[self.adj_indptr[v]:self.adj_indptr[v + 1]]

    def incident_edges(self, v: int) -> np.ndarray:
        """Edge ids incident to ``v``, aligned with :meth:`neighbors`."""
        return self.adj_eid[self.adj_indptr[v]:self.adj_indptr[v + 1]]

    def endpoints(self, eid: int) -> tuple[int, int]:
        return int(self.edge_u[eid]), int(self.edge_v[eid])


def from_edges(
    n_vertices: int,
    edges: Iterable[tuple[int, int, float]],
    labels: Iterable[str] | None = None,
) -> Graph:
    """Build and validate a :class:`Graph` from integer edge tuples.

    Parameters
    ----------
    n_vertices : int
        Number of vertices; edge endpoints must lie in ``[0, n_vertices)``.
    edges : iterable of (u, v, w)
        Undirected edges; each unordered pair may appear once, weights must be
        strictly positive and finite.
    labels : iterable of str, optional
        External labels per vertex id; defaults to ``str(id)``.
    """
    edges = list(edges)
    m = len(edges)
    eu = np.empty(m, dtype=np.int64)
    ev = np.empty(m, dtype=np.int64)
    w = np.empty(m, dtype=np.float64)
    seen: set[tuple[int, int]] = set()
    if labels is None:
        labels_t = tuple(str(i) for i in range(n_vertices))
    else:
        labels_t = tuple(labels)
        if len(labels_t) != n_vertices:
            raise ValueError("labels length must equal n_vertices")
    for i, (u, v, wt) in enumerate(edges):
        if not (0 <= u < n_vertices and 0 <= v < n_vertices):
            raise ValueError(f"edge ({u}, {v}) out of vertex range")
        if u == v:
            raise SelfLoop(labels_t[u])
        key = (u, v) if u < v else (v, u)
        if key in seen:
            raise DuplicateEdge(labels_t[key[0]], labels_t[key[1]])
        seen.add(key)
        wt = float(wt)
        if not np.isfinite(wt) or wt <= 0.0:
            raise InvalidWeight(f"edge ({labels_t[u]}, {labels_t[v]}) has weight {wt}")
        eu[i], ev[i], w[i] = u, v, wt

    # CSR adjacency, neighbor-sorted within each vertex.
    deg = np.zeros(n_vertices, dtype=np.int64)
    for i in range(m):
        deg[eu[i]] += 1
        deg[ev[i]] += 1
    indptr = np.zeros(n_vertices + 1, dtype=np.int64)
    np.cumsum(deg, out=indptr[1:])
    nbr = np.empty(2 * m, dtype=np.int64)
    eid = np.empty(2 * m, dtype=np.int64)
    cursor = indptr[:-1].copy()
    for i in range(m):
        for a, b in ((eu[i], ev[i]), (ev[i], eu[i])):
            nbr[cursor[a]] = b
            eid[cursor[a]] = i
            cursor[a] += 1
    for v in range(n_vertices):
        lo, hi = indptr[v], indptr[v + 1]
        order = np.argsort(nbr[lo:hi], kind="stable")
        nbr[lo:hi] = nbr[lo:hi][order]
        eid[lo:hi] = eid[lo:hi][order]

    lookup = {lab: i for i, lab in enumerate(labels_t)}
    if len(lookup) != n_vertices:
        raise ValueError("vertex labels must be unique")
    return Graph(
        n_vertices=n_vertices,
        edge_u=_frozen(eu),
        edge_v=_frozen(ev),
        weights=_frozen(w),
        labels=labels_t,
        adj_indptr=_frozen(indptr),
        adj_nbr=_frozen(nbr),
        adj_eid=_frozen(eid),
        label_to_id=lookup,
    )


def load_edge_list(source: TextIO | str) -> Graph:
    """Parse a whitespace-separated ``u v [w]`` edge list into a Graph.

    Lines starting with ``#`` (after stripping) and blank lines are ignored.
    A missing weight defaults to 1.0. Vertex labels are arbitrary strings,
    mapped to dense ids in first-appearance order.
    """
    if isinstance(source, str):
        lines = source.splitlines()
    else:
        lines = source.read().splitlines()
    labels: list[str] = []
    lookup: dict[str, int] = {}

    def vid(label: str) -> int:
        i = lookup.get(label)
        if i is None:
            i = len(labels)
            lookup[label] = i
            labels.append(label)
        return i

    edges: list[tuple[int, int, float]] = []
    seen: set[tuple[int, int]] = set()
    for line_no, raw in enumerate(lines, start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if len(parts) not in (2, 3):
            raise ParseError(line_no, f"expected 'u v [w]', got {len(parts)} fields")
        lu, lv = parts[0], parts[1]
        if lu == lv:
            raise SelfLoop(lu)
        if len(parts) == 3:
            try:
                wt = float(parts[2])
            except ValueError:
                raise ParseError(line_no, f"bad weight {parts[2]!r}") from None
        else:
            wt = 1.0
        if not np.isfinite(wt) or wt <= 0.0:
            raise InvalidWeight(f"line {line_no}: weight {wt} is not strictly positive")
        u, v = vid(lu), vid(lv)
        key = (u, v) if u < v else (v, u)
        if key in seen:
            raise DuplicateEdge(lu, lv)
        seen.add(key)
        edges.append((u, v, wt))
    return from_edges(len(labels), edges, labels)


def save_edge_list(g: Graph, sink: TextIO) -> None:
    """Write the canonical edge-list form: tab-separated, original labels,
    edges in edge-id order, weights with 17 significant digits."""
    for i in range(g.n_edges):
        u, v = g.labels[g.edge_u[i]], g.labels[g.edge_v[i]]
        sink.write(f"{u}\t{v}\t{g.weights[i]:.17g}\n")


def dumps_edge_list(g: Graph) -> str:
    import io

    buf = io.StringIO()
    save_edge_list(g, buf)
    return buf.getvalue()


def validate_connected(g: Graph) -> bool:
    """True iff the graph has a single connected component (BFS)."""
    n = g.n_vertices
    if n <= 1:
        return True
    seen = np.zeros(n, dtype=bool)
    seen[0] = True
    queue = deque([0])
    count = 1
    while queue:
        v = queue.popleft()
        for u in g.neighbors(v):
            if not seen[u]:
                seen[u] = True
                count += 1
                queue.append(u)
    return count == n


@dataclass
class DistanceState:
    """Current per-edge distance vector; the only mutable flow artifact.

    ``clamp_events`` counts entries forced up to :data:`EPS_FLOOR` when the
    state was produced (0 for states built directly from weights).
    """

    d: np.ndarray
    clamp_events: int = 0

    def copy(self) -> "DistanceState":
        return DistanceState(self.d.copy(), self.clamp_events)

    @property
    def mean(self) -> float:
        return float(self.d.mean())


def state_from_weights(g: Graph) -> DistanceState:
    """Distance state equal to the original edge weights."""
    return DistanceState(g.weights.astype(np.float64).copy())


def scale_distances(s: DistanceState, beta: float) -> DistanceState:
    """Multiply every entry by ``beta`` (> 0). Curvature is invariant under
    this rescaling, which the scale-freeness tests exercise."""
    if not np.isfinite(beta) or beta <= 0.0:
        raise InvalidScale(f"scale factor must be > 0, got {beta}")
    return DistanceState(s.d * beta, s.clamp_events)


def rescale(d_raw: np.ndarray) -> DistanceState:
    """Normalize a raw per-edge vector to mean distance exactly 1, then clamp
    entries at :data:`EPS_FLOOR` (counted).

    Raises :class:`DegenerateState` if the vector sums to zero.
    """
    d_raw = np.asarray(d_raw, dtype=np.float64)
    total = float(d_raw.sum())
    if not np.isfinite(total) or total <= 0.0:
        raise DegenerateState("distance vector sums to zero")
    d = d_raw * (d_raw.size / total)
    below = d < EPS_FLOOR
    clamps = int(below.sum())
    if clamps:
        d = np.where(below, EPS_FLOOR, d)
    return DistanceState(d, clamps)
