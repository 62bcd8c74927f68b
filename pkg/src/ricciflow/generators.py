"""Seeded synthetic graph families used by the validation suite.

All generators are pure functions of (parameters, seed): randomness comes
from numpy's PCG64 initialized with ``SeedSequence(seed)``, each call owns a
single stream and consumes it in a fixed order (retry loops continue the
same stream), and edges are emitted in sorted (u, v) order so edge ids are
reproducible across platforms. Generated vertices are labeled "0".."n-1".
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field

import numpy as np
from scipy.spatial import cKDTree

from .errors import InvalidParams
from .graph import Graph, from_edges

_PAIRING_ATTEMPTS = 20000


@dataclass(frozen=True)
class GeneratorSpec:
    """Family name, per-family parameters, and the 64-bit seed."""

    family: str
    params: dict = field(default_factory=dict)
    seed: int = 0


def _rng(seed: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence(seed))


def _graph_from_pairs(n: int, pairs) -> Graph:
    edges = sorted((int(u), int(v)) if u < v else (int(v), int(u)) for u, v in pairs)
    return from_edges(n, [(u, v, 1.0) for u, v in edges])


def random_regular(n: int, k: int, seed: int) -> Graph:
    """Simple k-regular graph via the pairing model with restarts on clash.

    Suited to small k (restart probability grows roughly like exp(k^2/4)).
    """
    if n <= 0 or k < 0 or k >= n or (n * k) % 2 != 0:
        raise InvalidParams(
            f"k-regular graph needs 0 <= k < n and n*k even, got n={n}, k={k}"
        )
    if k == 0:
        return from_edges(n, [])
    rng = _rng(seed)
    stubs = np.repeat(np.arange(n, dtype=np.int64), k)
    for _ in range(_PAIRING_ATTEMPTS):
        perm = rng.permutation(stubs)
        us, vs = perm[0::2], perm[1::2]
        if (us == vs).any():
            continue
        pairs = {(min(a, b), max(a, b)) for a, b in zip(us.tolist(), vs.tolist())}
        if len(pairs) == us.size:
            return _graph_from_pairs(n, pairs)
    raise InvalidParams(
        f"no simple {k}-regular pairing found for n={n} after "
        f"{_PAIRING_ATTEMPTS} attempts"
    )


def erdos_renyi(n: int, p: float, seed: int) -> Graph:
    """Each unordered pair is an edge independently with probability p."""
    if n < 0 or not (0.0 <= p <= 1.0):
        raise InvalidParams(f"need n >= 0 and 0 <= p <= 1, got n={n}, p={p}")
    rng = _rng(seed)
    edges = []
    for i in range(n - 1):
        hits = np.flatnonzero(rng.random(n - 1 - i) < p)
        edges.extend((i, i + 1 + int(j), 1.0) for j in hits)
    return from_edges(n, edges)


def geometric_plane(n: int, radius: float, box_side: float, seed: int) -> Graph:
    """n uniform points in a square box, edges between points at Euclidean
    distance <= radius (boundary included)."""
    if n < 0 or radius <= 0 or box_side <= 0:
        raise InvalidParams("need n >= 0, radius > 0, box_side > 0")
    rng = _rng(seed)
    pts = rng.random((n, 2)) * box_side
    pairs = cKDTree(pts).query_pairs(radius, output_type="ndarray")
    return _graph_from_pairs(n, pairs)


def cylinder_knn(n: int, k: int, radius: float, height: float, seed: int) -> Graph:
    """n uniform points on a cylinder surface, each joined to its k nearest
    neighbors by 3-D chordal distance; edges symmetrized by union."""
    if n <= 0 or not (0 < k < n) or radius <= 0 or height <= 0:
        raise InvalidParams("need 0 < k < n, radius > 0, height > 0")
    rng = _rng(seed)
    theta = rng.random(n) * (2.0 * np.pi)
    z = rng.random(n) * height
    pts = np.column_stack((radius * np.cos(theta), radius * np.sin(theta), z))
    _, idx = cKDTree(pts).query(pts, k=k + 1)
    pairs = set()
    for i in range(n):
        for j in idx[i]:
            j = int(j)
            if j != i:
                pairs.add((min(i, j), max(i, j)))
    return _graph_from_pairs(n, pairs)


def sbm(
    block_sizes: tuple[int, ...] | list[int],
    p_in: float,
    p_out: float,
    seed: int,
) -> tuple[Graph, list[str]]:
    """Planted-community random graph: edge probability ``p_in`` inside a
    block, ``p_out`` across blocks.

    Returns the graph and the per-vertex block label ("0", "1", ...) for the
    group-distance analysis.
    """
    sizes = [int(x) for x in block_sizes]
    if not sizes or any(x <= 0 for x in sizes):
        raise InvalidParams("block sizes must be positive")
    if not (0.0 <= p_out <= p_in <= 1.0):
        raise InvalidParams("need 0 <= p_out <= p_in <= 1")
    n = sum(sizes)
    block = np.empty(n, dtype=np.int64)
    start = 0
    for b, size in enumerate(sizes):
        block[start:start + size] = b
        start += size
    rng = _rng(seed)
    edges = []
    for i in range(n - 1):
        probs = np.where(block[i + 1:] == block[i], p_in, p_out)
        hits = np.flatnonzero(rng.random(n - 1 - i) < probs)
        edges.extend((i, i + 1 + int(j), 1.0) for j in hits)
    return from_edges(n, edges), [str(int(b)) for b in block]


def largest_component(g: Graph) -> Graph:
    """Induced subgraph on the largest connected component, vertices
    relabeled densely (original labels preserved). Ties go to the component
    containing the smallest vertex id."""
    n = g.n_vertices
    if n == 0:
        return g
    comp = np.full(n, -1, dtype=np.int64)
    n_comp = 0
    for start in range(n):
        if comp[start] >= 0:
            continue
        comp[start] = n_comp
        queue = deque([start])
        while queue:
            v = queue.popleft()
            for u in g.neighbors(v):
                if comp[u] < 0:
                    comp[u] = n_comp
                    queue.append(u)
        n_comp += 1
    sizes = np.bincount(comp, minlength=n_comp)
    best = int(np.argmax(sizes))  # argmax returns the first (smallest-id) maximum
    keep = np.flatnonzero(comp == best)
    new_id = {int(v): i for i, v in enumerate(keep)}
    edges = [
        (new_id[int(g.edge_u[e])], new_id[int(g.edge_v[e])], float(g.weights[e]))
        for e in range(g.n_edges)
        if int(g.edge_u[e]) in new_id and int(g.edge_v[e]) in new_id
    ]
    labels = [g.labels[int(v)] for v in keep]
    return from_edges(keep.size, edges, labels)


def generate(spec: GeneratorSpec) -> tuple[Graph, list[str] | None]:
    """Dispatch a :class:`GeneratorSpec`; the second element is the group
    assignment for the sbm family and None otherwise."""
    p = dict(spec.params)
    try:
        if spec.family == "regular":
            return random_regular(p["n"], p["k"], spec.seed), None
        if spec.family == "erdos-renyi":
            return erdos_renyi(p["n"], p["p"], spec.seed), None
        if spec.family == "geometric-plane":
            return geometric_plane(p["n"], p["radius"], p["box_side"], spec.seed), None
        if spec.family == "geometric-cylinder-knn":
            return (
                cylinder_knn(p["n"], p["k"], p["radius"], p["height"], spec.seed),
                None,
            )
        if spec.family == "sbm":
            return sbm(p["sizes"], p["p_in"], p["p_out"], spec.seed)
    except KeyError as exc:
        raise InvalidParams(f"missing parameter {exc.args[0]!r} for family "
                            f"{spec.family!r}") from None
    raise InvalidParams(f"unknown family {spec.family!r}")
