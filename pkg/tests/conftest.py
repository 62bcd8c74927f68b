"""Shared graph builders and independent oracles for the test suite."""

import numpy as np
import pytest

import ricciflow as rf


def complete_graph(n: int, weight: float = 1.0) -> rf.Graph:
    return rf.from_edges(
        n, [(i, j, weight) for i in range(n) for j in range(i + 1, n)]
    )


def path_graph(n: int, weight: float = 1.0) -> rf.Graph:
    return rf.from_edges(n, [(i, i + 1, weight) for i in range(n - 1)])


def two_star(m: int) -> rf.Graph:
    """Two stars with m branches each, centers 0 and 1 joined by edge 0."""
    edges = [(0, 1, 1.0)]
    nid = 2
    for _ in range(m):
        edges.append((0, nid, 1.0))
        nid += 1
    for _ in range(m):
        edges.append((1, nid, 1.0))
        nid += 1
    return rf.from_edges(nid, edges)


def matched_two_star(m: int) -> rf.Graph:
    """Two joined stars whose branches are also pairwise matched."""
    edges = [(0, 1, 1.0)]
    for i in range(m):
        a, b = 2 + i, 2 + m + i
        edges.append((0, a, 1.0))
        edges.append((1, b, 1.0))
        edges.append((a, b, 1.0))
    return rf.from_edges(2 + 2 * m, edges)


def random_connected(n: int, p: float, seed: int) -> rf.Graph:
    return rf.generators.largest_component(rf.generators.erdos_renyi(n, p, seed))


def floyd_warshall(g: rf.Graph, s: rf.DistanceState) -> np.ndarray:
    """All-pairs shortest paths by an independent O(n^3) recurrence."""
    n = g.n_vertices
    dist = np.full((n, n), np.inf)
    np.fill_diagonal(dist, 0.0)
    for e in range(g.n_edges):
        u, v = g.endpoints(e)
        d = float(s.d[e])
        dist[u, v] = min(dist[u, v], d)
        dist[v, u] = min(dist[v, u], d)
    for k in range(n):
        dist = np.minimum(dist, dist[:, k][:, None] + dist[k][None, :])
    return dist


def metric_state(g: rf.Graph, rng: np.random.Generator) -> rf.DistanceState:
    """Random distances in [1, 2): every triangle satisfies the triangle
    inequality because 2 <= 1 + 1."""
    return rf.DistanceState(rng.uniform(1.0, 2.0, g.n_edges))


@pytest.fixture
def rng():
    return np.random.default_rng(20240811)
