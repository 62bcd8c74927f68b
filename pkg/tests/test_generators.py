import numpy as np
import pytest

import ricciflow as rf
from ricciflow.errors import InvalidParams
from ricciflow.generators import (
    GeneratorSpec,
    cylinder_knn,
    erdos_renyi,
    generate,
    geometric_plane,
    largest_component,
    random_regular,
    sbm,
)


def degrees(g):
    return np.diff(g.adj_indptr)


def test_regular_k4_forced():
    g = random_regular(4, 3, seed=1)
    assert g.n_edges == 6  # the only simple 3-regular graph on 4 vertices
    assert np.all(degrees(g) == 3)


def test_regular_deterministic_and_valid():
    a = random_regular(100, 3, seed=9)
    b = random_regular(100, 3, seed=9)
    assert a.edge_u.tolist() == b.edge_u.tolist()
    assert a.edge_v.tolist() == b.edge_v.tolist()
    assert np.all(degrees(a) == 3)
    c = random_regular(100, 3, seed=10)
    assert c.edge_u.tolist() != a.edge_u.tolist() or c.edge_v.tolist() != a.edge_v.tolist()


def test_regular_invalid_params():
    with pytest.raises(InvalidParams):
        random_regular(5, 3, seed=0)  # n*k odd
    with pytest.raises(InvalidParams):
        random_regular(4, 4, seed=0)  # k >= n


def test_erdos_renyi_extremes():
    assert erdos_renyi(6, 1.0, seed=0).n_edges == 15
    assert erdos_renyi(6, 0.0, seed=0).n_edges == 0
    with pytest.raises(InvalidParams):
        erdos_renyi(6, 1.5, seed=0)


def test_erdos_renyi_giant_component():
    n = 1000
    p = 2 * np.log(n) / n
    for seed in range(10):
        g = largest_component(erdos_renyi(n, p, seed=seed))
        assert g.n_vertices >= 0.99 * n


def test_geometric_boundary_inclusive():
    # two points exactly one radius apart must be joined: check against a
    # brute-force pairwise rule on shared coordinates
    g = geometric_plane(50, radius=0.25, box_side=1.0, seed=4)
    rng = np.random.default_rng(np.random.SeedSequence(4))
    pts = rng.random((50, 2)) * 1.0
    expect = {
        (i, j)
        for i in range(50)
        for j in range(i + 1, 50)
        if np.hypot(*(pts[i] - pts[j])) <= 0.25
    }
    got = {g.endpoints(e) for e in range(g.n_edges)}
    assert got == expect


def test_geometric_full_radius_complete():
    g = geometric_plane(12, radius=np.sqrt(2.0) * 1.0, box_side=1.0, seed=2)
    assert g.n_edges == 12 * 11 // 2


def test_geometric_connected_at_mean_degree_8():
    n = 500
    radius = np.sqrt(8 / (np.pi * n))  # mean degree ~ 8 in a unit box
    connected = 0
    for seed in range(10):
        g = geometric_plane(n, radius, 1.0, seed=seed)
        comp = largest_component(g)
        connected += comp.n_vertices >= 0.95 * n
    assert connected >= 8


def test_cylinder_knn_degree_and_determinism():
    g = cylinder_knn(200, 5, radius=1.0, height=5.0, seed=3)
    assert np.all(degrees(g) >= 5)
    h = cylinder_knn(200, 5, radius=1.0, height=5.0, seed=3)
    assert g.edge_u.tolist() == h.edge_u.tolist()


def test_cylinder_connected_most_seeds():
    connected = 0
    for seed in range(10):
        g = cylinder_knn(500, 5, radius=1.0, height=3.0, seed=seed)
        connected += largest_component(g).n_vertices == 500
    assert connected >= 8


def test_sbm_shapes_and_metadata():
    g, groups = sbm([50, 50, 50], 0.1, 0.01, seed=7)
    assert g.n_vertices == 150
    assert len(groups) == 150
    assert [groups.count(b) for b in ("0", "1", "2")] == [50, 50, 50]


def test_sbm_disjoint_cliques():
    g, groups = sbm([4, 4], 1.0, 0.0, seed=0)
    assert g.n_edges == 12  # two K_4's
    assert not rf.validate_connected(g)


def test_sbm_matches_er_when_uniform():
    # p_in == p_out collapses to one global probability: compare mean edge
    # counts over seeds
    p = 0.05
    n = 120
    sbm_counts = [sbm([40, 40, 40], p, p, seed=s)[0].n_edges for s in range(30)]
    er_counts = [erdos_renyi(n, p, seed=1000 + s).n_edges for s in range(30)]
    expected = p * n * (n - 1) / 2
    assert abs(np.mean(sbm_counts) - expected) < 0.08 * expected
    assert abs(np.mean(er_counts) - expected) < 0.08 * expected


def test_sbm_invalid():
    with pytest.raises(InvalidParams):
        sbm([10, 10], 0.01, 0.5, seed=0)  # p_out > p_in


def test_largest_component_identity_and_pick():
    g = rf.load_edge_list("a b\nb c")
    lc = largest_component(g)
    assert lc.n_vertices == 3 and lc.n_edges == 2
    g2 = rf.load_edge_list("a b\nb c\nx y")
    lc2 = largest_component(g2)
    assert lc2.n_vertices == 3
    assert lc2.labels == ("a", "b", "c")


def test_largest_component_tie_breaks_to_smallest_id():
    g = rf.load_edge_list("a b\nc d")  # two components of size 2
    lc = largest_component(g)
    assert lc.labels == ("a", "b")


def test_generators_pass_validation():
    for g in (
        random_regular(60, 3, seed=0),
        erdos_renyi(60, 0.1, seed=0),
        geometric_plane(60, 0.3, 1.0, seed=0),
        cylinder_knn(60, 4, 1.0, 2.0, seed=0),
        sbm([20, 20], 0.3, 0.05, seed=0)[0],
    ):
        # from_edges already validated; double-check the core invariants
        assert np.all(g.weights > 0)
        pairs = {tuple(sorted(g.endpoints(e))) for e in range(g.n_edges)}
        assert len(pairs) == g.n_edges
        assert all(u != v for u, v in pairs)


def test_generate_dispatch():
    g, groups = generate(GeneratorSpec("regular", {"n": 10, "k": 3}, seed=2))
    assert groups is None and g.n_vertices == 10
    g2, groups2 = generate(
        GeneratorSpec("sbm", {"sizes": [5, 5], "p_in": 0.9, "p_out": 0.1}, seed=2)
    )
    assert groups2 is not None and len(groups2) == 10
    with pytest.raises(InvalidParams):
        generate(GeneratorSpec("nope", {}, seed=0))
    with pytest.raises(InvalidParams):
        generate(GeneratorSpec("regular", {"n": 10}, seed=0))
