import io

import numpy as np
import pytest

import ricciflow as rf
from ricciflow.analysis import (
    backbone,
    group_ratio,
    load_group_map,
    save_group_map,
)
from ricciflow.errors import InvalidParams, MissingGroup


def two_triangles_with_bridge():
    """Two triangles (intra distance 0.5 each) joined by one 2.0 bridge."""
    g = rf.from_edges(
        6,
        [(0, 1, 1.0), (1, 2, 1.0), (0, 2, 1.0),
         (3, 4, 1.0), (4, 5, 1.0), (3, 5, 1.0),
         (0, 3, 1.0)],
    )
    d = np.array([0.5] * 3 + [0.5] * 3 + [2.0])
    groups = ["a", "a", "a", "b", "b", "b"]
    return g, rf.DistanceState(d), groups


def test_backbone_thresholds():
    g = rf.from_edges(4, [(0, 1, 1.0), (1, 2, 1.0), (2, 3, 1.0)])
    s = rf.DistanceState(np.array([0.5, 1.0, 1.5]))
    assert backbone(g, s, 0.0) == {0, 1, 2}
    assert backbone(g, s, 10.0) == set()
    assert backbone(g, s, 1.0) == {2}  # strict inequality
    with pytest.raises(InvalidParams):
        backbone(g, s, -0.1)


def test_backbone_monotone(rng):
    g = rf.generators.erdos_renyi(40, 0.2, seed=1)
    s = rf.DistanceState(rng.uniform(0.0, 2.0, g.n_edges) + 1e-6)
    thresholds = sorted(rng.uniform(0.0, 2.0, 10))
    sets = [backbone(g, s, t) for t in thresholds]
    for earlier, later in zip(sets, sets[1:]):
        assert later <= earlier


def test_group_ratio_fixture():
    g, s, groups = two_triangles_with_bridge()
    rep = group_ratio(g, s, groups)
    assert rep.intra["a"] == (0.5, 3)
    assert rep.intra["b"] == (0.5, 3)
    assert rep.inter[("a", "b")] == (2.0, 1)
    assert rep.ratio["a"] == pytest.approx(0.25)
    assert rep.ratio["b"] == pytest.approx(0.25)


def test_group_ratio_single_group():
    g, s, _ = two_triangles_with_bridge()
    rep = group_ratio(g, s, ["only"] * 6)
    assert sum(c for _, c in rep.intra.values()) == g.n_edges
    assert rep.inter == {}
    assert rep.ratio["only"] is None


def test_group_ratio_all_distinct():
    g, s, _ = two_triangles_with_bridge()
    rep = group_ratio(g, s, [str(v) for v in range(6)])
    assert rep.intra == {}
    assert all(r is None for r in rep.ratio.values())
    assert sum(c for _, c in rep.inter.values()) == g.n_edges


def test_group_ratio_partition(rng):
    g = rf.generators.erdos_renyi(50, 0.15, seed=3)
    s = rf.DistanceState(rng.uniform(0.5, 2.0, g.n_edges))
    groups = [str(int(x)) for x in rng.integers(0, 4, g.n_vertices)]
    rep = group_ratio(g, s, groups)
    intra_edges = sum(c for _, c in rep.intra.values())
    inter_edges = sum(c for _, c in rep.inter.values())
    assert intra_edges + inter_edges == g.n_edges


def test_group_ratio_relabel_invariant(rng):
    g = rf.generators.erdos_renyi(30, 0.2, seed=5)
    s = rf.DistanceState(rng.uniform(0.5, 2.0, g.n_edges))
    groups = [str(int(x)) for x in rng.integers(0, 3, g.n_vertices)]
    rename = {"0": "red", "1": "green", "2": "blue"}
    rep1 = group_ratio(g, s, groups)
    rep2 = group_ratio(g, s, [rename[x] for x in groups])
    for old, new in rename.items():
        assert rep1.ratio.get(old) == rep2.ratio.get(new)


def test_group_ratio_missing_vertex():
    g, s, groups = two_triangles_with_bridge()
    with pytest.raises(MissingGroup):
        group_ratio(g, s, groups[:-1] + [""])
    with pytest.raises(InvalidParams):
        group_ratio(g, s, groups[:-1])


def test_group_map_round_trip():
    g, _, groups = two_triangles_with_bridge()
    buf = io.StringIO()
    save_group_map(groups, g, buf)
    loaded = load_group_map(buf.getvalue(), g)
    assert loaded == groups


def test_group_map_missing_raises():
    g, _, _ = two_triangles_with_bridge()
    with pytest.raises(MissingGroup):
        load_group_map("node,group\n0,a\n1,a\n", g)
