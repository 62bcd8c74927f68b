import numpy as np
import pytest

import ricciflow as rf
from conftest import random_connected
from ricciflow.bench import METHODS, assert_methods_agree, bench_curvature_pass
from ricciflow.errors import InvalidMethod


@pytest.fixture(scope="module")
def results():
    g = random_connected(120, 0.06, seed=13)
    s = rf.state_from_weights(g)
    return [
        bench_curvature_pass(g, s, m, worker_count=2, graph_name="er120",
                             timed_runs=1)
        for m in METHODS
    ]


def test_methods_identical_kappa(results):
    assert_methods_agree(results, tol=1e-9)
    a, b, c = results
    assert np.array_equal(a.kappa, c.kappa)  # bit-identical, same ground distances


def test_counter_ordering(results):
    a, b, c = results
    assert c.settled_vertices <= b.settled_vertices <= a.settled_vertices
    assert c.shortest_paths <= b.shortest_paths == a.shortest_paths


def test_arrangement_shares_sources(results):
    # vertex 0 of this graph has degree >= 2, so batching strictly reduces
    # the number of matrix cells
    a, b, c = results
    assert c.shortest_paths < b.shortest_paths


def test_csv_row_shape(results):
    row = results[0].csv_row()
    fields = row.split(",")
    assert len(fields) == 8
    assert fields[0] == "sssd" and fields[1] == "edge"
    assert int(fields[3]) == results[0].n and int(fields[4]) == results[0].m


def test_invalid_method():
    g = random_connected(10, 0.4, seed=1)
    with pytest.raises(InvalidMethod):
        bench_curvature_pass(g, rf.state_from_weights(g), "dijkstra", timed_runs=1)
