import json

import pytest

import ricciflow as rf
from ricciflow.cli import main


def run_cli(*argv):
    return main([str(a) for a in argv])


def k10_file(tmp_path):
    path = tmp_path / "k10.edges"
    g = rf.from_edges(10, [(i, j, 1.0) for i in range(10) for j in range(i + 1, 10)])
    with open(path, "w") as f:
        rf.save_edge_list(g, f)
    return path


def test_generate_k4(tmp_path):
    out = tmp_path / "g.edges"
    assert run_cli("generate", "--family", "regular", "--n", 4, "--k", 3,
                   "--seed", 1, "--out", out) == 0
    g = rf.load_edge_list(out.read_text())
    assert g.n_vertices == 4 and g.n_edges == 6
    manifest = json.loads((tmp_path / "g.edges.manifest.json").read_text())
    assert manifest["subcommand"] == "generate"
    assert manifest["seed"] == 1
    assert str(out) in manifest["outputs"]


def test_generate_sbm_sidecar(tmp_path):
    out = tmp_path / "sbm.edges"
    assert run_cli("generate", "--family", "sbm", "--sizes", "50,50,50",
                   "--p-in", 0.1, "--p-out", 0.01, "--seed", 7, "--out", out) == 0
    groups = (tmp_path / "sbm.edges.groups.csv").read_text().splitlines()
    assert groups[0] == "node,group"
    assert len(groups) == 151


def test_generate_invalid_params_exit_1(tmp_path, capsys):
    assert run_cli("generate", "--family", "regular", "--n", 5, "--k", 3,
                   "--seed", 1, "--out", tmp_path / "x.edges") == 1
    assert "error:" in capsys.readouterr().err


def test_curvature_k10(tmp_path):
    graph = k10_file(tmp_path)
    out = tmp_path / "run"
    assert run_cli("curvature", "--graph", graph, "--out", out) == 0
    rows = (tmp_path / "run.curvature.csv").read_text().splitlines()
    assert rows[0] == "edge_id,u,v,distance,kappa"
    assert len(rows) == 46
    for row in rows[1:]:
        kappa = float(row.split(",")[4])
        assert abs(kappa - 10 / 9) < 1e-9
    summary = json.loads((tmp_path / "run.summary.json").read_text())
    assert set(summary) == {"alpha0", "weight_mode", "mean", "std", "clamp_events"}
    assert abs(summary["mean"] - 10 / 9) < 1e-9


def test_curvature_thread_determinism(tmp_path):
    graph = tmp_path / "er.edges"
    g = rf.generators.largest_component(rf.generators.erdos_renyi(60, 0.12, seed=5))
    with open(graph, "w") as f:
        rf.save_edge_list(g, f)
    assert run_cli("curvature", "--graph", graph, "--threads", 1,
                   "--out", tmp_path / "a") == 0
    assert run_cli("curvature", "--graph", graph, "--threads", 8,
                   "--out", tmp_path / "b") == 0
    assert (tmp_path / "a.curvature.csv").read_bytes() == \
           (tmp_path / "b.curvature.csv").read_bytes()


def test_curvature_disconnected_exit_1(tmp_path, capsys):
    graph = tmp_path / "dis.edges"
    graph.write_text("a\tb\t1\nc\td\t1\n")
    assert run_cli("curvature", "--graph", graph, "--out", tmp_path / "x") == 1
    assert "connected" in capsys.readouterr().err


def test_missing_file_exit_2(tmp_path, capsys):
    assert run_cli("curvature", "--graph", tmp_path / "absent.edges",
                   "--out", tmp_path / "x") == 2
    assert "I/O error" in capsys.readouterr().err


def test_flow_k10(tmp_path):
    graph = k10_file(tmp_path)
    out = tmp_path / "flow"
    assert run_cli("flow", "--graph", graph, "--out", out) == 0
    summary = json.loads((tmp_path / "flow.summary.json").read_text())
    assert summary["converged"] is True
    assert summary["iterations"] == 1
    trace = (tmp_path / "flow.trace.csv").read_text().splitlines()
    assert trace[0] == "iteration,mean_kappa,std_kappa,std_distance,linf_step,clamp_events"
    assert len(trace) == 2
    dist_rows = (tmp_path / "flow.distances.csv").read_text().splitlines()
    assert len(dist_rows) == 46
    assert float(dist_rows[1].split(",")[3]) == pytest.approx(1.0, abs=1e-12)


def test_flow_invalid_iters_exit_1(tmp_path):
    graph = k10_file(tmp_path)
    assert run_cli("flow", "--graph", graph, "--max-iters", 0,
                   "--out", tmp_path / "x") == 1


def test_flow_seeded_rerun_identical(tmp_path):
    out1, out2 = tmp_path / "f1.edges", tmp_path / "f2.edges"
    for out in (out1, out2):
        assert run_cli("generate", "--family", "erdos-renyi", "--n", 60,
                       "--p", 0.12, "--seed", 3, "--out", out) == 0
    assert out1.read_bytes() == out2.read_bytes()
    for tag, out in (("r1", out1), ("r2", out2)):
        assert run_cli("flow", "--graph", out, "--max-iters", 5,
                       "--out", tmp_path / tag) == 0
    assert (tmp_path / "r1.distances.csv").read_bytes() == \
           (tmp_path / "r2.distances.csv").read_bytes()
    assert (tmp_path / "r1.trace.csv").read_bytes() == \
           (tmp_path / "r2.trace.csv").read_bytes()


def test_bench_csv(tmp_path):
    graph = tmp_path / "small.edges"
    g = rf.generators.largest_component(rf.generators.erdos_renyi(40, 0.15, seed=2))
    with open(graph, "w") as f:
        rf.save_edge_list(g, f)
    out = tmp_path / "bench.csv"
    assert run_cli("bench", "--graph", graph, "--methods", "all", "--runs", 1,
                   "--threads", 2, "--out", out) == 0
    rows = out.read_text().splitlines()
    assert rows[0] == ("method,arrangement,graph,n,m,shortest_paths,"
                       "wall_seconds,settled_vertices")
    assert len(rows) == 4
    assert rows[1].startswith("sssd,edge,small,")
    assert rows[2].startswith("ssmd,edge,small,")
    assert rows[3].startswith("ssmd,vertex,small,")


def test_bench_unknown_method_exit_1(tmp_path):
    graph = k10_file(tmp_path)
    assert run_cli("bench", "--graph", graph, "--methods", "warp",
                   "--out", tmp_path / "b.csv") == 1


def test_analyze_backbone_and_groups(tmp_path):
    graph = tmp_path / "two.edges"
    graph.write_text(
        "a\tb\t1\nb\tc\t1\na\tc\t1\nd\te\t1\ne\tf\t1\nd\tf\t1\na\td\t1\n"
    )
    g = rf.load_edge_list(graph.read_text())
    state = tmp_path / "state.csv"
    d = [0.5, 0.5, 0.5, 0.5, 0.5, 0.5, 2.0]
    with open(state, "w") as f:
        f.write("edge_id,u,v,distance,kappa\n")
        for e in range(7):
            u, v = g.endpoints(e)
            f.write(f"{e},{g.labels[u]},{g.labels[v]},{d[e]!r},0.0\n")
    out = tmp_path / "backbone.edges"
    assert run_cli("analyze", "backbone", "--graph", graph, "--state", state,
                   "--threshold", 1.0, "--out", out) == 0
    assert out.read_text() == "a\td\t2\n"

    groups = tmp_path / "groups.csv"
    groups.write_text("node,group\na,L\nb,L\nc,L\nd,R\ne,R\nf,R\n")
    gout = tmp_path / "groups.json"
    assert run_cli("analyze", "groups", "--graph", graph, "--state", state,
                   "--groups", groups, "--out", gout) == 0
    payload = json.loads(gout.read_text())
    assert payload["ratio"]["L"] == pytest.approx(0.25)
    assert payload["ratio"]["R"] == pytest.approx(0.25)
    assert payload["edges_total"] == 7


def test_ricci_threads_env_fallback(tmp_path, monkeypatch):
    graph = k10_file(tmp_path)
    monkeypatch.setenv("RICCI_THREADS", "2")
    assert run_cli("curvature", "--graph", graph, "--out", tmp_path / "env") == 0
    manifest = json.loads((tmp_path / "env.manifest.json").read_text())
    assert manifest["parameters"]["threads"] == 2
    monkeypatch.setenv("RICCI_THREADS", "zebra")
    assert run_cli("curvature", "--graph", graph, "--out", tmp_path / "bad") == 1


def test_manifest_sidecars_everywhere(tmp_path):
    graph = k10_file(tmp_path)
    assert run_cli("curvature", "--graph", graph, "--out", tmp_path / "c") == 0
    manifest = json.loads((tmp_path / "c.manifest.json").read_text())
    assert manifest["version"] == rf.__version__
    assert manifest["subcommand"] == "curvature"
    assert len(manifest["outputs"]) == 2
    assert "wall_seconds" in manifest
