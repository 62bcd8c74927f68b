"""Command-line entry point binding the library into reproducible pipelines.

Every run writes its outputs plus a manifest sidecar (parameters, seed,
inputs, outputs, version, wall time); re-running with the manifest's
parameters reproduces the data outputs byte for byte. Exit codes: 0 success,
1 domain error, 2 I/O error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from pathlib import Path

import numpy as np

from . import __version__, analysis, bench, flow, generators
from .curvature import CurvatureConfig, all_curvatures
from .errors import InvalidParams, ParseError, RicciError
from .graph import DistanceState, Graph, load_edge_list, save_edge_list

ENV_THREADS = "RICCI_THREADS"


def _threads(args) -> int | None:
    if getattr(args, "threads", None) is not None:
        return args.threads
    env = os.environ.get(ENV_THREADS)
    if env:
        try:
            return int(env)
        except ValueError:
            raise InvalidParams(f"{ENV_THREADS}={env!r} is not an integer") from None
    return None


def _load_graph(path: str) -> Graph:
    with open(path, "r", encoding="utf-8") as f:
        return load_edge_list(f)


def _fmt(x: float) -> str:
    return repr(float(x))


def _write_curvature_csv(path: Path, g: Graph, d: np.ndarray, kappa: np.ndarray):
    with open(path, "w", encoding="utf-8", newline="") as f:
        f.write("edge_id,u,v,distance,kappa\n")
        for e in range(g.n_edges):
            u, v = g.endpoints(e)
            f.write(
                f"{e},{g.labels[u]},{g.labels[v]},{_fmt(d[e])},{_fmt(kappa[e])}\n"
            )


def load_state_csv(path: str, g: Graph) -> DistanceState:
    """Read a distances CSV produced by the curvature/flow subcommands."""
    d = np.full(g.n_edges, np.nan)
    with open(path, "r", encoding="utf-8") as f:
        for line_no, raw in enumerate(f.read().splitlines(), start=1):
            line = raw.strip()
            if not line or line.startswith("edge_id,"):
                continue
            parts = line.split(",")
            if len(parts) != 5:
                raise ParseError(line_no, f"expected 5 fields, got {len(parts)}")
            try:
                eid = int(parts[0])
                dist = float(parts[3])
            except ValueError:
                raise ParseError(line_no, f"bad edge row {line!r}") from None
            if not (0 <= eid < g.n_edges):
                raise ParseError(line_no, f"edge id {eid} out of range")
            d[eid] = dist
    if np.isnan(d).any():
        missing = int(np.flatnonzero(np.isnan(d))[0])
        raise InvalidParams(f"state file misses edge {missing}")
    return DistanceState(d)


def _write_manifest(path: Path, subcommand: str, params: dict, inputs, outputs,
                    wall_seconds: float):
    manifest = {
        "subcommand": subcommand,
        "parameters": params,
        "seed": params.get("seed"),
        "inputs": [str(p) for p in inputs],
        "outputs": [str(p) for p in outputs],
        "version": __version__,
        "wall_seconds": wall_seconds,
    }
    with open(path, "w", encoding="utf-8") as f:
        json.dump(manifest, f, indent=2, sort_keys=True)
        f.write("\n")


def _json_dump(path: Path, payload: dict):
    with open(path, "w", encoding="utf-8") as f:
        json.dump(payload, f, indent=2, sort_keys=True)
        f.write("\n")


def _curvature_config(args) -> CurvatureConfig:
    slope = args.slope_check_alpha
    if slope is not None and slope <= 0:
        slope = None
    return CurvatureConfig(
        alpha0=args.alpha0,
        weight_mode=args.weight_mode,
        slope_check_alpha=slope,
        worker_count=_threads(args),
    )


def cmd_generate(args) -> list[Path]:
    t0 = time.perf_counter()
    params: dict = {"seed": args.seed, "family": args.family}
    if args.family == "regular":
        _require(args, "n", "k")
        params.update(n=args.n, k=args.k)
        spec_params = {"n": args.n, "k": args.k}
    elif args.family == "erdos-renyi":
        _require(args, "n", "p")
        params.update(n=args.n, p=args.p)
        spec_params = {"n": args.n, "p": args.p}
    elif args.family == "geometric-plane":
        _require(args, "n", "radius", "box_side")
        params.update(n=args.n, radius=args.radius, box_side=args.box_side)
        spec_params = {"n": args.n, "radius": args.radius, "box_side": args.box_side}
    elif args.family == "geometric-cylinder-knn":
        _require(args, "n", "k", "radius", "height")
        params.update(n=args.n, k=args.k, radius=args.radius, height=args.height)
        spec_params = {
            "n": args.n, "k": args.k, "radius": args.radius, "height": args.height,
        }
    elif args.family == "sbm":
        _require(args, "sizes", "p_in", "p_out")
        sizes = _parse_sizes(args.sizes)
        params.update(sizes=sizes, p_in=args.p_in, p_out=args.p_out)
        spec_params = {"sizes": sizes, "p_in": args.p_in, "p_out": args.p_out}
    else:
        raise InvalidParams(f"unknown family {args.family!r}")

    g, groups = generators.generate(
        generators.GeneratorSpec(args.family, spec_params, args.seed)
    )
    out = Path(args.out)
    outputs = [out]
    with open(out, "w", encoding="utf-8", newline="") as f:
        save_edge_list(g, f)
    if groups is not None:
        gpath = out.with_suffix(out.suffix + ".groups.csv")
        with open(gpath, "w", encoding="utf-8", newline="") as f:
            analysis.save_group_map(groups, g, f)
        outputs.append(gpath)
    _write_manifest(
        out.with_suffix(out.suffix + ".manifest.json"),
        "generate", params, [], outputs, time.perf_counter() - t0,
    )
    return outputs


def _require(args, *names):
    for name in names:
        if getattr(args, name, None) is None:
            raise InvalidParams(f"--{name.replace('_', '-')} is required for "
                                f"family {args.family!r}")


def _parse_sizes(text: str) -> list[int]:
    try:
        sizes = [int(x) for x in text.split(",") if x != ""]
    except ValueError:
        raise InvalidParams(f"bad --sizes {text!r}") from None
    if not sizes:
        raise InvalidParams("--sizes must name at least one block")
    return sizes


def cmd_curvature(args) -> list[Path]:
    t0 = time.perf_counter()
    g = _load_graph(args.graph)
    cfg = _curvature_config(args)
    s = DistanceState(g.weights.copy())
    report = all_curvatures(g, s, cfg)
    prefix = Path(args.out)
    csv_path = Path(str(prefix) + ".curvature.csv")
    json_path = Path(str(prefix) + ".summary.json")
    _write_curvature_csv(csv_path, g, s.d, report.kappa)
    _json_dump(json_path, {
        "alpha0": report.alpha_used,
        "weight_mode": report.weight_mode,
        "mean": report.mean,
        "std": report.std,
        "clamp_events": report.clamp_events,
    })
    _write_manifest(
        Path(str(prefix) + ".manifest.json"), "curvature",
        {
            "graph": args.graph, "alpha0": args.alpha0,
            "slope_check_alpha": args.slope_check_alpha,
            "weight_mode": args.weight_mode, "threads": _threads(args),
        },
        [args.graph], [csv_path, json_path], time.perf_counter() - t0,
    )
    return [csv_path, json_path]


def cmd_flow(args) -> list[Path]:
    t0 = time.perf_counter()
    g = _load_graph(args.graph)
    cfg = flow.FlowConfig(
        max_iterations=args.max_iters,
        std_tolerance=args.tol,
        curvature=_curvature_config(args),
    )
    state, trace, converged = flow.run(g, flow.initial_state(g), cfg)
    prefix = Path(args.out)
    dist_path = Path(str(prefix) + ".distances.csv")
    trace_path = Path(str(prefix) + ".trace.csv")
    json_path = Path(str(prefix) + ".summary.json")
    _write_curvature_csv(dist_path, g, state.d, trace.final_kappa)
    with open(trace_path, "w", encoding="utf-8", newline="") as f:
        f.write("iteration,mean_kappa,std_kappa,std_distance,linf_step,clamp_events\n")
        for r in trace.records:
            f.write(
                f"{r.iteration},{_fmt(r.mean_kappa)},{_fmt(r.std_kappa)},"
                f"{_fmt(r.std_distance)},{_fmt(r.linf_step)},{r.clamp_events}\n"
            )
    last = trace.records[-1]
    _json_dump(json_path, {
        "alpha0": cfg.curvature.alpha0,
        "weight_mode": cfg.curvature.weight_mode,
        "mean": last.mean_kappa,
        "std": last.std_kappa,
        "clamp_events": last.clamp_events,
        "converged": converged,
        "iterations": len(trace.records),
    })
    _write_manifest(
        Path(str(prefix) + ".manifest.json"), "flow",
        {
            "graph": args.graph, "max_iters": args.max_iters, "tol": args.tol,
            "alpha0": args.alpha0, "slope_check_alpha": args.slope_check_alpha,
            "weight_mode": args.weight_mode, "threads": _threads(args),
        },
        [args.graph], [dist_path, trace_path, json_path],
        time.perf_counter() - t0,
    )
    return [dist_path, trace_path, json_path]


def cmd_bench(args) -> list[Path]:
    t0 = time.perf_counter()
    g = _load_graph(args.graph)
    s = DistanceState(g.weights.copy())
    if args.methods == "all":
        methods = list(bench.METHODS)
    else:
        methods = [m.strip() for m in args.methods.split(",") if m.strip()]
    name = args.graph_name or Path(args.graph).stem
    results = [
        bench.bench_curvature_pass(
            g, s, method, worker_count=_threads(args),
            graph_name=name, timed_runs=args.runs,
        )
        for method in methods
    ]
    if len(results) > 1:
        bench.assert_methods_agree(results)
    out = Path(args.out)
    with open(out, "w", encoding="utf-8", newline="") as f:
        f.write(bench.CSV_HEADER + "\n")
        for r in results:
            f.write(r.csv_row() + "\n")
    _write_manifest(
        out.with_suffix(out.suffix + ".manifest.json"), "bench",
        {
            "graph": args.graph, "methods": methods, "threads": _threads(args),
            "runs": args.runs,
        },
        [args.graph], [out], time.perf_counter() - t0,
    )
    return [out]


def cmd_analyze_backbone(args) -> list[Path]:
    t0 = time.perf_counter()
    g = _load_graph(args.graph)
    s = load_state_csv(args.state, g)
    keep = sorted(analysis.backbone(g, s, args.threshold))
    out = Path(args.out)
    with open(out, "w", encoding="utf-8", newline="") as f:
        for e in keep:
            u, v = g.endpoints(e)
            f.write(f"{g.labels[u]}\t{g.labels[v]}\t{s.d[e]:.17g}\n")
    _write_manifest(
        out.with_suffix(out.suffix + ".manifest.json"), "analyze-backbone",
        {"graph": args.graph, "state": args.state, "threshold": args.threshold},
        [args.graph, args.state], [out], time.perf_counter() - t0,
    )
    return [out]


def cmd_analyze_groups(args) -> list[Path]:
    t0 = time.perf_counter()
    g = _load_graph(args.graph)
    s = load_state_csv(args.state, g)
    with open(args.groups, "r", encoding="utf-8") as f:
        groups = analysis.load_group_map(f, g)
    report = analysis.group_ratio(g, s, groups)
    out = Path(args.out)
    payload = report.to_json_dict()
    payload["edges_total"] = g.n_edges
    _json_dump(out, payload)
    _write_manifest(
        out.with_suffix(out.suffix + ".manifest.json"), "analyze-groups",
        {"graph": args.graph, "state": args.state, "groups": args.groups},
        [args.graph, args.state, args.groups], [out], time.perf_counter() - t0,
    )
    return [out]


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ricciflow",
        description="Edge curvature and curvature-flow distance embeddings "
                    "for weighted graphs.",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="subcommand", required=True)

    p = sub.add_parser("generate", help="emit a synthetic graph as an edge list")
    p.add_argument("--family", required=True,
                   choices=["regular", "erdos-renyi", "geometric-plane",
                            "geometric-cylinder-knn", "sbm"])
    p.add_argument("--n", type=int)
    p.add_argument("--k", type=int)
    p.add_argument("--p", type=float)
    p.add_argument("--radius", type=float)
    p.add_argument("--box-side", dest="box_side", type=float)
    p.add_argument("--height", type=float)
    p.add_argument("--sizes", type=str, help="comma-separated block sizes (sbm)")
    p.add_argument("--p-in", dest="p_in", type=float)
    p.add_argument("--p-out", dest="p_out", type=float)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_generate)

    def _curv_flags(p):
        p.add_argument("--alpha0", type=float, default=0.99)
        p.add_argument("--slope-check-alpha", dest="slope_check_alpha",
                       type=float, default=0.97,
                       help="second evaluation point; <= 0 disables the check")
        p.add_argument("--weight-mode", dest="weight_mode", default="fixed-w",
                       choices=["fixed-w", "evolving-d"])
        p.add_argument("--threads", type=int, default=None,
                       help=f"worker threads (default: ${ENV_THREADS} or all cores)")

    p = sub.add_parser("curvature", help="per-edge curvature of a graph")
    p.add_argument("--graph", required=True)
    _curv_flags(p)
    p.add_argument("--out", required=True, help="output path prefix")
    p.set_defaults(func=cmd_curvature)

    p = sub.add_parser("flow", help="iterate the curvature flow to a "
                                    "constant-curvature distance embedding")
    p.add_argument("--graph", required=True)
    p.add_argument("--max-iters", dest="max_iters", type=int, default=100)
    p.add_argument("--tol", type=float, default=0.02,
                   help="stop when the curvature standard deviation drops below")
    _curv_flags(p)
    p.add_argument("--out", required=True, help="output path prefix")
    p.set_defaults(func=cmd_flow)

    p = sub.add_parser("bench", help="compare distance-matrix strategies")
    p.add_argument("--graph", required=True)
    p.add_argument("--methods", default="all",
                   help="'all' or comma-separated subset of: " + ", ".join(bench.METHODS))
    p.add_argument("--graph-name", dest="graph_name", default=None)
    p.add_argument("--runs", type=int, default=3)
    p.add_argument("--threads", type=int, default=None)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("analyze", help="post-flow structural analysis")
    asub = p.add_subparsers(dest="analysis", required=True)
    pb = asub.add_parser("backbone", help="edges with distance above a threshold")
    pb.add_argument("--graph", required=True)
    pb.add_argument("--state", required=True, help="distances CSV from flow/curvature")
    pb.add_argument("--threshold", type=float, required=True)
    pb.add_argument("--out", required=True)
    pb.set_defaults(func=cmd_analyze_backbone)
    pg = asub.add_parser("groups", help="intra/inter-group distance ratios")
    pg.add_argument("--graph", required=True)
    pg.add_argument("--state", required=True)
    pg.add_argument("--groups", required=True, help="node,group CSV")
    pg.add_argument("--out", required=True)
    pg.set_defaults(func=cmd_analyze_groups)

    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        args.func(args)
    except RicciError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
