"""Post-flow structural analysis: backbone extraction and intra/inter-group
edge-distance ratios.

Groups are arbitrary string labels, one per vertex. A group's "neighboring
groups" are those connected to it by at least one edge, and its inter mean
averages over all its incident inter-group edges; ratios come with counts so
users can judge significance.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence, TextIO

import numpy as np

from .errors import InvalidParams, MissingGroup, ParseError
from .graph import DistanceState, Graph


def backbone(g: Graph, s: DistanceState, threshold: float) -> set[int]:
    """Edge ids whose current distance strictly exceeds ``threshold``.

    After the flow, long edges are the structure-carrying long-range links;
    filtering on them extracts the network's backbone.
    """
    if threshold < 0:
        raise InvalidParams("threshold must be >= 0")
    return {int(e) for e in np.flatnonzero(s.d > threshold)}


@dataclass
class GroupReport:
    """Mean edge distance and edge count inside each group, between each
    connected group pair, and per-group intra/inter ratios (None where a
    group has no intra or no incident inter edges)."""

    intra: dict[str, tuple[float, int]]
    inter: dict[tuple[str, str], tuple[float, int]]
    ratio: dict[str, float | None]
    groups: list[str] = field(default_factory=list)

    def to_json_dict(self) -> dict:
        return {
            "averaging": "per-edge; a group's inter mean covers all its "
                         "incident inter-group edges",
            "intra": {
                grp: {"mean_distance": mean, "edges": count}
                for grp, (mean, count) in sorted(self.intra.items())
            },
            "inter": {
                f"{a}|{b}": {"mean_distance": mean, "edges": count}
                for (a, b), (mean, count) in sorted(self.inter.items())
            },
            "ratio": {grp: self.ratio[grp] for grp in sorted(self.ratio)},
        }


def group_ratio(g: Graph, s: DistanceState, groups: Sequence[str]) -> GroupReport:
    """Classify every edge as intra- or inter-group and report mean distances
    and ratios. ``groups`` maps vertex id to group label and must cover every
    vertex."""
    if len(groups) != g.n_vertices:
        raise InvalidParams(
            f"group map covers {len(groups)} vertices, graph has {g.n_vertices}"
        )
    for v in range(g.n_vertices):
        if groups[v] is None or groups[v] == "":
            raise MissingGroup(g.labels[v])
    intra_sum: dict[str, float] = {}
    intra_cnt: dict[str, int] = {}
    pair_sum: dict[tuple[str, str], float] = {}
    pair_cnt: dict[tuple[str, str], int] = {}
    incid_sum: dict[str, float] = {}
    incid_cnt: dict[str, int] = {}
    for e in range(g.n_edges):
        u, v = g.endpoints(e)
        gu, gv = groups[u], groups[v]
        d = float(s.d[e])
        if gu == gv:
            intra_sum[gu] = intra_sum.get(gu, 0.0) + d
            intra_cnt[gu] = intra_cnt.get(gu, 0) + 1
        else:
            key = (gu, gv) if gu < gv else (gv, gu)
            pair_sum[key] = pair_sum.get(key, 0.0) + d
            pair_cnt[key] = pair_cnt.get(key, 0) + 1
            for side in (gu, gv):
                incid_sum[side] = incid_sum.get(side, 0.0) + d
                incid_cnt[side] = incid_cnt.get(side, 0) + 1
    all_groups = sorted(set(groups))
    ratio: dict[str, float | None] = {}
    for grp in all_groups:
        if intra_cnt.get(grp, 0) >= 1 and incid_cnt.get(grp, 0) >= 1:
            ratio[grp] = (intra_sum[grp] / intra_cnt[grp]) / (
                incid_sum[grp] / incid_cnt[grp]
            )
        else:
            ratio[grp] = None
    return GroupReport(
        intra={k: (intra_sum[k] / intra_cnt[k], intra_cnt[k]) for k in intra_cnt},
        inter={k: (pair_sum[k] / pair_cnt[k], pair_cnt[k]) for k in pair_cnt},
        ratio=ratio,
        groups=all_groups,
    )


def load_group_map(source: TextIO | str, g: Graph) -> list[str]:
    """Read a "node,group" CSV into a per-vertex-id label list.

    Unknown node labels are ignored; a vertex left without a group raises
    :class:`MissingGroup`.
    """
    text = source if isinstance(source, str) else source.read()
    groups: list[str | None] = [None] * g.n_vertices
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if line_no == 1 and line.lower() in ("node,group", "node_label,group"):
            continue
        parts = line.split(",")
        if len(parts) != 2:
            raise ParseError(line_no, f"expected 'node,group', got {line!r}")
        label, grp = parts[0].strip(), parts[1].strip()
        vid = g.label_to_id.get(label)
        if vid is not None:
            groups[vid] = grp
    for v in range(g.n_vertices):
        if groups[v] is None:
            raise MissingGroup(g.labels[v])
    return groups  # type: ignore[return-value]


def save_group_map(groups: Sequence[str], g: Graph, sink: TextIO) -> None:
    sink.write("node,group\n")
    for v in range(g.n_vertices):
        sink.write(f"{g.labels[v]},{groups[v]}\n")
