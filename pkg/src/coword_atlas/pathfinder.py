"""Pathfinder network scaling in the MST formulation (r = infinity,
q = n - 1).

An edge survives exactly when no alternative path between its endpoints
is strictly stronger, where the strength of a path is its weakest edge
weight.  That edge set equals the union of all maximum spanning trees,
which a Kruskal-style sweep over descending weight classes computes in
O(E log E) instead of the cubic closure of the classical algorithm.

Two modes:

* ``union_of_msts`` keeps an edge when its endpoints are in different
  components at the start of its weight class; merges are applied after
  the whole class is scanned.  Ties therefore keep parallel branches
  and the result can contain cycles.
* ``forced_tree`` processes edges inside a class one at a time in
  tie-policy order, so the result is an exact spanning forest (one tree
  per component).

``pathfinder_oracle`` is an independent max-min closure used to check
the sweep in tests; it is quadratic in memory and cubic per iteration,
fine for the small graphs tests use.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

from .graph import CoWordGraph, Edge, UnionFind, graph_from_dict, graph_to_dict

UNION_OF_MSTS = "union_of_msts"
FORCED_TREE = "forced_tree"
MODES = (UNION_OF_MSTS, FORCED_TREE)

TIE_LEXICOGRAPHIC = "lexicographic"
TIE_NONE = "none"
TIE_POLICIES = (TIE_LEXICOGRAPHIC, TIE_NONE)


class NegativeWeight(ValueError):
    """Similarity weights below 1 are not meaningful for co-occurrence
    counts and would invert the descending sweep."""


@dataclass
class PathfinderNetwork:
    base: CoWordGraph
    kept: dict[Edge, int]
    mode: str = FORCED_TREE
    tie_policy: str = TIE_LEXICOGRAPHIC
    binarized: bool = False

    @property
    def label(self) -> str:
        return self.base.label

    @property
    def nodes(self) -> list[str]:
        return self.base.nodes

    def doc_frequency(self, node: str) -> int:
        return self.base.doc_frequency[node]

    def edge_count(self) -> int:
        return len(self.kept)

    def adjacency(self) -> dict[str, set[str]]:
        adj: dict[str, set[str]] = {node: set() for node in self.base.doc_frequency}
        for a, b in self.kept:
            adj[a].add(b)
            adj[b].add(a)
        return adj


def _check_weights(graph: CoWordGraph):
    for edge, weight in graph.weights.items():
        if weight < 1:
            raise NegativeWeight(f"edge {edge!r} has weight {weight}; must be >= 1")


def mst_pathfinder(
    graph: CoWordGraph,
    mode: str = FORCED_TREE,
    tie_policy: str = TIE_LEXICOGRAPHIC,
    binarize: bool = False,
) -> PathfinderNetwork:
    """Reduce a co-word graph; an empty graph yields an empty network."""
    if mode not in MODES:
        raise ValueError(f"unknown mode {mode!r}")
    if tie_policy not in TIE_POLICIES:
        raise ValueError(f"unknown tie policy {tie_policy!r}")
    _check_weights(graph)

    selection = {edge: 1 for edge in graph.weights} if binarize else graph.weights
    classes: dict[int, list[Edge]] = {}
    for edge, weight in selection.items():  # storage order, kept for tie "none"
        classes.setdefault(weight, []).append(edge)

    uf = UnionFind(graph.doc_frequency)
    kept: dict[Edge, int] = {}
    for weight in sorted(classes, reverse=True):
        edges = classes[weight]
        if tie_policy == TIE_LEXICOGRAPHIC:
            edges = sorted(edges)
        if mode == UNION_OF_MSTS:
            survivors = [e for e in edges if uf.find(e[0]) != uf.find(e[1])]
            for a, b in survivors:
                kept[(a, b)] = graph.weights[(a, b)]
                uf.union(a, b)
        else:
            for a, b in edges:
                if uf.union(a, b):
                    kept[(a, b)] = graph.weights[(a, b)]

    return PathfinderNetwork(
        base=graph,
        kept={edge: kept[edge] for edge in sorted(kept)},
        mode=mode,
        tie_policy=tie_policy,
        binarized=binarize,
    )


def pathfinder_oracle(graph: CoWordGraph, q: int | None = None) -> frozenset[Edge]:
    """Edge set kept by the closure definition: (a, b) survives iff
    w(a, b) >= the best max-min path strength over paths of <= q links.

    Independent of the sweep above on purpose; only suitable for small
    graphs (cubic per iteration).
    """
    _check_weights(graph)
    nodes = sorted(graph.doc_frequency)
    if q is None:
        q = max(len(nodes) - 1, 1)

    direct: dict[str, dict[str, int]] = {a: {} for a in nodes}
    for (a, b), weight in graph.weights.items():
        direct[a][b] = weight
        direct[b][a] = weight

    # strength[a][b] after k iterations: best max-min strength over
    # paths of <= k + 1 links.  Each step extends by one edge from a
    # snapshot, so the link budget is honored exactly.
    strength = {a: dict(direct[a]) for a in nodes}
    for _ in range(q - 1):
        changed = False
        nxt = {a: dict(strength[a]) for a in nodes}
        for a in nodes:
            for c, via in strength[a].items():
                for b, last in direct[c].items():
                    if b == a:
                        continue
                    s = min(via, last)
                    if s > nxt[a].get(b, 0):
                        nxt[a][b] = s
                        changed = True
        strength = nxt
        if not changed:
            break

    return frozenset(
        edge for edge, weight in graph.weights.items()
        if weight >= strength[edge[0]].get(edge[1], 0)
    )


def network_to_dict(network: PathfinderNetwork) -> dict:
    data = graph_to_dict(network.base)
    data["format"] = "coword-network/1"
    data["edges"] = [
        {"source": a, "target": b, "weight": network.kept[(a, b)]}
        for a, b in sorted(network.kept)
    ]
    data["meta"] = {
        "mode": network.mode,
        "tie_policy": network.tie_policy,
        "binarized": network.binarized,
        "base_edge_count": network.base.edge_count(),
    }
    return data


def network_from_dict(data: dict) -> PathfinderNetwork:
    base = graph_from_dict(data)
    meta = data.get("meta", {})
    return PathfinderNetwork(
        base=base,
        kept=dict(base.weights),
        mode=meta.get("mode", FORCED_TREE),
        tie_policy=meta.get("tie_policy", TIE_LEXICOGRAPHIC),
        binarized=bool(meta.get("binarized", False)),
    )


def save_network(network: PathfinderNetwork, path: str | Path):
    Path(path).write_text(
        json.dumps(network_to_dict(network), indent=2, sort_keys=True, ensure_ascii=False)
        + "\n",
        encoding="utf-8",
    )


def load_network(path: str | Path) -> PathfinderNetwork:
    return network_from_dict(json.loads(Path(path).read_text(encoding="utf-8")))
