"""Keyword co-occurrence graphs.

Every record contributes +1 to the edge weight of each unordered pair
of its (canonical, de-duplicated) keywords, so edge weights count the
records in which two keywords co-occur and ``doc_frequency`` counts the
records mentioning a keyword at all.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from pathlib import Path

from .sensors import SensorRules, is_sensor_term
from .wos import Corpus

Edge = tuple[str, str]


class UnionFind:
    def __init__(self, items=()):
        self.parent = {item: item for item in items}

    def add(self, item):
        self.parent.setdefault(item, item)

    def find(self, item):
        root = item
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[item] != root:  # path compression
            self.parent[item], item = root, self.parent[item]
        return root

    def union(self, a, b) -> bool:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        self.parent[rb] = ra
        return True

    def component_count(self) -> int:
        return sum(1 for item in self.parent if self.parent[item] == item)


def edge_key(a: str, b: str) -> Edge:
    return (a, b) if a < b else (b, a)


@dataclass
class CoWordGraph:
    label: str
    doc_frequency: dict[str, int] = field(default_factory=dict)
    weights: dict[Edge, int] = field(default_factory=dict)

    def __post_init__(self):
        for (a, b), weight in self.weights.items():
            if a == b:
                raise ValueError(f"self-loop on {a!r}")
            if (a, b) != edge_key(a, b):
                raise ValueError(f"edge {(a, b)!r} not stored in sorted order")
            if a not in self.doc_frequency or b not in self.doc_frequency:
                raise ValueError(f"edge {(a, b)!r} references a missing node")
            if weight < 1:
                raise ValueError(f"edge {(a, b)!r} has weight {weight} < 1")

    @property
    def nodes(self) -> list[str]:
        return list(self.doc_frequency)

    def edge_count(self) -> int:
        return len(self.weights)

    def adjacency(self) -> dict[str, dict[str, int]]:
        adj: dict[str, dict[str, int]] = {node: {} for node in self.doc_frequency}
        for (a, b), weight in self.weights.items():
            adj[a][b] = weight
            adj[b][a] = weight
        return adj


def build_coword_graph(corpus: Corpus, label: str | None = None) -> CoWordGraph:
    doc_frequency: dict[str, int] = {}
    weights: dict[Edge, int] = {}
    for record in corpus.records:
        keywords = sorted(set(record.author_keywords))
        for keyword in keywords:
            doc_frequency[keyword] = doc_frequency.get(keyword, 0) + 1
        for a, b in itertools.combinations(keywords, 2):
            weights[(a, b)] = weights.get((a, b), 0) + 1
    return CoWordGraph(
        label=label if label is not None else corpus.label,
        doc_frequency=doc_frequency,
        weights=weights,
    )


def remove_isolates(graph: CoWordGraph) -> tuple[CoWordGraph, list[str]]:
    """Drop degree-zero nodes; returns the pruned graph and the removed
    labels (sorted) so no keyword silently disappears from reports."""
    connected: set[str] = set()
    for a, b in graph.weights:
        connected.add(a)
        connected.add(b)
    removed = sorted(node for node in graph.doc_frequency if node not in connected)
    if not removed:
        return graph, []
    kept = {n: df for n, df in graph.doc_frequency.items() if n in connected}
    return CoWordGraph(graph.label, kept, dict(graph.weights)), removed


def graph_stats(graph: CoWordGraph, sensor_rules: SensorRules | None = None) -> dict:
    uf = UnionFind(graph.doc_frequency)
    for a, b in graph.weights:
        uf.union(a, b)
    return {
        "node_count": len(graph.doc_frequency),
        "edge_count": len(graph.weights),
        "component_count": uf.component_count(),
        "sensor_node_count": sum(
            1 for node in graph.doc_frequency if is_sensor_term(node, sensor_rules)
        ),
    }


def graph_to_dict(graph: CoWordGraph) -> dict:
    return {
        "format": "coword-graph/1",
        "label": graph.label,
        "nodes": [
            {"label": node, "doc_frequency": graph.doc_frequency[node]}
            for node in sorted(graph.doc_frequency)
        ],
        "edges": [
            {"source": a, "target": b, "weight": graph.weights[(a, b)]}
            for a, b in sorted(graph.weights)
        ],
    }


def graph_from_dict(data: dict) -> CoWordGraph:
    return CoWordGraph(
        label=data.get("label", "graph"),
        doc_frequency={n["label"]: int(n["doc_frequency"]) for n in data.get("nodes", [])},
        weights={
            edge_key(e["source"], e["target"]): int(e["weight"])
            for e in data.get("edges", [])
        },
    )


def save_graph(graph: CoWordGraph, path: str | Path):
    Path(path).write_text(
        json.dumps(graph_to_dict(graph), indent=2, sort_keys=True, ensure_ascii=False)
        + "\n",
        encoding="utf-8",
    )


def load_graph(path: str | Path) -> CoWordGraph:
    return graph_from_dict(json.loads(Path(path).read_text(encoding="utf-8")))
