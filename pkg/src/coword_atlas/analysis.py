"""Betweenness centrality, path groups, and the cross-corpus sensor
matrix.

Centrality is computed on the reduced network with unweighted hop
counts and normalized per connected component: raw pair counts are
divided by (n - 1)(n - 2) / 2 for a component of n nodes, so scores are
comparable across networks of different sizes.  Nodes in components
smaller than 3 score 0.

Path groups follow the head-and-fragment rule: every node whose score
exceeds the threshold becomes the head of its own group; removing the
heads splits the rest of each component into fragments, and each
fragment joins the adjacent head with the highest score.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field

from .pathfinder import PathfinderNetwork
from .sensors import SensorRules, is_sensor_term

__all__ = [
    "ThresholdOutOfRange",
    "Group",
    "SensorMatrix",
    "betweenness_centrality",
    "betweenness_oracle",
    "extract_groups",
    "build_sensor_matrix",
    "is_sensor_term",
]


class ThresholdOutOfRange(ValueError):
    pass


def _components(adj: dict[str, set[str]]) -> list[list[str]]:
    seen: set[str] = set()
    components = []
    for start in sorted(adj):
        if start in seen:
            continue
        queue = deque([start])
        seen.add(start)
        component = []
        while queue:
            node = queue.popleft()
            component.append(node)
            for neighbor in adj[node]:
                if neighbor not in seen:
                    seen.add(neighbor)
                    queue.append(neighbor)
        components.append(sorted(component))
    return components


def betweenness_centrality(network: PathfinderNetwork) -> dict[str, float]:
    """Brandes' accumulation over BFS shortest paths, normalized per
    component.  Deterministic: sources are visited in sorted order and
    the reduction is a plain sequential sum."""
    adj = network.adjacency()
    nodes = sorted(adj)
    raw = {v: 0.0 for v in nodes}

    for source in nodes:
        stack: list[str] = []
        preds: dict[str, list[str]] = {v: [] for v in adj}
        sigma = {v: 0 for v in adj}
        dist = {v: -1 for v in adj}
        sigma[source] = 1
        dist[source] = 0
        queue = deque([source])
        while queue:
            v = queue.popleft()
            stack.append(v)
            for w in sorted(adj[v]):
                if dist[w] < 0:
                    dist[w] = dist[v] + 1
                    queue.append(w)
                if dist[w] == dist[v] + 1:
                    sigma[w] += sigma[v]
                    preds[w].append(v)
        delta = {v: 0.0 for v in adj}
        while stack:
            w = stack.pop()
            for v in preds[w]:
                delta[v] += sigma[v] / sigma[w] * (1.0 + delta[w])
            if w != source:
                raw[w] += delta[w]

    # Each unordered pair was counted from both endpoints.
    for v in raw:
        raw[v] /= 2.0

    scores = {v: 0.0 for v in nodes}
    for component in _components(adj):
        n = len(component)
        if n < 3:
            continue
        norm = (n - 1) * (n - 2) / 2.0
        for v in component:
            scores[v] = raw[v] / norm
    return scores


def betweenness_oracle(network: PathfinderNetwork) -> dict[str, float]:
    """Brute force: enumerate every shortest path of every pair and
    count pass-throughs.  Exponential in the worst case; for the small
    graphs tests use it is fine."""
    adj = network.adjacency()
    nodes = sorted(adj)
    raw = {v: 0.0 for v in nodes}

    for i, source in enumerate(nodes):
        dist = {source: 0}
        preds: dict[str, list[str]] = {source: []}
        queue = deque([source])
        while queue:
            v = queue.popleft()
            for w in sorted(adj[v]):
                if w not in dist:
                    dist[w] = dist[v] + 1
                    preds[w] = [v]
                    queue.append(w)
                elif dist[w] == dist[v] + 1:
                    preds[w].append(v)

        for target in nodes[i + 1 :]:
            if target not in dist:
                continue
            paths: list[list[str]] = []

            def walk(node, acc):
                if node == source:
                    paths.append(acc)
                    return
                for p in preds[node]:
                    walk(p, acc + [p])

            walk(target, [target])
            through: dict[str, int] = {}
            for path in paths:
                for v in path[1:-1]:
                    through[v] = through.get(v, 0) + 1
            for v, count in through.items():
                raw[v] += count / len(paths)

    scores = {v: 0.0 for v in nodes}
    for component in _components(adj):
        n = len(component)
        if n < 3:
            continue
        norm = (n - 1) * (n - 2) / 2.0
        for v in component:
            scores[v] = raw[v] / norm
    return scores


@dataclass
class Group:
    head: str
    members: list[str]
    top_keywords: list[str]
    sensors: list[str]
    fallback: bool = False
    head_score: float = 0.0

    def to_dict(self) -> dict:
        return {
            "head": self.head,
            "members": list(self.members),
            "top_keywords": list(self.top_keywords),
            "sensors": list(self.sensors),
            "fallback": self.fallback,
            "head_score": self.head_score,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "Group":
        return cls(
            head=data["head"],
            members=list(data["members"]),
            top_keywords=list(data.get("top_keywords", [])),
            sensors=list(data.get("sensors", [])),
            fallback=bool(data.get("fallback", False)),
            head_score=float(data.get("head_score", 0.0)),
        )


TOP_KEYWORD_COUNT = 5


def extract_groups(
    network: PathfinderNetwork,
    scores: dict[str, float],
    threshold: float = 0.1,
    frequencies: dict[str, int] | None = None,
    sensor_rules: SensorRules | None = None,
) -> list[Group]:
    """Split the network into head-led path groups.

    A component without any head above the threshold becomes a fallback
    group led by its highest-scoring node and flagged as such.
    """
    if not (0.0 <= threshold < 1.0):
        raise ThresholdOutOfRange(f"threshold {threshold} outside [0.0, 1.0)")
    if frequencies is None:
        frequencies = network.base.doc_frequency

    adj = network.adjacency()
    groups: list[Group] = []
    for component in _components(adj):
        heads = [v for v in component if scores.get(v, 0.0) > threshold]
        if not heads:
            # Highest score wins, lexicographic on ties.
            head = min(component, key=lambda v: (-scores.get(v, 0.0), v))
            groups.append(
                _make_group(head, set(component), scores, frequencies, sensor_rules, True)
            )
            continue

        membership: dict[str, set[str]] = {h: {h} for h in heads}
        head_set = set(heads)
        fragment_adj = {
            v: {w for w in adj[v] if w not in head_set}
            for v in component
            if v not in head_set
        }
        for fragment in _components(fragment_adj):
            adjacent = {
                h for v in fragment for h in adj[v] if h in head_set
            }
            owner = min(adjacent, key=lambda h: (-scores.get(h, 0.0), h))
            membership[owner].update(fragment)

        for head in heads:
            groups.append(
                _make_group(
                    head, membership[head], scores, frequencies, sensor_rules, False
                )
            )

    groups.sort(key=lambda g: (-g.head_score, g.head))
    return groups


def _make_group(head, members, scores, frequencies, sensor_rules, fallback) -> Group:
    ranked = sorted(
        (m for m in members if m != head),
        key=lambda m: (-frequencies.get(m, 0), m),
    )
    return Group(
        head=head,
        members=sorted(members),
        top_keywords=ranked[:TOP_KEYWORD_COUNT],
        sensors=sorted(m for m in members if is_sensor_term(m, sensor_rules)),
        fallback=fallback,
        head_score=scores.get(head, 0.0),
    )


@dataclass
class SensorMatrix:
    corpora: list[str]
    sensors: list[str]
    presence: dict[str, dict[str, bool]] = field(default_factory=dict)

    def present(self, sensor: str, corpus: str) -> bool:
        return self.presence.get(sensor, {}).get(corpus, False)

    def row(self, sensor: str) -> tuple[bool, ...]:
        return tuple(self.present(sensor, c) for c in self.corpora)


def build_sensor_matrix(group_sets: dict[str, list[Group]]) -> SensorMatrix:
    """Union of sensor labels across corpora x corpus labels.  A cell is
    true iff the label is a member of any of that corpus's groups.
    Rows are ordered by number of corpora present, then label."""
    corpora = list(group_sets)
    members: dict[str, set[str]] = {
        corpus: set().union(*(set(g.members) for g in groups)) if groups else set()
        for corpus, groups in group_sets.items()
    }
    labels: set[str] = set()
    for groups in group_sets.values():
        for group in groups:
            labels.update(group.sensors)

    presence = {
        sensor: {corpus: sensor in members[corpus] for corpus in corpora}
        for sensor in labels
    }
    ordered = sorted(labels, key=lambda s: (-sum(presence[s].values()), s))
    return SensorMatrix(corpora=corpora, sensors=ordered, presence=presence)
