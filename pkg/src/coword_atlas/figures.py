"""Static figure rendering for reduced networks and sensor matrices.

Layouts are computed with a deterministic radial-tree placement (no
random seeds, no iterative force simulation), so rendering the same
network twice produces byte-identical PNG files.
"""

from __future__ import annotations

import math
from collections import deque
from pathlib import Path

from matplotlib.backends.backend_agg import FigureCanvasAgg
from matplotlib.collections import LineCollection
from matplotlib.figure import Figure
from matplotlib import colormaps

from .analysis import Group, SensorMatrix
from .pathfinder import PathfinderNetwork

_PNG_METADATA = {"Software": "coword-atlas"}


def _components(adj: dict[str, set[str]]) -> list[list[str]]:
    seen: set[str] = set()
    out = []
    for start in sorted(adj):
        if start in seen:
            continue
        queue, comp = deque([start]), []
        seen.add(start)
        while queue:
            v = queue.popleft()
            comp.append(v)
            for w in adj[v]:
                if w not in seen:
                    seen.add(w)
                    queue.append(w)
        out.append(sorted(comp))
    return out


def forest_layout(adj: dict[str, set[str]]) -> dict[str, tuple[float, float]]:
    """Radial BFS-tree layout per component, components on a grid."""
    comps = _components(adj)
    comps.sort(key=lambda c: (-len(c), c[0]))
    cols = max(1, math.ceil(math.sqrt(len(comps))))
    pos: dict[str, tuple[float, float]] = {}

    for index, comp in enumerate(comps):
        cx, cy = 2.4 * (index % cols), -2.4 * (index // cols)
        if len(comp) == 1:
            pos[comp[0]] = (cx, cy)
            continue

        root = min(comp, key=lambda v: (-len(adj[v]), v))
        children: dict[str, list[str]] = {v: [] for v in comp}
        depth = {root: 0}
        order = [root]
        queue = deque([root])
        while queue:
            v = queue.popleft()
            for w in sorted(adj[v]):
                if w not in depth:
                    depth[w] = depth[v] + 1
                    children[v].append(w)
                    order.append(w)
                    queue.append(w)

        leaves: dict[str, int] = {}
        for v in reversed(order):
            leaves[v] = max(1, sum(leaves[w] for w in children[v])) if children[v] else 1
        step = 1.0 / max(depth.values())

        def place(node: str, lo: float, hi: float):
            angle = (lo + hi) / 2.0
            radius = depth[node] * step
            pos[node] = (cx + radius * math.cos(angle), cy + radius * math.sin(angle))
            start = lo
            for child in children[node]:
                span = (hi - lo) * leaves[child] / leaves[node]
                place(child, start, start + span)
                start += span

        place(root, 0.0, 2.0 * math.pi)
    return pos


def render_network_figure(
    network: PathfinderNetwork,
    scores: dict[str, float],
    groups: list[Group],
    path: str | Path,
):
    adj = network.adjacency()
    pos = forest_layout(adj)
    nodes = sorted(adj)

    group_of = {}
    for i, group in enumerate(groups):
        for member in group.members:
            group_of[member] = i
    cmap = colormaps["tab20"]

    fig = Figure(figsize=(7.5, 7.5))
    FigureCanvasAgg(fig)
    ax = fig.add_subplot(111)
    segments = [(pos[a], pos[b]) for a, b in sorted(network.kept)]
    if segments:
        ax.add_collection(
            LineCollection(segments, colors="#9a9a9a", linewidths=0.8, zorder=1)
        )
    xs = [pos[v][0] for v in nodes]
    ys = [pos[v][1] for v in nodes]
    sizes = [20.0 + 300.0 * scores.get(v, 0.0) for v in nodes]
    colors = [cmap(group_of.get(v, 0) % 20) for v in nodes]
    ax.scatter(xs, ys, s=sizes, c=colors, zorder=2, edgecolors="#3a3a3a", linewidths=0.4)

    for group in groups:
        x, y = pos[group.head]
        ax.annotate(
            group.head,
            (x, y),
            textcoords="offset points",
            xytext=(0, 6),
            fontsize=7,
            ha="center",
            zorder=3,
        )

    ax.set_title(
        f"{network.label}: {len(nodes)} keywords, {len(network.kept)} links, "
        f"{len(groups)} groups",
        fontsize=10,
    )
    ax.set_aspect("equal")
    ax.autoscale_view()
    ax.axis("off")
    fig.savefig(path, dpi=150, metadata=_PNG_METADATA)


def render_matrix_figure(matrix: SensorMatrix, path: str | Path, max_rows: int = 40):
    rows = matrix.sensors[:max_rows]
    fig = Figure(figsize=(2.0 + 0.6 * max(1, len(matrix.corpora)), 1.2 + 0.22 * max(1, len(rows))))
    FigureCanvasAgg(fig)
    ax = fig.add_subplot(111)

    if rows and matrix.corpora:
        grid = [
            [1.0 if matrix.present(sensor, corpus) else 0.0 for corpus in matrix.corpora]
            for sensor in rows
        ]
        ax.imshow(grid, cmap="Blues", vmin=0.0, vmax=1.3, aspect="auto")
        ax.set_xticks(range(len(matrix.corpora)), matrix.corpora, fontsize=7, rotation=30, ha="right")
        ax.set_yticks(range(len(rows)), rows, fontsize=6)
        title = "sensor terms by corpus"
        if len(matrix.sensors) > len(rows):
            title += f" (top {len(rows)} of {len(matrix.sensors)})"
        ax.set_title(title, fontsize=9)
    else:
        ax.text(0.5, 0.5, "no sensor terms", ha="center", va="center", fontsize=9)
        ax.axis("off")
    fig.savefig(path, dpi=150, bbox_inches="tight", metadata=_PNG_METADATA)
