"""Byte-deterministic GEXF 1.2 writer.

Node and edge ids are assigned at export time from the sorted label
order, so the same network always serializes to the same bytes; the
file carries doc_frequency and betweenness as node attributes, the
betweenness as the viz size, and the co-occurrence count as the edge
weight.
"""

from __future__ import annotations

from pathlib import Path
from xml.sax.saxutils import escape, quoteattr

from .pathfinder import PathfinderNetwork


def gexf_text(network: PathfinderNetwork, scores: dict[str, float]) -> str:
    nodes = sorted(network.base.doc_frequency)
    node_id = {label: str(i) for i, label in enumerate(nodes)}
    edges = sorted(network.kept)

    lines = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        '<gexf xmlns="http://gexf.net/1.2draft"'
        ' xmlns:viz="http://gexf.net/1.2draft/viz" version="1.2">',
        "  <meta>",
        "    <creator>coword-atlas</creator>",
        f"    <description>{escape(network.label)}</description>",
        "  </meta>",
        '  <graph defaultedgetype="undirected" mode="static">',
        '    <attributes class="node">',
        '      <attribute id="0" title="doc_frequency" type="integer"/>',
        '      <attribute id="1" title="betweenness" type="double"/>',
        "    </attributes>",
        "    <nodes>",
    ]
    for label in nodes:
        score = scores.get(label, 0.0)
        lines += [
            f"      <node id={quoteattr(node_id[label])} label={quoteattr(label)}>",
            "        <attvalues>",
            f'          <attvalue for="0" value="{network.base.doc_frequency[label]}"/>',
            f'          <attvalue for="1" value="{score!r}"/>',
            "        </attvalues>",
            f'        <viz:size value="{score!r}"/>',
            "      </node>",
        ]
    lines.append("    </nodes>")
    lines.append("    <edges>")
    for i, (a, b) in enumerate(edges):
        lines.append(
            f'      <edge id="{i}" source={quoteattr(node_id[a])}'
            f" target={quoteattr(node_id[b])}"
            f' weight="{network.kept[(a, b)]}"/>'
        )
    lines.append("    </edges>")
    lines.append("  </graph>")
    lines.append("</gexf>")
    return "\n".join(lines) + "\n"


def export_gexf(network: PathfinderNetwork, scores: dict[str, float], path: str | Path):
    Path(path).write_text(gexf_text(network, scores), encoding="utf-8")
