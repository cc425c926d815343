"""End-to-end pipeline: ingest -> filter -> normalize -> graph ->
pathfinder -> betweenness -> groups -> sensor matrix -> files.

Corpora are processed concurrently (the COWORD_ATLAS_THREADS
environment variable caps the worker count) but every artifact is
rendered in memory and written in configuration order, so the output
tree is byte-for-byte reproducible regardless of scheduling.  On any
failure the partial output tree is removed again.

Output tree::

    <out>/<corpus>/graph.json      co-word graph (isolates pruned)
    <out>/<corpus>/network.json    pathfinder network
    <out>/<corpus>/scores.csv      betweenness per keyword
    <out>/<corpus>/groups.csv      path groups
    <out>/<corpus>/network.gexf    for external viewers
    <out>/<corpus>/network.png     rendered map (optional)
    <out>/sensor_matrix.csv        sensors x corpora
    <out>/sensor_matrix.png        rendered matrix (optional)
    <out>/report.json              stats, config echo, file hashes
"""

from __future__ import annotations

import csv
import hashlib
import io
import json
import logging
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

from . import gexf, pathfinder
from .analysis import (
    Group,
    SensorMatrix,
    betweenness_centrality,
    build_sensor_matrix,
    extract_groups,
)
from .graph import build_coword_graph, graph_stats, graph_to_dict, remove_isolates
from .lexicon import Lexicon, default_lexicon, load_lexicon_file, normalize_corpus
from .pathfinder import mst_pathfinder, network_to_dict
from .sensors import SensorRules, default_sensor_rules, load_sensor_rules_file
from .version import __version__
from .wos import FilterCriteria, filter_corpus, read_wos_file

log = logging.getLogger("coword_atlas")

export_gexf = gexf.export_gexf


class PipelineError(Exception):
    def __init__(self, corpus: str | None, stage: str, cause: Exception):
        where = f"corpus {corpus!r}, stage {stage}" if corpus else f"stage {stage}"
        super().__init__(f"{where}: {cause}")
        self.corpus = corpus
        self.stage = stage
        self.cause = cause


@dataclass
class CorpusSpec:
    label: str
    path: Path


@dataclass
class PipelineConfig:
    corpora: list[CorpusSpec]
    output_dir: Path
    lexicon_rules: Path | None = None
    sensor_rules: Path | None = None
    criteria: FilterCriteria | None = None
    mode: str = pathfinder.FORCED_TREE
    tie_policy: str = pathfinder.TIE_LEXICOGRAPHIC
    binarize: bool = False
    threshold: float = 0.1
    figures: bool = True
    strict: bool = False

    def __post_init__(self):
        labels = [spec.label for spec in self.corpora]
        if len(set(labels)) != len(labels):
            raise ValueError(f"corpus labels are not unique: {labels}")

    @classmethod
    def from_file(cls, path: str | Path) -> "PipelineConfig":
        """Load a JSON config; relative paths resolve against the file."""
        path = Path(path)
        data = json.loads(path.read_text(encoding="utf-8"))
        base = path.parent

        def resolve(p):
            return (base / p).resolve() if p else None

        corpora = [
            CorpusSpec(label=c["label"], path=resolve(c["path"]))
            for c in data.get("corpora", [])
        ]
        if not corpora:
            raise ValueError(f"{path}: config lists no corpora")
        pf = data.get("pathfinder", {})
        config = cls(
            corpora=corpora,
            output_dir=resolve(data.get("output_dir", "out")),
            lexicon_rules=resolve(data.get("lexicon_rules")),
            sensor_rules=resolve(data.get("sensor_rules")),
            criteria=(
                FilterCriteria.from_dict(data["filter"]) if data.get("filter") else None
            ),
            mode=_MODE_ALIASES.get(pf.get("mode"), pf.get("mode", pathfinder.FORCED_TREE)),
            tie_policy=_TIE_ALIASES.get(pf.get("tie"), pf.get("tie", pathfinder.TIE_LEXICOGRAPHIC)),
            binarize=bool(pf.get("binarize", False)),
            threshold=float(data.get("threshold", 0.1)),
            figures=bool(data.get("figures", True)),
            strict=bool(data.get("strict", False)),
        )
        missing = [
            str(spec.path) for spec in config.corpora if not spec.path.is_file()
        ]
        for rules in (config.lexicon_rules, config.sensor_rules):
            if rules is not None and not rules.is_file():
                missing.append(str(rules))
        if missing:
            raise FileNotFoundError(f"{path}: missing inputs: {', '.join(missing)}")
        return config

    def echo(self) -> dict:
        return {
            "corpora": [
                {"label": s.label, "path": s.path.name} for s in self.corpora
            ],
            "lexicon_rules": self.lexicon_rules.name if self.lexicon_rules else None,
            "sensor_rules": self.sensor_rules.name if self.sensor_rules else None,
            "filter": _criteria_echo(self.criteria),
            "pathfinder": {
                "mode": self.mode,
                "tie": self.tie_policy,
                "binarize": self.binarize,
            },
            "threshold": self.threshold,
            "figures": self.figures,
            "strict": self.strict,
        }


_MODE_ALIASES = {"forced-tree": pathfinder.FORCED_TREE, "union-msts": pathfinder.UNION_OF_MSTS}
_TIE_ALIASES = {"lex": pathfinder.TIE_LEXICOGRAPHIC}


def _criteria_echo(criteria: FilterCriteria | None):
    if criteria is None:
        return None
    return {
        "doc_types": sorted(criteria.doc_types) if criteria.doc_types else None,
        "languages": sorted(criteria.languages) if criteria.languages else None,
        "year_min": criteria.year_min,
        "year_max": criteria.year_max,
        "indices": sorted(criteria.indices) if criteria.indices else None,
        "require_keywords": criteria.require_keywords,
    }


@dataclass
class RunReport:
    version: str
    config: dict
    corpora: dict[str, dict]
    output_files: dict[str, str] = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "tool": "coword-atlas",
            "version": self.version,
            "config": self.config,
            "corpora": self.corpora,
            "output_files": self.output_files,
        }


@dataclass
class _CorpusResult:
    label: str
    stats: dict
    artifacts: dict[str, bytes]
    groups: list[Group]


def _json_bytes(data: dict) -> bytes:
    return (json.dumps(data, indent=2, sort_keys=True, ensure_ascii=False) + "\n").encode(
        "utf-8"
    )


def scores_csv_text(scores: dict[str, float]) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(["keyword", "betweenness"])
    for keyword in sorted(scores, key=lambda k: (-scores[k], k)):
        writer.writerow([keyword, repr(scores[keyword])])
    return buffer.getvalue()


def group_tables_text(groups: list[Group]) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(["group_index", "core_keyword", "top5_keywords", "related_sensors"])
    for index, group in enumerate(groups, start=1):
        writer.writerow(
            [
                index,
                group.head,
                "; ".join(group.top_keywords),
                "; ".join(group.sensors),
            ]
        )
    return buffer.getvalue()


def export_group_tables(groups: list[Group], path: str | Path):
    Path(path).write_text(group_tables_text(groups), encoding="utf-8")


def matrix_csv_text(matrix: SensorMatrix) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(["sensor"] + list(matrix.corpora))
    for sensor in matrix.sensors:
        writer.writerow(
            [sensor] + ["*" if matrix.present(sensor, c) else "" for c in matrix.corpora]
        )
    return buffer.getvalue()


def effective_workers(requested: int | None, tasks: int) -> int:
    workers = requested or min(tasks, os.cpu_count() or 1)
    cap = os.environ.get("COWORD_ATLAS_THREADS")
    if cap:
        try:
            workers = min(workers, max(1, int(cap)))
        except ValueError:
            log.warning("ignoring non-numeric COWORD_ATLAS_THREADS=%r", cap)
    return max(1, min(workers, tasks or 1))


def _empty_stats() -> dict:
    return {
        "records_parsed": 0,
        "records_filtered": 0,
        "keywords_dropped": 0,
        "nodes_total": 0,
        "isolates_removed": 0,
        "isolated_keywords": [],
        "nodes": 0,
        "edges_before": 0,
        "edges_after": 0,
        "component_count": 0,
        "sensor_node_count": 0,
        "group_count": 0,
        "diagnostics": [],
    }


def _process_corpus(
    spec: CorpusSpec, config: PipelineConfig, lexicon: Lexicon, rules: SensorRules
) -> _CorpusResult:
    def stage(name, fn, *args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except Exception as exc:
            raise PipelineError(spec.label, name, exc) from exc

    stats = _empty_stats()
    corpus, diagnostics = stage("parse", read_wos_file, spec.path, spec.label, config.strict)
    stats["records_parsed"] = len(corpus)
    stats["diagnostics"] = list(diagnostics)

    if config.criteria is not None:
        corpus = stage("filter", filter_corpus, corpus, config.criteria)
    stats["records_filtered"] = len(corpus)

    corpus, dropped = stage("normalize", normalize_corpus, lexicon, corpus)
    stats["keywords_dropped"] = len(dropped)
    stats["diagnostics"].extend(dropped)

    graph = stage("graph", build_coword_graph, corpus)
    stats["nodes_total"] = len(graph.doc_frequency)
    graph, isolates = stage("graph", remove_isolates, graph)
    stats["isolates_removed"] = len(isolates)
    stats["isolated_keywords"] = isolates
    stats["edges_before"] = graph.edge_count()

    if not graph.doc_frequency:
        log.warning("corpus %r is empty after filtering; no network outputs", spec.label)
        return _CorpusResult(spec.label, stats, {}, [])

    gstats = stage("graph", graph_stats, graph, rules)
    stats["nodes"] = gstats["node_count"]
    stats["component_count"] = gstats["component_count"]
    stats["sensor_node_count"] = gstats["sensor_node_count"]

    network = stage(
        "reduce",
        mst_pathfinder,
        graph,
        config.mode,
        config.tie_policy,
        config.binarize,
    )
    stats["edges_after"] = network.edge_count()

    scores = stage("betweenness", betweenness_centrality, network)
    groups = stage(
        "groups",
        extract_groups,
        network,
        scores,
        config.threshold,
        graph.doc_frequency,
        rules,
    )
    stats["group_count"] = len(groups)

    artifacts = {
        "graph.json": _json_bytes(graph_to_dict(graph)),
        "network.json": _json_bytes(network_to_dict(network)),
        "scores.csv": scores_csv_text(scores).encode("utf-8"),
        "groups.csv": group_tables_text(groups).encode("utf-8"),
        "network.gexf": gexf.gexf_text(network, scores).encode("utf-8"),
    }
    if config.figures:
        from .figures import render_network_figure

        buffer = io.BytesIO()
        stage("figures", render_network_figure, network, scores, groups, buffer)
        artifacts["network.png"] = buffer.getvalue()
    return _CorpusResult(spec.label, stats, artifacts, groups)


def run_pipeline(config: PipelineConfig, threads: int | None = None) -> RunReport:
    try:
        lexicon = (
            load_lexicon_file(config.lexicon_rules)
            if config.lexicon_rules
            else default_lexicon()
        )
    except Exception as exc:
        raise PipelineError(None, "lexicon", exc) from exc
    try:
        rules = (
            load_sensor_rules_file(config.sensor_rules)
            if config.sensor_rules
            else default_sensor_rules()
        )
    except Exception as exc:
        raise PipelineError(None, "sensor-rules", exc) from exc

    workers = effective_workers(threads, len(config.corpora))
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            futures = [
                pool.submit(_process_corpus, spec, config, lexicon, rules)
                for spec in config.corpora
            ]
            results = [f.result() for f in futures]
    else:
        results = [
            _process_corpus(spec, config, lexicon, rules) for spec in config.corpora
        ]

    matrix = build_sensor_matrix({r.label: r.groups for r in results})

    report = RunReport(
        version=__version__,
        config=config.echo(),
        corpora={r.label: r.stats for r in results},
    )

    written: list[Path] = []
    out = config.output_dir
    try:
        out.mkdir(parents=True, exist_ok=True)
        files: dict[str, bytes] = {}
        for result in results:
            for name, blob in result.artifacts.items():
                files[f"{result.label}/{name}"] = blob
        files["sensor_matrix.csv"] = matrix_csv_text(matrix).encode("utf-8")
        if config.figures:
            from .figures import render_matrix_figure

            buffer = io.BytesIO()
            try:
                render_matrix_figure(matrix, buffer)
            except Exception as exc:
                raise PipelineError(None, "figures", exc) from exc
            files["sensor_matrix.png"] = buffer.getvalue()

        for relpath in files:
            report.output_files[relpath] = hashlib.sha256(files[relpath]).hexdigest()

        for relpath, blob in files.items():
            target = out / relpath
            target.parent.mkdir(parents=True, exist_ok=True)
            target.write_bytes(blob)
            written.append(target)

        report_path = out / "report.json"
        report_path.write_bytes(_json_bytes(report.to_dict()))
        written.append(report_path)
    except Exception:
        for path in written:
            try:
                path.unlink()
            except OSError:
                pass
        raise
    return report
