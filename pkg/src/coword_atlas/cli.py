"""Command line interface.

Stages can run one at a time (ingest / normalize / build / reduce /
analyze / export), caching intermediate JSON between steps, or all at
once with ``run`` driven by a JSON config file.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from . import gexf, pathfinder, report
from .analysis import (
    ThresholdOutOfRange,
    betweenness_centrality,
    build_sensor_matrix,
    extract_groups,
)
from .graph import (
    build_coword_graph,
    graph_stats,
    graph_to_dict,
    load_graph,
    remove_isolates,
)
from .lexicon import LexiconError, default_lexicon, load_lexicon_file, normalize_corpus
from .pathfinder import NegativeWeight, load_network, mst_pathfinder, network_to_dict
from .sensors import default_sensor_rules, load_sensor_rules_file
from .version import __version__
from .wos import (
    EncodingError,
    FilterCriteria,
    MalformedRecord,
    filter_corpus,
    load_corpus,
    read_wos_file,
)

MODE_CHOICES = {"forced-tree": pathfinder.FORCED_TREE, "union-msts": pathfinder.UNION_OF_MSTS}
TIE_CHOICES = {"lex": pathfinder.TIE_LEXICOGRAPHIC, "none": pathfinder.TIE_NONE}


def _json_dump(data: dict, output: str | None):
    text = json.dumps(data, indent=2, sort_keys=True, ensure_ascii=False) + "\n"
    if output:
        Path(output).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _print_diagnostics(diagnostics):
    for message in diagnostics:
        print(f"warning: {message}", file=sys.stderr)


def cmd_ingest(args) -> int:
    corpus, diagnostics = read_wos_file(args.file, label=args.label, strict=args.strict)
    _print_diagnostics(diagnostics)
    if args.filter:
        criteria = FilterCriteria.from_dict(
            json.loads(Path(args.filter).read_text(encoding="utf-8"))
        )
        corpus = filter_corpus(corpus, criteria)
    _json_dump(corpus.to_dict(), args.output)
    print(f"{corpus.label}: {len(corpus)} records", file=sys.stderr)
    return 0


def cmd_normalize(args) -> int:
    lexicon = load_lexicon_file(args.rules) if args.rules else default_lexicon()
    corpus = load_corpus(args.corpus)
    normalized, diagnostics = normalize_corpus(lexicon, corpus)
    _print_diagnostics(diagnostics)
    _json_dump(normalized.to_dict(), args.output)
    return 0


def cmd_build(args) -> int:
    corpus = load_corpus(args.corpus)
    graph = build_coword_graph(corpus)
    removed: list[str] = []
    if not args.keep_isolates:
        graph, removed = remove_isolates(graph)
    stats = graph_stats(graph)
    if removed:
        print(f"removed {len(removed)} isolated keywords", file=sys.stderr)
    print(
        f"{graph.label}: {stats['node_count']} nodes, {stats['edge_count']} edges, "
        f"{stats['component_count']} components, {stats['sensor_node_count']} sensor terms",
        file=sys.stderr,
    )
    _json_dump(graph_to_dict(graph), args.output)
    return 0


def cmd_reduce(args) -> int:
    graph = load_graph(args.graph)
    network = mst_pathfinder(
        graph,
        mode=MODE_CHOICES[args.mode],
        tie_policy=TIE_CHOICES[args.tie],
        binarize=args.binarize,
    )
    print(
        f"{graph.label}: kept {network.edge_count()} of {graph.edge_count()} edges",
        file=sys.stderr,
    )
    _json_dump(network_to_dict(network), args.output)
    return 0


def cmd_analyze(args) -> int:
    network = load_network(args.network)
    rules = (
        load_sensor_rules_file(args.sensor_rules)
        if args.sensor_rules
        else default_sensor_rules()
    )
    scores = betweenness_centrality(network)
    groups = extract_groups(
        network, scores, threshold=args.threshold, sensor_rules=rules
    )
    matrix = build_sensor_matrix({network.label: groups})
    _json_dump({"groups": [g.to_dict() for g in groups]}, args.groups)
    Path(args.matrix).write_text(report.matrix_csv_text(matrix), encoding="utf-8")
    if args.scores:
        Path(args.scores).write_text(report.scores_csv_text(scores), encoding="utf-8")
    print(
        f"{network.label}: {len(groups)} groups, {len(matrix.sensors)} sensor terms",
        file=sys.stderr,
    )
    return 0


def cmd_run(args) -> int:
    config = report.PipelineConfig.from_file(args.config)
    if args.out:
        config.output_dir = Path(args.out).resolve()
    if args.no_figures:
        config.figures = False
    run_report = report.run_pipeline(config, threads=args.threads)
    for label, stats in run_report.corpora.items():
        print(
            f"{label}: {stats['records_filtered']}/{stats['records_parsed']} records, "
            f"{stats['nodes']} nodes, {stats['edges_before']} -> {stats['edges_after']} edges, "
            f"{stats['group_count']} groups, {stats['sensor_node_count']} sensor terms"
        )
    print(f"outputs in {config.output_dir}")
    return 0


def cmd_export(args) -> int:
    network = load_network(args.network)
    rules = (
        load_sensor_rules_file(args.sensor_rules)
        if args.sensor_rules
        else default_sensor_rules()
    )
    scores = betweenness_centrality(network)
    if args.gexf:
        gexf.export_gexf(network, scores, args.gexf)
    if args.tables or args.figure:
        groups = extract_groups(
            network, scores, threshold=args.threshold, sensor_rules=rules
        )
        if args.tables:
            report.export_group_tables(groups, args.tables)
        if args.figure:
            from .figures import render_network_figure

            render_network_figure(network, scores, groups, args.figure)
    if not (args.gexf or args.tables or args.figure):
        print("nothing to export: pass --gexf, --tables, or --figure", file=sys.stderr)
        return 1
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="coword-atlas",
        description="Co-word network maps from Web of Science exports.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ingest", help="parse a WOS export into corpus JSON")
    p.add_argument("file")
    p.add_argument("--label", required=True, help="corpus label")
    p.add_argument("--strict", action="store_true", help="fail on malformed records")
    p.add_argument("--filter", help="JSON file with filter criteria")
    p.add_argument("-o", "--output", help="output path (default: stdout)")
    p.set_defaults(func=cmd_ingest)

    p = sub.add_parser("normalize", help="normalize keywords in a corpus JSON")
    p.add_argument("corpus")
    p.add_argument("--rules", help="normalization rules CSV (default: bundled rules)")
    p.add_argument("-o", "--output", help="output path (default: stdout)")
    p.set_defaults(func=cmd_normalize)

    p = sub.add_parser("build", help="build the co-word graph from a corpus JSON")
    p.add_argument("corpus")
    p.add_argument("--keep-isolates", action="store_true")
    p.add_argument("-o", "--output", help="output path (default: stdout)")
    p.set_defaults(func=cmd_build)

    p = sub.add_parser("reduce", help="prune a graph to its pathfinder network")
    p.add_argument("graph")
    p.add_argument("--mode", choices=sorted(MODE_CHOICES), default="forced-tree")
    p.add_argument("--tie", choices=sorted(TIE_CHOICES), default="lex")
    p.add_argument("--binarize", action="store_true", help="ignore weights when pruning")
    p.add_argument("-o", "--output", help="output path (default: stdout)")
    p.set_defaults(func=cmd_reduce)

    p = sub.add_parser("analyze", help="betweenness, path groups, sensor matrix")
    p.add_argument("network")
    p.add_argument("--threshold", type=float, default=0.1)
    p.add_argument("--sensor-rules", help="sensor-term patterns (default: bundled rules)")
    p.add_argument("--groups", default="groups.json", help="groups output path")
    p.add_argument("--matrix", default="matrix.csv", help="matrix output path")
    p.add_argument("--scores", help="optional betweenness CSV output path")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("run", help="full pipeline over all corpora in a config")
    p.add_argument("--config", required=True, help="pipeline config JSON")
    p.add_argument("--out", help="output directory (overrides config)")
    p.add_argument("--threads", type=int, help="worker cap (COWORD_ATLAS_THREADS also caps)")
    p.add_argument("--no-figures", action="store_true")
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("export", help="write GEXF / group tables / figure for a network")
    p.add_argument("network")
    p.add_argument("--gexf")
    p.add_argument("--tables")
    p.add_argument("--figure")
    p.add_argument("--threshold", type=float, default=0.1)
    p.add_argument("--sensor-rules")
    p.set_defaults(func=cmd_export)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING,
        format="%(levelname)s %(message)s",
        stream=sys.stderr,
    )
    try:
        return args.func(args)
    except (
        MalformedRecord,
        EncodingError,
        LexiconError,
        NegativeWeight,
        ThresholdOutOfRange,
        report.PipelineError,
        FileNotFoundError,
        ValueError,
    ) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
