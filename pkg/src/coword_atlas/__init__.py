"""coword-atlas: co-word network maps from Web of Science exports.

Library surface re-exported here; the ``coword-atlas`` command wraps it.
"""

from .version import __version__
from .wos import (
    Corpus,
    EncodingError,
    FilterCriteria,
    MalformedRecord,
    WosRecord,
    filter_corpus,
    parse_wos_export,
    parse_wos_tab_delimited,
    read_wos_file,
)
from .lexicon import (
    DuplicatePattern,
    EmptyAfterNormalization,
    Lexicon,
    NormalizationRule,
    RuleCycle,
    default_lexicon,
    load_lexicon,
    normalize_corpus,
    normalize_keyword,
)
from .graph import CoWordGraph, build_coword_graph, graph_stats, remove_isolates
from .pathfinder import (
    FORCED_TREE,
    UNION_OF_MSTS,
    NegativeWeight,
    PathfinderNetwork,
    mst_pathfinder,
    pathfinder_oracle,
)
from .sensors import SensorRules, default_sensor_rules, is_sensor_term, load_sensor_rules
from .analysis import (
    Group,
    SensorMatrix,
    ThresholdOutOfRange,
    betweenness_centrality,
    betweenness_oracle,
    build_sensor_matrix,
    extract_groups,
)
from .gexf import export_gexf
from .report import (
    CorpusSpec,
    PipelineConfig,
    PipelineError,
    RunReport,
    export_group_tables,
    run_pipeline,
)

__all__ = [
    "__version__",
    "Corpus",
    "EncodingError",
    "FilterCriteria",
    "MalformedRecord",
    "WosRecord",
    "filter_corpus",
    "parse_wos_export",
    "parse_wos_tab_delimited",
    "read_wos_file",
    "DuplicatePattern",
    "EmptyAfterNormalization",
    "Lexicon",
    "NormalizationRule",
    "RuleCycle",
    "default_lexicon",
    "load_lexicon",
    "normalize_corpus",
    "normalize_keyword",
    "CoWordGraph",
    "build_coword_graph",
    "graph_stats",
    "remove_isolates",
    "FORCED_TREE",
    "UNION_OF_MSTS",
    "NegativeWeight",
    "PathfinderNetwork",
    "mst_pathfinder",
    "pathfinder_oracle",
    "SensorRules",
    "default_sensor_rules",
    "is_sensor_term",
    "load_sensor_rules",
    "Group",
    "SensorMatrix",
    "ThresholdOutOfRange",
    "betweenness_centrality",
    "betweenness_oracle",
    "build_sensor_matrix",
    "extract_groups",
    "export_gexf",
    "CorpusSpec",
    "PipelineConfig",
    "PipelineError",
    "RunReport",
    "export_group_tables",
    "run_pipeline",
]
