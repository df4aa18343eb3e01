"""Keyword-search benchmarking for heterogeneous data collections.

The package turns CSV, XML, and log corpora (or seeded synthetic data) into
a unified node/edge graph, indexes every node's r-radius subgraph for
keyword search, generates query workloads from corpus statistics, and runs
scale-factor benchmark sweeps over the result.
"""
from .bench import (
    BenchPlan,
    BenchReport,
    DblpSource,
    ScaleResult,
    SubsampleSource,
    SuiteTiming,
    SyntheticSource,
    read_report,
    render_report,
    run_bench,
    trend_check,
)
from .engine import (
    Hit,
    IndexConfig,
    KeywordIndex,
    MatchMode,
    SearchResult,
    build_index,
    index_stats,
    load_index,
    save_index,
    search,
)
from .errors import ConfigError, LakebenchError, ParseError, ReferentialIntegrityError
from .graph import (
    DataGraph,
    RadiusSubgraph,
    hop_distance,
    load_graph,
    normalize_keyword,
    normalize_text,
    radius_subgraph,
    save_graph,
)
from .ingest import (
    IngestReport,
    ingest_apache_log,
    ingest_dblp,
    ingest_movies,
    subsample,
)
from .synth import SynthConfig, generate_graph, generate_synthetic
from .workload import (
    FrequencyTable,
    KeywordPool,
    QuerySuite,
    build_pool,
    compute_frequencies,
    frequencies_from_graph,
    gen_multi_random,
    gen_multi_related,
    gen_single,
    read_suite,
    write_suite,
)

__version__ = "0.1.0"

__all__ = [
    "BenchPlan",
    "BenchReport",
    "ConfigError",
    "DataGraph",
    "DblpSource",
    "FrequencyTable",
    "Hit",
    "IndexConfig",
    "IngestReport",
    "KeywordIndex",
    "KeywordPool",
    "LakebenchError",
    "MatchMode",
    "ParseError",
    "QuerySuite",
    "RadiusSubgraph",
    "ReferentialIntegrityError",
    "ScaleResult",
    "SearchResult",
    "SubsampleSource",
    "SuiteTiming",
    "SynthConfig",
    "SyntheticSource",
    "build_index",
    "build_pool",
    "compute_frequencies",
    "frequencies_from_graph",
    "gen_multi_random",
    "gen_multi_related",
    "gen_single",
    "generate_graph",
    "generate_synthetic",
    "hop_distance",
    "index_stats",
    "ingest_apache_log",
    "ingest_dblp",
    "ingest_movies",
    "load_graph",
    "load_index",
    "normalize_keyword",
    "normalize_text",
    "radius_subgraph",
    "read_report",
    "read_suite",
    "render_report",
    "run_bench",
    "save_graph",
    "save_index",
    "search",
    "subsample",
    "trend_check",
    "write_suite",
]
