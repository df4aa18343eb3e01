"""Command-line front end wiring all modules together.

Subcommands: ingest, synth, sample, queries, search, bench, report.
Exit codes: 0 success, 1 operational failure, 2 usage error. Every
subcommand accepts ``--config FILE`` with a JSON object whose keys are the
long flag names (without dashes); explicit flags win over config values.
Output paths must not already exist unless ``--force`` is given.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .bench import (
    BenchPlan,
    DEFAULT_SCALES,
    DblpSource,
    SubsampleSource,
    SyntheticSource,
    read_report,
    render_report,
    run_bench,
    trend_check,
)
from .engine import IndexConfig, build_index, search
from .errors import ConfigError, LakebenchError
from .graph import load_graph
from .ingest import ingest_apache_log, ingest_dblp, ingest_movies, subsample
from .synth import SynthConfig, generate_synthetic
from .workload import (
    DEFAULT_CUTOFF_FRACTION,
    build_pool,
    compute_frequencies,
    gen_multi_random,
    gen_multi_related,
    gen_single,
    read_suite,
    write_suite,
)


def _claim(path: Path, force: bool) -> None:
    if path.exists() and not force:
        raise ConfigError(f"output path {path} already exists (pass --force to overwrite)")


_NON_OPTION_DESTS = ("func", "parser", "command", "kind")
_FLAG_NAMES = {"in_path": "--in"}


def _flag_for(dest: str) -> str:
    return _FLAG_NAMES.get(dest, "--" + dest.replace("_", "-"))


def _merge_config(parser: argparse.ArgumentParser, args: argparse.Namespace,
                  defaults: dict, required: tuple[str, ...]) -> argparse.Namespace:
    """Layer values: hard defaults, then --config JSON, then explicit flags."""
    explicit = {k: v for k, v in vars(args).items() if k not in _NON_OPTION_DESTS}
    merged = dict(defaults)
    config_path = explicit.pop("config", None)
    if config_path is not None:
        try:
            with open(config_path, encoding="utf-8") as fh:
                loaded = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"{config_path}: invalid JSON: {exc}") from exc
        if not isinstance(loaded, dict):
            raise ConfigError(f"{config_path}: config must be a JSON object")
        for key, value in loaded.items():
            dest = "in_path" if key == "in" else key.replace("-", "_")
            if dest not in defaults and dest not in required:
                raise ConfigError(f"{config_path}: unknown config key {key!r}")
            merged[dest] = value
    merged.update(explicit)
    for dest in required:
        if merged.get(dest) is None:
            parser.error(f"argument {_flag_for(dest)} is required")
    return argparse.Namespace(**merged)


def _add_common(parser: argparse.ArgumentParser, *, seed: bool = False) -> None:
    parser.add_argument("--config", default=argparse.SUPPRESS, metavar="FILE",
                        help="JSON file with defaults for this subcommand")
    parser.add_argument("--force", action="store_true", default=argparse.SUPPRESS,
                        help="overwrite existing output paths")
    if seed:
        parser.add_argument("--seed", type=int, default=argparse.SUPPRESS,
                            help="random seed (default 0)")


def _summary(report, out_dir) -> str:
    line = (f"wrote {report.nodes_written} nodes, {report.edges_written} edges "
            f"to {out_dir}")
    if report.records_skipped:
        line += f" ({report.records_skipped} records skipped)"
    return line


# --- subcommand runners ----------------------------------------------------

def _run_ingest_movies(args) -> int:
    opts = _merge_config(args.parser, args,
                         defaults={"force": False},
                         required=("movies", "ratings", "tags", "out"))
    out = Path(opts.out)
    _claim(out, opts.force)
    report = ingest_movies(opts.movies, opts.ratings, opts.tags, out)
    print(_summary(report, out))
    return 0


def _run_ingest_dblp(args) -> int:
    opts = _merge_config(args.parser, args,
                         defaults={"force": False, "scale": None},
                         required=("xml", "out"))
    out = Path(opts.out)
    _claim(out, opts.force)
    report = ingest_dblp(opts.xml, out, scale=opts.scale)
    print(_summary(report, out))
    return 0


def _run_ingest_apache(args) -> int:
    opts = _merge_config(args.parser, args,
                         defaults={"force": False},
                         required=("log", "out"))
    out = Path(opts.out)
    _claim(out, opts.force)
    report = ingest_apache_log(opts.log, out)
    print(_summary(report, out))
    return 0


def _run_synth(args) -> int:
    opts = _merge_config(args.parser, args,
                         defaults={"force": False, "zipf": 1.0, "seed": 0},
                         required=("nodes", "vocab", "kw_per_node", "mean_degree", "out"))
    out = Path(opts.out)
    _claim(out, opts.force)
    config = SynthConfig(
        node_count=opts.nodes,
        vocab_size=opts.vocab,
        keywords_per_node=opts.kw_per_node,
        mean_degree=float(opts.mean_degree),
        zipf_exponent=float(opts.zipf),
        seed=opts.seed,
    )
    report = generate_synthetic(config, out)
    print(_summary(report, out))
    return 0


def _run_sample(args) -> int:
    opts = _merge_config(args.parser, args,
                         defaults={"force": False},
                         required=("nodes", "edges", "scale", "out"))
    out = Path(opts.out)
    _claim(out, opts.force)
    report = subsample(opts.nodes, opts.edges, opts.scale, out)
    print(_summary(report, out))
    for note in report.notes:
        print(f"note: {note}")
    return 0


def _run_queries(args) -> int:
    opts = _merge_config(args.parser, args,
                         defaults={"force": False, "edges": None, "k": None,
                                   "r": 2, "cutoff": DEFAULT_CUTOFF_FRACTION,
                                   "seed": 0, "name": None},
                         required=("nodes", "policy", "count", "out"))
    if opts.policy in ("multi-random", "multi-related") and opts.k is None:
        args.parser.error("argument --k is required for multi-keyword policies")
    if opts.policy == "multi-related" and opts.edges is None:
        args.parser.error("argument --edges is required for the multi-related policy")
    out = Path(opts.out)
    _claim(out, opts.force)
    _claim(out.with_name(out.stem + ".meta.json"), opts.force)

    table = compute_frequencies(opts.nodes)
    pool = build_pool(table, opts.cutoff)
    if opts.policy == "single":
        suite = gen_single(pool, opts.count, seed=opts.seed,
                           name=opts.name or "single")
    elif opts.policy == "multi-random":
        suite = gen_multi_random(pool, opts.k, opts.count, seed=opts.seed,
                                 name=opts.name)
    else:
        graph = load_graph(opts.nodes, opts.edges)
        suite = gen_multi_related(graph, pool, opts.k, opts.count,
                                  radius=opts.r, seed=opts.seed, name=opts.name)
    write_suite(suite, out)
    print(f"wrote {len(suite.queries)} queries ({suite.name}) to {out}")
    return 0


def _run_search(args) -> int:
    opts = _merge_config(args.parser, args,
                         defaults={"force": False, "r": 2, "mode": "any", "top": 10},
                         required=("nodes", "edges", "query"))
    config = IndexConfig(radius=opts.r, match_mode=opts.mode, max_results=opts.top)
    graph = load_graph(opts.nodes, opts.edges)
    index = build_index(graph, config)
    result = search(index, opts.query, config)
    for hit in result.hits:
        print(f"{hit.center}\t{','.join(hit.matched)}\t{hit.member_count}")
    return 0


def _split_csv_flag(raw, label: str) -> list[str]:
    if isinstance(raw, (list, tuple)):
        parts = [str(p) for p in raw]
    else:
        parts = [p.strip() for p in str(raw).split(",")]
    parts = [p for p in parts if p]
    if not parts:
        raise ConfigError(f"--{label} must name at least one value")
    return parts


def _run_bench(args) -> int:
    opts = _merge_config(args.parser, args,
                         defaults={"force": False, "seed": 0,
                                   "scales": ",".join(str(s) for s in DEFAULT_SCALES),
                                   "r": 2, "mode": "any", "top": 10,
                                   "reps": 3, "warmup": 1,
                                   "synth_vocab": None, "synth_kw_per_node": None,
                                   "synth_mean_degree": None, "synth_zipf": 1.0,
                                   "from_nodes": None, "from_edges": None,
                                   "dblp": None},
                         required=("suites", "report", "workdir"))
    report_path = Path(opts.report)
    _claim(report_path, opts.force)

    try:
        scales = tuple(int(s) for s in _split_csv_flag(opts.scales, "scales"))
    except ValueError as exc:
        raise ConfigError(f"--scales must be a comma-separated list of integers: {exc}")
    suites = [read_suite(p) for p in _split_csv_flag(opts.suites, "suites")]

    chosen = [name for name, flag in (("synthetic", opts.synth_vocab),
                                      ("subsample", opts.from_nodes),
                                      ("dblp", opts.dblp)) if flag is not None]
    if len(chosen) != 1:
        args.parser.error(
            "exactly one data source is required: --synth-vocab/--synth-kw-per-node/"
            "--synth-mean-degree, --from-nodes/--from-edges, or --dblp")
    if chosen[0] == "synthetic":
        if opts.synth_kw_per_node is None or opts.synth_mean_degree is None:
            args.parser.error(
                "arguments --synth-kw-per-node and --synth-mean-degree are required "
                "with --synth-vocab")
        source = SyntheticSource(opts.workdir, vocab_size=opts.synth_vocab,
                                 keywords_per_node=opts.synth_kw_per_node,
                                 mean_degree=float(opts.synth_mean_degree),
                                 zipf_exponent=float(opts.synth_zipf), seed=opts.seed)
    elif chosen[0] == "subsample":
        if opts.from_edges is None:
            args.parser.error("argument --from-edges is required with --from-nodes")
        source = SubsampleSource(opts.from_nodes, opts.from_edges, opts.workdir)
    else:
        source = DblpSource(opts.dblp, opts.workdir)

    plan = BenchPlan(
        suites=suites,
        scales=scales,
        index_config=IndexConfig(radius=opts.r, match_mode=opts.mode,
                                 max_results=opts.top),
        repetitions=opts.reps,
        warmup_runs=opts.warmup,
    )
    report = run_bench(plan, source)
    fmt = "csv" if report_path.suffix.lower() == ".csv" else "json"
    render_report(report, report_path, fmt=fmt)
    for warning in report.warnings:
        print(f"warning: {warning}", file=sys.stderr)
    for entry in report.scales:
        suites_ms = ", ".join(
            f"{s.name} {s.total_ns / 1e6:.2f} ms" for s in entry.suites)
        print(f"scale {entry.scale}: graph build {entry.graph_build_ns / 1e6:.2f} ms, "
              f"index build {entry.index_build_ns / 1e6:.2f} ms"
              + (f"; {suites_ms}" if suites_ms else ""))
    print(f"report written to {report_path}")
    return 0


def _print_trends(trends: dict) -> None:
    print("build ratios (consecutive scales, ideal 2.0):")
    for row in trends["build_ratios"]:
        ratio = row["ratio"]
        if ratio is None:
            print(f"  {row['from_scale']} -> {row['to_scale']}: n/a (zero base)")
        else:
            print(f"  {row['from_scale']} -> {row['to_scale']}: {ratio:.3f} "
                  f"(deviation {row['deviation_from_2']:.3f})")
    print("multi vs single suite totals:")
    if not trends["multi_vs_single"]:
        print("  (no multi/single suite pair found)")
    for row in trends["multi_vs_single"]:
        ratio = row["ratio"]
        shown = "n/a" if ratio is None else f"{ratio:.3f}"
        print(f"  scale {row['scale']}: {row['multi_suite']} / {row['single_suite']}"
              f" = {shown}")
    print("stragglers (query > 10x suite median):")
    if not trends["stragglers"]:
        print("  (none)")
    for row in trends["stragglers"]:
        print(f"  scale {row['scale']} suite {row['suite']} query {row['query_index']}:"
              f" {row['duration_ns']} ns (suite median {row['suite_median_ns']} ns)")


def _run_report(args) -> int:
    opts = _merge_config(args.parser, args,
                         defaults={"force": False, "out": None, "trends": False},
                         required=("in_path",))
    report = read_report(opts.in_path)
    if opts.out is not None:
        out = Path(opts.out)
        _claim(out, opts.force)
        fmt = "csv" if out.suffix.lower() == ".csv" else "json"
        render_report(report, out, fmt=fmt)
        print(f"report written to {out}")
    if opts.trends:
        _print_trends(trend_check(report))
    if opts.out is None and not opts.trends:
        for entry in report.scales:
            line = (f"scale {entry.scale} (effective {entry.effective_scale}): "
                    f"graph build {entry.graph_build_ns} ns, "
                    f"index build {entry.index_build_ns} ns, "
                    f"index size {entry.index_size_bytes} bytes")
            print(line)
            for suite in entry.suites:
                print(f"  suite {suite.name}: total {suite.total_ns} ns over "
                      f"{len(suite.per_query_ns)} queries")
        for warning in report.warnings:
            print(f"warning: {warning}")
    return 0


# --- parser wiring ----------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="lakebench",
        description="Graph keyword-search benchmark suite for heterogeneous data.")
    sub = parser.add_subparsers(dest="command", required=True, metavar="SUBCOMMAND")

    ingest = sub.add_parser("ingest", help="convert raw datasets into node/edge files")
    ingest_sub = ingest.add_subparsers(dest="kind", required=True, metavar="KIND")

    movies = ingest_sub.add_parser("movies", help="movie CSV trio (movies/ratings/tags)")
    movies.add_argument("--movies", default=argparse.SUPPRESS, help="movies.csv path")
    movies.add_argument("--ratings", default=argparse.SUPPRESS, help="ratings.csv path")
    movies.add_argument("--tags", default=argparse.SUPPRESS, help="tags.csv path")
    movies.add_argument("--out", default=argparse.SUPPRESS, help="output directory")
    _add_common(movies)
    movies.set_defaults(func=_run_ingest_movies, parser=movies)

    dblp = ingest_sub.add_parser("dblp", help="bibliography XML")
    dblp.add_argument("--xml", default=argparse.SUPPRESS, help="bibliography XML path")
    dblp.add_argument("--out", default=argparse.SUPPRESS, help="output directory")
    dblp.add_argument("--scale", type=int, default=argparse.SUPPRESS,
                      help="stop after this many records")
    _add_common(dblp)
    dblp.set_defaults(func=_run_ingest_dblp, parser=dblp)

    apache = ingest_sub.add_parser("apache", help="web server error log")
    apache.add_argument("--log", default=argparse.SUPPRESS, help="log file path")
    apache.add_argument("--out", default=argparse.SUPPRESS, help="output directory")
    _add_common(apache)
    apache.set_defaults(func=_run_ingest_apache, parser=apache)

    synth = sub.add_parser("synth", help="generate a seeded synthetic graph")
    synth.add_argument("--nodes", type=int, default=argparse.SUPPRESS,
                       help="number of nodes")
    synth.add_argument("--vocab", type=int, default=argparse.SUPPRESS,
                       help="distinct keyword count")
    synth.add_argument("--kw-per-node", type=int, default=argparse.SUPPRESS,
                       help="keywords per node")
    synth.add_argument("--mean-degree", type=float, default=argparse.SUPPRESS,
                       help="target mean degree")
    synth.add_argument("--zipf", type=float, default=argparse.SUPPRESS,
                       help="keyword popularity exponent (default 1.0)")
    synth.add_argument("--out", default=argparse.SUPPRESS, help="output directory")
    _add_common(synth, seed=True)
    synth.set_defaults(func=_run_synth, parser=synth)

    sample = sub.add_parser("sample", help="first-N subsample of node/edge files")
    sample.add_argument("--nodes", default=argparse.SUPPRESS, help="node.csv path")
    sample.add_argument("--edges", default=argparse.SUPPRESS, help="edge.csv path")
    sample.add_argument("--scale", type=int, default=argparse.SUPPRESS,
                        help="number of nodes to keep")
    sample.add_argument("--out", default=argparse.SUPPRESS, help="output directory")
    _add_common(sample)
    sample.set_defaults(func=_run_sample, parser=sample)

    queries = sub.add_parser("queries", help="generate a query suite from a corpus")
    queries.add_argument("--nodes", default=argparse.SUPPRESS, help="node.csv path")
    queries.add_argument("--edges", default=argparse.SUPPRESS,
                         help="edge.csv path (multi-related only)")
    queries.add_argument("--policy", default=argparse.SUPPRESS,
                         choices=("single", "multi-random", "multi-related"),
                         help="suite policy")
    queries.add_argument("--count", type=int, default=argparse.SUPPRESS,
                         help="number of queries")
    queries.add_argument("--k", type=int, default=argparse.SUPPRESS,
                         help="keywords per query (multi policies)")
    queries.add_argument("--r", type=int, default=argparse.SUPPRESS,
                         help="co-occurrence radius for multi-related (default 2)")
    queries.add_argument("--cutoff", type=float, default=argparse.SUPPRESS,
                         help="pool cutoff fraction (default 0.05)")
    queries.add_argument("--name", default=argparse.SUPPRESS, help="suite name")
    queries.add_argument("--out", default=argparse.SUPPRESS, help="suite file path")
    _add_common(queries, seed=True)
    queries.set_defaults(func=_run_queries, parser=queries)

    search_p = sub.add_parser("search", help="run one keyword query against a graph")
    search_p.add_argument("--nodes", default=argparse.SUPPRESS, help="node.csv path")
    search_p.add_argument("--edges", default=argparse.SUPPRESS, help="edge.csv path")
    search_p.add_argument("--query", default=argparse.SUPPRESS,
                          help="space-separated keywords")
    search_p.add_argument("--r", type=int, default=argparse.SUPPRESS,
                          help="subgraph radius (default 2)")
    search_p.add_argument("--mode", choices=("any", "all"), default=argparse.SUPPRESS,
                          help="match mode (default any)")
    search_p.add_argument("--top", type=int, default=argparse.SUPPRESS,
                          help="max hits to print (default 10)")
    _add_common(search_p)
    search_p.set_defaults(func=_run_search, parser=search_p)

    bench = sub.add_parser("bench", help="run a scale-factor sweep")
    bench.add_argument("--scales", default=argparse.SUPPRESS,
                       help="comma-separated scales (default "
                            + ",".join(str(s) for s in DEFAULT_SCALES) + ")")
    bench.add_argument("--suites", default=argparse.SUPPRESS,
                       help="comma-separated suite files")
    bench.add_argument("--report", default=argparse.SUPPRESS,
                       help="report output path (.csv for CSV, else JSON)")
    bench.add_argument("--workdir", default=argparse.SUPPRESS,
                       help="directory for per-scale datasets (reused as a cache)")
    bench.add_argument("--synth-vocab", type=int, default=argparse.SUPPRESS,
                       help="synthetic source: vocabulary size")
    bench.add_argument("--synth-kw-per-node", type=int, default=argparse.SUPPRESS,
                       help="synthetic source: keywords per node")
    bench.add_argument("--synth-mean-degree", type=float, default=argparse.SUPPRESS,
                       help="synthetic source: mean degree")
    bench.add_argument("--synth-zipf", type=float, default=argparse.SUPPRESS,
                       help="synthetic source: popularity exponent (default 1.0)")
    bench.add_argument("--from-nodes", default=argparse.SUPPRESS,
                       help="subsample source: node.csv path")
    bench.add_argument("--from-edges", default=argparse.SUPPRESS,
                       help="subsample source: edge.csv path")
    bench.add_argument("--dblp", default=argparse.SUPPRESS,
                       help="bibliography source: XML path")
    bench.add_argument("--r", type=int, default=argparse.SUPPRESS,
                       help="index radius (default 2)")
    bench.add_argument("--mode", choices=("any", "all"), default=argparse.SUPPRESS,
                       help="match mode (default any)")
    bench.add_argument("--top", type=int, default=argparse.SUPPRESS,
                       help="max results per query (default 10)")
    bench.add_argument("--reps", type=int, default=argparse.SUPPRESS,
                       help="timed repetitions per query (default 3)")
    bench.add_argument("--warmup", type=int, default=argparse.SUPPRESS,
                       help="untimed warmup passes (default 1)")
    _add_common(bench, seed=True)
    bench.set_defaults(func=_run_bench, parser=bench)

    report_p = sub.add_parser("report", help="inspect or convert a bench report")
    report_p.add_argument("--in", dest="in_path", default=argparse.SUPPRESS,
                          help="report file (JSON or CSV)")
    report_p.add_argument("--out", default=argparse.SUPPRESS,
                          help="convert to this path (.csv for CSV, else JSON)")
    report_p.add_argument("--trends", action="store_true", default=argparse.SUPPRESS,
                          help="print build ratios, multi/single ratios, stragglers")
    _add_common(report_p)
    report_p.set_defaults(func=_run_report, parser=report_p)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except SystemExit as exc:
        code = exc.code
        if code is None:
            return 0
        return code if isinstance(code, int) else 2
    except (LakebenchError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def entrypoint() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entrypoint()
