"""Scale-factor benchmark harness.

For each scale in a plan the harness materializes node/edge files from a
data source (untimed), times graph load and index build separately, then
runs every query suite: warmup passes make no clock calls, and each timed
pass brackets exactly one search with two clock reads. The per-query figure
is the median over repetitions; a suite's total is the sum of its per-query
medians. Reports serialize to canonical JSON (full fidelity) or a flat CSV
(timings only) and are written atomically so an interrupted sweep never
leaves a corrupt report behind.
"""
from __future__ import annotations

import csv
import importlib.metadata
import io
import json
import os
import platform
import statistics
import time
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path

from .engine import IndexConfig, build_index, search
from .errors import ConfigError
from .graph import load_graph
from .ingest import REPORT_NAME, ingest_dblp, subsample
from .synth import SynthConfig, generate_synthetic
from .workload import QuerySuite

DEFAULT_SCALES = (2000, 4000, 8000, 16000, 32000, 64000)
STRAGGLER_FACTOR = 10.0

_METRIC_ROWS = ("_graph_build", "_index_build")


@dataclass(frozen=True)
class SuiteTiming:
    """Timings of one suite at one scale."""

    name: str
    total_ns: int
    per_query_ns: tuple[int, ...]
    mean_query_len: float | None = None  # None when loaded from CSV

    def __post_init__(self):
        if self.total_ns != sum(self.per_query_ns):
            raise ValueError("suite total must equal the sum of per-query durations")


@dataclass(frozen=True)
class ScaleResult:
    scale: int
    effective_scale: int
    graph_build_ns: int
    index_build_ns: int
    index_size_bytes: int
    suites: tuple[SuiteTiming, ...]


@dataclass
class BenchReport:
    environment: dict
    scales: list[ScaleResult]
    warnings: list[str] = field(default_factory=list)


@dataclass
class BenchPlan:
    """What to run: scales, suites, index knobs, repetition policy."""

    suites: list[QuerySuite]
    scales: tuple[int, ...] = DEFAULT_SCALES
    index_config: IndexConfig = field(default_factory=IndexConfig)
    repetitions: int = 3
    warmup_runs: int = 1

    def __post_init__(self):
        self.scales = tuple(self.scales)
        if not self.scales:
            raise ConfigError("plan needs at least one scale")
        if any(s < 1 for s in self.scales):
            raise ConfigError("scales must be >= 1")
        if list(self.scales) != sorted(set(self.scales)):
            raise ConfigError(f"scales must be strictly ascending, got {self.scales}")
        if self.repetitions < 1:
            raise ConfigError(f"repetitions must be >= 1, got {self.repetitions}")
        if self.warmup_runs < 0:
            raise ConfigError(f"warmup_runs must be >= 0, got {self.warmup_runs}")
        names = [s.name for s in self.suites]
        if len(set(names)) != len(names):
            raise ConfigError(f"suite names must be unique, got {names}")
        for name in names:
            if not name or name.startswith("_"):
                raise ConfigError(f"invalid suite name {name!r}")


class SyntheticSource:
    """Materializes seeded synthetic corpora, one directory per scale.

    Existing files for a scale are reused, so repeated sweeps over the same
    workdir skip generation.
    """

    def __init__(
        self,
        workdir,
        vocab_size: int,
        keywords_per_node: int,
        mean_degree: float,
        zipf_exponent: float = 1.0,
        seed: int = 0,
    ):
        self.workdir = Path(workdir)
        self.vocab_size = vocab_size
        self.keywords_per_node = keywords_per_node
        self.mean_degree = mean_degree
        self.zipf_exponent = zipf_exponent
        self.seed = seed

    def materialize(self, scale: int) -> tuple[Path, Path, int]:
        out = self.workdir / f"scale_{scale}"
        nodes, edges = out / "node.csv", out / "edge.csv"
        if not (nodes.exists() and edges.exists()):
            config = SynthConfig(
                node_count=scale,
                vocab_size=self.vocab_size,
                keywords_per_node=self.keywords_per_node,
                mean_degree=self.mean_degree,
                zipf_exponent=self.zipf_exponent,
                seed=self.seed,
            )
            generate_synthetic(config, out)
        return nodes, edges, scale


class SubsampleSource:
    """First-N subsamples of a fixed node/edge pair, one directory per scale."""

    def __init__(self, nodes_file, edges_file, workdir):
        self.nodes_file = Path(nodes_file)
        self.edges_file = Path(edges_file)
        self.workdir = Path(workdir)

    def materialize(self, scale: int) -> tuple[Path, Path, int]:
        out = self.workdir / f"scale_{scale}"
        report = subsample(self.nodes_file, self.edges_file, scale, out)
        return out / "node.csv", out / "edge.csv", report.nodes_written


class DblpSource:
    """First-N bibliography ingests, one directory per scale, cached."""

    def __init__(self, xml_file, workdir):
        self.xml_file = Path(xml_file)
        self.workdir = Path(workdir)

    def materialize(self, scale: int) -> tuple[Path, Path, int]:
        out = self.workdir / f"scale_{scale}"
        nodes, edges = out / "node.csv", out / "edge.csv"
        report_path = out / REPORT_NAME
        if nodes.exists() and edges.exists() and report_path.exists():
            with open(report_path, encoding="utf-8") as fh:
                records_read = json.load(fh)["records_read"]
        else:
            records_read = ingest_dblp(self.xml_file, out, scale=scale).records_read
        return nodes, edges, records_read


def make_environment() -> dict:
    try:
        version = importlib.metadata.version("lakebench")
    except importlib.metadata.PackageNotFoundError:
        version = "unknown"
    return {
        "host": platform.node(),
        "platform": platform.platform(),
        "python": platform.python_version(),
        "timestamp": datetime.now(timezone.utc).isoformat(),
        "tool_version": version,
    }


def run_bench(plan: BenchPlan, source, clock=None, report_path=None) -> BenchReport:
    """Execute the plan against a data source.

    ``clock`` must be a zero-argument callable returning integer
    nanoseconds (defaults to ``time.perf_counter_ns``); tests inject a fake
    one to pin down phase isolation. Exactly two clock calls bracket each
    timed region, and warmup passes call the clock not at all.
    """
    clock = clock or time.perf_counter_ns
    warnings: list[str] = []
    results: list[ScaleResult] = []
    for scale in plan.scales:
        nodes_path, edges_path, effective = source.materialize(scale)
        if effective != scale:
            warnings.append(f"scale {scale} clamped to {effective} by the data source")

        t0 = clock()
        graph = load_graph(nodes_path, edges_path)
        t1 = clock()
        t2 = clock()
        index = build_index(graph, plan.index_config)
        t3 = clock()

        suite_rows = []
        for suite in plan.suites:
            for _ in range(plan.warmup_runs):
                for query in suite.queries:
                    search(index, query, plan.index_config)
            samples: list[list[int]] = [[] for _ in suite.queries]
            for _ in range(plan.repetitions):
                for qi, query in enumerate(suite.queries):
                    a = clock()
                    search(index, query, plan.index_config)
                    b = clock()
                    samples[qi].append(b - a)
            per_query = tuple(int(round(statistics.median(s))) for s in samples)
            suite_rows.append(
                SuiteTiming(
                    name=suite.name,
                    total_ns=sum(per_query),
                    per_query_ns=per_query,
                    mean_query_len=suite.mean_query_len,
                )
            )
        results.append(
            ScaleResult(
                scale=scale,
                effective_scale=effective,
                graph_build_ns=t1 - t0,
                index_build_ns=t3 - t2,
                index_size_bytes=index.size_bytes,
                suites=tuple(suite_rows),
            )
        )
    report = BenchReport(environment=make_environment(), scales=results, warnings=warnings)
    if report_path is not None:
        render_report(report, report_path)
    return report


def to_json(report: BenchReport) -> str:
    doc = {
        "environment": report.environment,
        "warnings": report.warnings,
        "scales": [
            {
                "scale": r.scale,
                "effective_scale": r.effective_scale,
                "graph_build_ns": r.graph_build_ns,
                "index_build_ns": r.index_build_ns,
                "index_size_bytes": r.index_size_bytes,
                "suites": [
                    {
                        "name": s.name,
                        "mean_query_len": s.mean_query_len,
                        "total_ns": s.total_ns,
                        "per_query_ns": list(s.per_query_ns),
                    }
                    for s in r.suites
                ],
            }
            for r in report.scales
        ],
    }
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def from_json(text: str) -> BenchReport:
    doc = json.loads(text)
    scales = [
        ScaleResult(
            scale=r["scale"],
            effective_scale=r["effective_scale"],
            graph_build_ns=r["graph_build_ns"],
            index_build_ns=r["index_build_ns"],
            index_size_bytes=r["index_size_bytes"],
            suites=tuple(
                SuiteTiming(
                    name=s["name"],
                    total_ns=s["total_ns"],
                    per_query_ns=tuple(s["per_query_ns"]),
                    mean_query_len=s["mean_query_len"],
                )
                for s in r["suites"]
            ),
        )
        for r in doc["scales"]
    ]
    return BenchReport(
        environment=doc.get("environment", {}),
        scales=scales,
        warnings=list(doc.get("warnings", [])),
    )


def to_csv(report: BenchReport) -> str:
    """Flat long form: one row per query plus build/index rows per scale.

    The CSV carries timings only; environment, index sizes, and query-length
    metadata live in the JSON form.
    """
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["scale", "suite", "query_index", "duration_ns"])
    for r in report.scales:
        writer.writerow([r.scale, "_graph_build", "", r.graph_build_ns])
        writer.writerow([r.scale, "_index_build", "", r.index_build_ns])
        for s in r.suites:
            for qi, dur in enumerate(s.per_query_ns):
                writer.writerow([r.scale, s.name, qi, dur])
    return buf.getvalue()


def from_csv(text: str) -> BenchReport:
    reader = csv.reader(io.StringIO(text))
    header = next(reader, None)
    if header != ["scale", "suite", "query_index", "duration_ns"]:
        raise ConfigError(f"unexpected CSV header {header}")
    # scale -> {"_graph_build": ns, "_index_build": ns, suites: {name: [ns,...]}}
    order: list[int] = []
    metrics: dict[int, dict[str, int]] = {}
    suites: dict[int, dict[str, list[int]]] = {}
    for row in reader:
        if not row:
            continue
        if len(row) != 4:
            raise ConfigError(f"malformed CSV row {row}")
        scale = int(row[0])
        if scale not in metrics:
            order.append(scale)
            metrics[scale] = {}
            suites[scale] = {}
        name, qi, dur = row[1], row[2], int(row[3])
        if name in _METRIC_ROWS:
            metrics[scale][name] = dur
        else:
            suites[scale].setdefault(name, [])
            per = suites[scale][name]
            if int(qi) != len(per):
                raise ConfigError(
                    f"query rows for suite {name!r} at scale {scale} are not contiguous"
                )
            per.append(dur)
    results = []
    for scale in order:
        got = metrics[scale]
        if set(got) != set(_METRIC_ROWS):
            raise ConfigError(f"scale {scale} is missing build/index rows")
        results.append(
            ScaleResult(
                scale=scale,
                effective_scale=scale,
                graph_build_ns=got["_graph_build"],
                index_build_ns=got["_index_build"],
                index_size_bytes=0,
                suites=tuple(
                    SuiteTiming(
                        name=name,
                        total_ns=sum(per),
                        per_query_ns=tuple(per),
                        mean_query_len=None,
                    )
                    for name, per in suites[scale].items()
                ),
            )
        )
    return BenchReport(environment={}, scales=results, warnings=[])


def render_report(report: BenchReport, path, fmt: str = "json") -> None:
    """Render and write atomically (temp file, then rename)."""
    path = Path(path)
    if fmt == "json":
        payload = to_json(report)
    elif fmt == "csv":
        payload = to_csv(report)
    else:
        raise ConfigError(f"unknown report format {fmt!r}; expected 'json' or 'csv'")
    path.parent.mkdir(parents=True, exist_ok=True)
    tmp = path.with_name(path.name + ".tmp")
    with open(tmp, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(payload)
    os.replace(tmp, path)


def read_report(path) -> BenchReport:
    path = Path(path)
    text = path.read_text(encoding="utf-8")
    if path.suffix.lower() == ".csv":
        return from_csv(text)
    return from_json(text)


def trend_check(report: BenchReport) -> dict:
    """Trend summary: build-time doubling ratios, multi-vs-single ratios,
    and straggler queries exceeding 10x their suite median."""
    if len(report.scales) < 3:
        raise ConfigError(
            f"trend_check needs at least 3 scales, report has {len(report.scales)}"
        )

    build_ratios = []
    for prev, cur in zip(report.scales, report.scales[1:]):
        ratio = cur.graph_build_ns / prev.graph_build_ns if prev.graph_build_ns else None
        build_ratios.append(
            {
                "from_scale": prev.scale,
                "to_scale": cur.scale,
                "ratio": ratio,
                "deviation_from_2": abs(ratio - 2.0) if ratio is not None else None,
            }
        )

    if any(s.mean_query_len is None for r in report.scales for s in r.suites):
        raise ConfigError(
            "suite query lengths are unavailable (CSV-loaded report); "
            "multi-vs-single ratios need the JSON form"
        )
    multi_vs_single = []
    for r in report.scales:
        singles = [s for s in r.suites if s.mean_query_len == 1.0]
        multis = [s for s in r.suites if s.mean_query_len != 1.0]
        if not singles:
            continue
        base = singles[0]
        for m in multis:
            multi_vs_single.append(
                {
                    "scale": r.scale,
                    "single_suite": base.name,
                    "multi_suite": m.name,
                    "ratio": m.total_ns / base.total_ns if base.total_ns else None,
                }
            )

    stragglers = []
    for r in report.scales:
        for s in r.suites:
            if not s.per_query_ns:
                continue
            med = statistics.median(s.per_query_ns)
            for qi, dur in enumerate(s.per_query_ns):
                if dur > STRAGGLER_FACTOR * med:
                    stragglers.append(
                        {
                            "scale": r.scale,
                            "suite": s.name,
                            "query_index": qi,
                            "duration_ns": dur,
                            "suite_median_ns": med,
                        }
                    )

    return {
        "build_ratios": build_ratios,
        "multi_vs_single": multi_vs_single,
        "stragglers": stragglers,
    }
