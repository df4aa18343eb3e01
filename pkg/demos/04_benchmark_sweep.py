"""A scale-factor benchmark sweep, end to end.

The harness doubles the dataset size step by step and, at each scale,
times three phases separately: loading the graph, building the keyword
index, and running each query suite (median of repeated passes, after
untimed warmups). trend_check then reads the report back out: build
times should roughly double with the data (near-linear growth),
multi-keyword suites should cost more than single-keyword ones, and any
query running 10x over its suite median gets flagged as a straggler.

Run from the repository root:  python3 demos/04_benchmark_sweep.py
"""
from pathlib import Path

from lakebench import (
    BenchPlan,
    IndexConfig,
    SyntheticSource,
    build_pool,
    compute_frequencies,
    gen_multi_random,
    gen_single,
    read_report,
    render_report,
    run_bench,
    trend_check,
)

OUT = Path(__file__).parent / "output" / "bench"
SCALES = (500, 1000, 2000, 4000)

source = SyntheticSource(OUT / "data", vocab_size=300, keywords_per_node=3,
                         mean_degree=2.0, seed=7)

# Suites come from the smallest scale's corpus; the same query files are
# reused at every scale, exactly like a fixed benchmark workload.
nodes, _, _ = source.materialize(SCALES[0])
pool = build_pool(compute_frequencies(nodes), cutoff_fraction=0.05)
suites = [
    gen_single(pool, count=10, seed=7),
    gen_multi_random(pool, k=5, count=10, seed=7),
]

plan = BenchPlan(suites=suites, scales=SCALES,
                 index_config=IndexConfig(radius=2, match_mode="any"),
                 repetitions=3, warmup_runs=1)

report = run_bench(plan, source)
print("sweep finished; per-scale timings:")
for entry in report.scales:
    print(f"  scale {entry.scale}: graph {entry.graph_build_ns / 1e6:7.2f} ms, "
          f"index {entry.index_build_ns / 1e6:7.2f} ms, "
          f"index size {entry.index_size_bytes / 1024:.0f} KiB")
    for suite in entry.suites:
        print(f"    {suite.name:14s} total {suite.total_ns / 1e6:7.2f} ms "
              f"over {len(suite.per_query_ns)} queries")

trends = trend_check(report)
print("\nbuild-time ratios between consecutive scales (2.0 = perfectly linear):")
for row in trends["build_ratios"]:
    print(f"  {row['from_scale']:>5} -> {row['to_scale']:<5} "
          f"ratio {row['ratio']:.2f} (deviation {row['deviation_from_2']:.2f})")

print("\nmulti-keyword cost relative to single-keyword, per scale:")
for row in trends["multi_vs_single"]:
    print(f"  scale {row['scale']:>5}: {row['multi_suite']} / "
          f"{row['single_suite']} = {row['ratio']:.2f}")

flagged = trends["stragglers"]
print(f"\nstragglers (>10x suite median): "
      f"{flagged if flagged else 'none this run'}")

# Reports round-trip as canonical JSON; CSV holds the flat timing table.
render_report(report, OUT / "report.json", fmt="json")
render_report(report, OUT / "report.csv", fmt="csv")
reloaded = read_report(OUT / "report.json")
assert reloaded.scales == report.scales
print(f"\nwrote {OUT / 'report.json'} and {OUT / 'report.csv'}")
