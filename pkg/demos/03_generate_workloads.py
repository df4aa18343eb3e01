"""Generating query workloads from corpus statistics.

Benchmark queries should resemble what users actually type: frequent
terms. All three policies sample from a keyword pool, the top slice of
the corpus frequency table (default: the most frequent 5% of distinct
keywords). SINGLE draws one keyword per query, MULTI-RANDOM draws k
independent ones, and MULTI-RELATED walks the graph so that consecutive
keywords in a query co-occur within r hops, like a coherent topic would.

Run from the repository root:  python3 demos/03_generate_workloads.py
"""
from pathlib import Path

from lakebench import (
    SynthConfig,
    build_pool,
    compute_frequencies,
    gen_multi_random,
    gen_multi_related,
    gen_single,
    generate_synthetic,
    load_graph,
    read_suite,
    write_suite,
)

OUT = Path(__file__).parent / "output" / "workloads"
CORPUS = OUT / "corpus"

generate_synthetic(
    SynthConfig(node_count=400, vocab_size=120, keywords_per_node=3,
                mean_degree=2.0, seed=11),
    CORPUS,
)
graph = load_graph(CORPUS / "node.csv", CORPUS / "edge.csv")

table = compute_frequencies(CORPUS / "node.csv")
print(f"corpus: {graph.node_count} nodes, {table.distinct_count} distinct keywords, "
      f"{table.total_tokens} tokens")
print("top of the frequency table:")
for kw, count in table.entries[:5]:
    print(f"  {kw:8s} x{count}")

pool = build_pool(table, cutoff_fraction=0.10)
print(f"\npool at 10% cutoff: {len(pool)} keywords "
      f"(ceil(0.10 x {table.distinct_count}))")

single = gen_single(pool, count=5, seed=3)
print(f"\nSINGLE suite (5 queries, seed 3): {[q[0] for q in single.queries]}")

multi = gen_multi_random(pool, k=4, count=3, seed=3)
print(f"\nMULTI-RANDOM suite (k=4, 3 queries, seed 3):")
for q in multi.queries:
    print(f"  {q}")
print("every keyword comes from the pool; no repeats inside a query")

related = gen_multi_related(graph, pool, k=4, count=3, radius=2, seed=3)
print("\nMULTI-RELATED suite (k=4, r=2): consecutive keywords co-occur "
      "within 2 hops")
for q in related.queries:
    print(f"  {q}")
print(f"walk restarts (query, position): {related.provenance['restarts'] or 'none'}")
print(f"short queries: {related.provenance['short_queries'] or 'none'}")

# Suites persist as plain text plus a JSON provenance sidecar.
OUT.mkdir(parents=True, exist_ok=True)
suite_path = OUT / "related4.txt"
write_suite(related, suite_path)
reloaded = read_suite(suite_path)
assert reloaded.queries == related.queries
print(f"\nwrote {suite_path} and {suite_path.stem}.meta.json; reloaded intact")
print(suite_path.read_text(), end="")
