"""Query workload generation from corpus statistics.

A frequency table over the node file's keywords feeds a keyword pool: the
top slice of distinct keywords by occurrence count. Suites draw from that
pool so any suite can be regenerated exactly:

* single: one pool keyword per query, sampled without replacement
* multi-random: k distinct pool keywords per query, seeded draws
* multi-related: k keywords chosen by a greedy neighborhood walk, so that
  consecutive picks co-occur inside some r-radius subgraph; a dead end
  restarts the walk from a fresh seed keyword and records where
"""
from __future__ import annotations

import json
import math
from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import ConfigError, ParseError
from .graph import DataGraph, iter_node_lines, normalize_keyword, radius_subgraph

DEFAULT_CUTOFF_FRACTION = 0.05


@dataclass(frozen=True)
class FrequencyTable:
    """Distinct keywords with occurrence counts, most frequent first.

    Ties break on the keyword itself (ascending) so the order is total.
    """

    entries: tuple[tuple[str, int], ...]
    total_tokens: int

    @property
    def distinct_count(self) -> int:
        return len(self.entries)


@dataclass(frozen=True)
class KeywordPool:
    """The most frequent keywords, in frequency-table order."""

    keywords: tuple[str, ...]
    cutoff_fraction: float

    def __len__(self) -> int:
        return len(self.keywords)

    def __contains__(self, kw: str) -> bool:
        return kw in self.keywords


def _table_from_counter(counts: Counter, total: int) -> FrequencyTable:
    ordered = sorted(counts.items(), key=lambda item: (-item[1], item[0]))
    return FrequencyTable(entries=tuple(ordered), total_tokens=total)


def compute_frequencies(nodes_file) -> FrequencyTable:
    """Count normalized keyword occurrences across a node file.

    A keyword listed twice on one node counts twice.
    """
    counts: Counter = Counter()
    total = 0
    for _, _, tokens in iter_node_lines(nodes_file):
        for tok in tokens:
            norm = normalize_keyword(tok)
            if norm:
                counts[norm] += 1
                total += 1
    return _table_from_counter(counts, total)


def frequencies_from_graph(graph: DataGraph) -> FrequencyTable:
    counts: Counter = Counter()
    total = 0
    for bag in graph.keywords:
        for tok in bag:
            norm = normalize_keyword(tok)
            if norm:
                counts[norm] += 1
                total += 1
    return _table_from_counter(counts, total)


def build_pool(
    table: FrequencyTable, cutoff_fraction: float = DEFAULT_CUTOFF_FRACTION
) -> KeywordPool:
    """The top ``max(1, ceil(fraction * distinct))`` keywords by frequency."""
    if not (0.0 < cutoff_fraction <= 1.0):
        raise ConfigError(f"cutoff_fraction must be in (0, 1], got {cutoff_fraction}")
    if table.distinct_count == 0:
        raise ConfigError("frequency table is empty; nothing to sample from")
    take = max(1, math.ceil(cutoff_fraction * table.distinct_count))
    return KeywordPool(
        keywords=tuple(kw for kw, _ in table.entries[:take]),
        cutoff_fraction=cutoff_fraction,
    )


@dataclass
class QuerySuite:
    """A named list of keyword queries plus how they were produced."""

    name: str
    queries: list[list[str]]
    provenance: dict = field(default_factory=dict)

    @property
    def mean_query_len(self) -> float:
        if not self.queries:
            return 0.0
        return sum(len(q) for q in self.queries) / len(self.queries)


def gen_single(pool: KeywordPool, count: int, seed: int = 0, name: str = "single") -> QuerySuite:
    """One-keyword queries sampled from the pool without replacement."""
    if count < 0:
        raise ConfigError(f"count must be >= 0, got {count}")
    if count > len(pool):
        raise ConfigError(
            f"cannot sample {count} distinct keywords from a pool of {len(pool)}; "
            f"lower the count or raise the cutoff fraction"
        )
    rng = np.random.default_rng(seed)
    queries: list[list[str]] = []
    if count:
        picks = rng.choice(len(pool), size=count, replace=False)
        queries = [[pool.keywords[i]] for i in picks]
    return QuerySuite(
        name=name,
        queries=queries,
        provenance={
            "policy": "single",
            "seed": seed,
            "cutoff_fraction": pool.cutoff_fraction,
            "pool_size": len(pool),
        },
    )


def gen_multi_random(
    pool: KeywordPool, k: int, count: int, seed: int = 0, name: str | None = None
) -> QuerySuite:
    """k-keyword queries; within a query keywords are distinct pool draws."""
    if count < 0:
        raise ConfigError(f"count must be >= 0, got {count}")
    if k < 1:
        raise ConfigError(f"k must be >= 1, got {k}")
    if k > len(pool):
        raise ConfigError(
            f"cannot draw {k} distinct keywords from a pool of {len(pool)}; "
            f"lower k or raise the cutoff fraction"
        )
    rng = np.random.default_rng(seed)
    queries = []
    for _ in range(count):
        picks = rng.choice(len(pool), size=k, replace=False)
        queries.append([pool.keywords[i] for i in picks])
    return QuerySuite(
        name=name or f"multi{k}-random",
        queries=queries,
        provenance={
            "policy": "multi-random",
            "seed": seed,
            "cutoff_fraction": pool.cutoff_fraction,
            "k": k,
            "pool_size": len(pool),
        },
    )


def gen_multi_related(
    graph: DataGraph,
    pool: KeywordPool,
    k: int,
    count: int,
    radius: int = 2,
    seed: int = 0,
    name: str | None = None,
) -> QuerySuite:
    """k-keyword queries whose consecutive keywords co-occur within r hops.

    Each query seeds on the most frequent pool keyword not yet used as a
    seed in this suite, then walks: the neighborhood is the union of
    r-radius member sets around every node carrying the current keyword,
    and the next keyword is the most frequent unchosen pool keyword carried
    somewhere in that neighborhood. The walk continues from the new
    keyword. A dead end consumes the next unused seed instead, recording
    ``[query_index, position]`` under ``provenance["restarts"]``; if seeds
    run out mid-query the query stays short and its index lands in
    ``provenance["short_queries"]``.

    The walk is fully determined by the pool order and the graph; ``seed``
    is recorded in provenance for uniformity with the random policies.
    """
    if count < 0:
        raise ConfigError(f"count must be >= 0, got {count}")
    if k < 2:
        raise ConfigError(f"k must be >= 2 for related queries, got {k}")
    if radius < 1:
        raise ConfigError(f"radius must be >= 1, got {radius}")

    carriers: dict[str, list[int]] = {kw: [] for kw in pool.keywords}
    for v, bag in enumerate(graph.keywords):
        seen_here = set()
        for tok in bag:
            norm = normalize_keyword(tok)
            if norm in carriers and norm not in seen_here:
                carriers[norm].append(v)
                seen_here.add(norm)

    member_cache: dict[int, frozenset[int]] = {}

    def members_of(v: int) -> frozenset[int]:
        if v not in member_cache:
            member_cache[v] = frozenset(radius_subgraph(graph, v, radius).members)
        return member_cache[v]

    nbhd_cache: dict[str, frozenset[int]] = {}

    def neighborhood_of(kw: str) -> frozenset[int]:
        if kw not in nbhd_cache:
            acc: set[int] = set()
            for c in carriers[kw]:
                acc |= members_of(c)
            nbhd_cache[kw] = frozenset(acc)
        return nbhd_cache[kw]

    seed_pos = 0  # next pool index to consider as a seed; never rewinds
    restarts: list[list[int]] = []
    short_queries: list[int] = []
    queries: list[list[str]] = []

    for qi in range(count):
        chosen: list[str] = []
        chosen_set: set[str] = set()

        def take_seed() -> str | None:
            nonlocal seed_pos
            while seed_pos < len(pool.keywords):
                cand = pool.keywords[seed_pos]
                seed_pos += 1
                if cand not in chosen_set:
                    return cand
            return None

        current = take_seed()
        if current is None:
            raise ConfigError(
                f"seed keywords exhausted before query {qi}; "
                f"pool of {len(pool)} cannot start {count} queries"
            )
        chosen.append(current)
        chosen_set.add(current)

        while len(chosen) < k:
            nbhd = neighborhood_of(current)
            nxt = None
            for kw in pool.keywords:
                if kw in chosen_set:
                    continue
                if any(c in nbhd for c in carriers[kw]):
                    nxt = kw
                    break
            if nxt is None:
                nxt = take_seed()
                if nxt is None:
                    short_queries.append(qi)
                    break
                restarts.append([qi, len(chosen)])
            chosen.append(nxt)
            chosen_set.add(nxt)
            current = nxt
        queries.append(chosen)

    return QuerySuite(
        name=name or f"multi{k}-related",
        queries=queries,
        provenance={
            "policy": "multi-related",
            "seed": seed,
            "cutoff_fraction": pool.cutoff_fraction,
            "k": k,
            "radius": radius,
            "pool_size": len(pool),
            "restarts": restarts,
            "short_queries": short_queries,
        },
    )


def _meta_path(path: Path) -> Path:
    return path.with_name(path.stem + ".meta.json")


def write_suite(suite: QuerySuite, path) -> None:
    """One query per line, keywords space-separated; sidecar JSON for provenance."""
    path = Path(path)
    for qi, q in enumerate(suite.queries):
        if not q:
            raise ValueError(f"query {qi} is empty; suites cannot contain empty queries")
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for q in suite.queries:
            fh.write(" ".join(q) + "\n")
    meta = {"name": suite.name, "provenance": suite.provenance}
    with open(_meta_path(path), "w", encoding="utf-8", newline="\n") as fh:
        json.dump(meta, fh, indent=2, sort_keys=True)
        fh.write("\n")


def read_suite(path) -> QuerySuite:
    """Inverse of ``write_suite``; the sidecar is optional on read."""
    path = Path(path)
    queries: list[list[str]] = []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.rstrip("\n").rstrip("\r")
            if not line.strip():
                raise ParseError(path, "blank query line", lineno)
            queries.append(line.split())
    name = path.stem
    provenance: dict = {}
    meta = _meta_path(path)
    if meta.exists():
        with open(meta, encoding="utf-8") as fh:
            loaded = json.load(fh)
        name = loaded.get("name", name)
        provenance = loaded.get("provenance", {})
    return QuerySuite(name=name, queries=queries, provenance=provenance)
