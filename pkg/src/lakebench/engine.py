"""Keyword index over r-radius subgraphs, with pruned search and ranking.

Index construction materializes, for every node, the set of nodes within
``radius`` hops (its r-radius subgraph), then maps each distinct keyword
occurring inside a subgraph to the sorted list of centers whose subgraph
contains it. Search works purely on those posting lists: a candidate set is
formed by union (ANY) or intersection (ALL), scored, and truncated. The
``visited`` counter reports how many candidate subgraphs were scored, which
is the pruning contract: posting lists keep search from ever touching
subgraphs that match no query keyword.
"""
from __future__ import annotations

import struct
import time
from dataclasses import dataclass, field
from enum import Enum

from .errors import ConfigError, ParseError
from .graph import DataGraph, RadiusSubgraph, normalize_keyword, radius_subgraph

_MAGIC = b"LBIX"
_FORMAT_VERSION = 1


class MatchMode(str, Enum):
    """How multi-keyword queries combine: any keyword suffices, or all must hit."""

    ANY = "any"
    ALL = "all"


@dataclass(frozen=True)
class IndexConfig:
    """Knobs for building and querying a keyword index."""

    radius: int = 2
    match_mode: MatchMode = MatchMode.ANY
    max_results: int = 10

    def __post_init__(self):
        if self.radius < 1:
            raise ConfigError(f"radius must be >= 1, got {self.radius}")
        if self.max_results < 1:
            raise ConfigError(f"max_results must be >= 1, got {self.max_results}")
        if not isinstance(self.match_mode, MatchMode):
            object.__setattr__(self, "match_mode", MatchMode(self.match_mode))


@dataclass(frozen=True)
class Hit:
    """One ranked result: a subgraph center and what it matched."""

    center: int
    matched: tuple[str, ...]  # sorted distinct query keywords found in the subgraph
    member_count: int


@dataclass(frozen=True)
class SearchResult:
    hits: tuple[Hit, ...]
    elapsed_ns: int
    visited: int  # candidate subgraphs scored; the pruning observable


@dataclass
class KeywordIndex:
    """Posting lists plus the per-center subgraphs they point into."""

    radius: int
    postings: dict[str, list[int]] = field(repr=False)
    subgraphs: dict[int, RadiusSubgraph] = field(repr=False)
    build_time_ns: int = 0
    size_bytes: int = 0

    def member_count(self, center: int) -> int:
        return self.subgraphs[center].member_count


def build_index(graph: DataGraph, config: IndexConfig) -> KeywordIndex:
    """Index every node's r-radius subgraph under its distinct keywords.

    ``build_time_ns`` covers subgraph expansion and posting construction
    only; serialization for the size measurement happens afterwards.
    """
    t0 = time.perf_counter_ns()
    postings: dict[str, list[int]] = {}
    subgraphs: dict[int, RadiusSubgraph] = {}
    for center in range(graph.node_count):
        sub = radius_subgraph(graph, center, config.radius)
        subgraphs[center] = sub
        seen: set[str] = set()
        for member in sub.members:
            seen.update(graph.keywords[member])
        for kw in seen:
            postings.setdefault(kw, []).append(center)
    build_time_ns = time.perf_counter_ns() - t0
    # centers are visited in ascending order, so posting lists are born sorted
    index = KeywordIndex(
        radius=config.radius,
        postings=postings,
        subgraphs=subgraphs,
        build_time_ns=build_time_ns,
    )
    index.size_bytes = len(serialize_index(index))
    return index


def _dedupe_keep_order(tokens: list[str]) -> list[str]:
    seen: set[str] = set()
    out = []
    for tok in tokens:
        if tok not in seen:
            seen.add(tok)
            out.append(tok)
    return out


def search(index: KeywordIndex, query, config: IndexConfig) -> SearchResult:
    """Rank subgraph centers against a keyword query.

    ``query`` is a list of keywords (a plain string is split on whitespace
    first). Keywords are normalized and deduplicated; a keyword absent from
    the index contributes an empty posting list, never an error. Ranking:
    most distinct query keywords matched first, then fewer subgraph members
    (tighter subgraphs win), then smaller center id. Ties cannot survive
    all three keys, so result order is fully deterministic.
    """
    t0 = time.perf_counter_ns()
    tokens = query.split() if isinstance(query, str) else list(query)
    terms = _dedupe_keep_order(
        [norm for norm in (normalize_keyword(tok) for tok in tokens) if norm]
    )
    if not terms:
        raise ValueError("query contains no keywords after normalization")

    matched_by_center: dict[int, set[str]]
    if config.match_mode is MatchMode.ALL:
        lists = [index.postings.get(t, []) for t in terms]
        if any(not lst for lst in lists):
            candidates: set[int] = set()
        else:
            lists_sorted = sorted(lists, key=len)
            candidates = set(lists_sorted[0])
            for lst in lists_sorted[1:]:
                candidates &= set(lst)
                if not candidates:
                    break
        full = tuple(sorted(terms))
        matched_by_center = {c: set(full) for c in candidates}
    else:
        matched_by_center = {}
        for term in terms:
            for center in index.postings.get(term, []):
                matched_by_center.setdefault(center, set()).add(term)

    visited = len(matched_by_center)
    scored = sorted(
        matched_by_center.items(),
        key=lambda item: (-len(item[1]), index.member_count(item[0]), item[0]),
    )
    hits = tuple(
        Hit(center=c, matched=tuple(sorted(terms_hit)), member_count=index.member_count(c))
        for c, terms_hit in scored[: config.max_results]
    )
    elapsed_ns = time.perf_counter_ns() - t0
    return SearchResult(hits=hits, elapsed_ns=elapsed_ns, visited=visited)


def index_stats(index: KeywordIndex) -> dict:
    """Summary numbers for reporting: vocabulary, postings and subgraph sizes."""
    total_postings = sum(len(v) for v in index.postings.values())
    count = len(index.subgraphs)
    mean_members = (
        sum(s.member_count for s in index.subgraphs.values()) / count if count else 0.0
    )
    return {
        "distinct_keywords": len(index.postings),
        "total_postings": total_postings,
        "subgraph_count": count,
        "mean_members": mean_members,
        "build_time_ns": index.build_time_ns,
        "size_bytes": index.size_bytes,
    }


def serialize_index(index: KeywordIndex) -> bytes:
    """Pack an index into a self-contained binary blob."""
    parts = [_MAGIC, struct.pack("<HII", _FORMAT_VERSION, index.radius, len(index.postings))]
    parts.append(struct.pack("<Q", index.build_time_ns))
    for kw in sorted(index.postings):
        raw = kw.encode("utf-8")
        centers = index.postings[kw]
        parts.append(struct.pack("<H", len(raw)))
        parts.append(raw)
        parts.append(struct.pack("<I", len(centers)))
        parts.append(struct.pack(f"<{len(centers)}I", *centers))
    parts.append(struct.pack("<I", len(index.subgraphs)))
    for center in sorted(index.subgraphs):
        sub = index.subgraphs[center]
        parts.append(struct.pack("<II", center, len(sub.members)))
        parts.append(struct.pack(f"<{len(sub.members)}I", *sub.members))
    return b"".join(parts)


def deserialize_index(blob: bytes, source: str = "<bytes>") -> KeywordIndex:
    """Inverse of ``serialize_index``; rejects foreign or truncated blobs."""
    view = memoryview(blob)
    pos = 0

    def take(n: int) -> memoryview:
        nonlocal pos
        if pos + n > len(view):
            raise ParseError(source, "truncated index blob")
        chunk = view[pos : pos + n]
        pos += n
        return chunk

    if bytes(take(4)) != _MAGIC:
        raise ParseError(source, "not a keyword index blob")
    version, radius, n_keywords = struct.unpack("<HII", take(10))
    if version != _FORMAT_VERSION:
        raise ParseError(source, f"unsupported index format version {version}")
    (build_time_ns,) = struct.unpack("<Q", take(8))
    postings: dict[str, list[int]] = {}
    for _ in range(n_keywords):
        (kw_len,) = struct.unpack("<H", take(2))
        kw = bytes(take(kw_len)).decode("utf-8")
        (n_centers,) = struct.unpack("<I", take(4))
        postings[kw] = list(struct.unpack(f"<{n_centers}I", take(4 * n_centers)))
    (n_subs,) = struct.unpack("<I", take(4))
    subgraphs: dict[int, RadiusSubgraph] = {}
    for _ in range(n_subs):
        center, n_members = struct.unpack("<II", take(8))
        members = struct.unpack(f"<{n_members}I", take(4 * n_members))
        subgraphs[center] = RadiusSubgraph(center=center, radius=radius, members=members)
    if pos != len(view):
        raise ParseError(source, "trailing bytes after index blob")
    index = KeywordIndex(
        radius=radius, postings=postings, subgraphs=subgraphs, build_time_ns=build_time_ns
    )
    index.size_bytes = len(blob)
    return index


def save_index(index: KeywordIndex, path) -> None:
    with open(path, "wb") as fh:
        fh.write(serialize_index(index))


def load_index(path) -> KeywordIndex:
    with open(path, "rb") as fh:
        return deserialize_index(fh.read(), source=str(path))
