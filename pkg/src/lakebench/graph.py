"""Unified graph model: keyword-bag nodes, undirected edges, hop-bounded traversal.

The on-disk formats are two UTF-8 text files with LF line endings:

* node file: one node per line, ``<decimal id>,<kw1 kw2 ...>``
* edge file: one edge per line, ``<decimal id>,<decimal id>``

Node ids in a file may be sparse; after loading they are remapped to dense
0-based ids in file order (the original ids are kept on the graph). Saving
always writes the dense form, node lines sorted by id and each undirected
edge written once with the smaller id first.
"""
from __future__ import annotations

import logging
import string
from collections import deque
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Iterator

from .errors import ParseError, ReferentialIntegrityError

logger = logging.getLogger(__name__)

_STRIP_CHARS = string.punctuation + string.whitespace


def normalize_keyword(token: str) -> str:
    """Lowercase a token and strip surrounding punctuation and whitespace.

    Returns the empty string when nothing survives (e.g. ``"--"``).
    Idempotent: normalizing an already-normalized token is a no-op.
    """
    return token.lower().strip(_STRIP_CHARS)


def normalize_text(text: str) -> list[str]:
    """Split on whitespace and normalize each token, dropping empty results."""
    out = []
    for tok in text.split():
        norm = normalize_keyword(tok)
        if norm:
            out.append(norm)
    return out


@dataclass(frozen=True)
class RadiusSubgraph:
    """A center node plus every node within ``radius`` hops of it."""

    center: int
    radius: int
    members: tuple[int, ...]  # sorted, always contains center

    @property
    def member_count(self) -> int:
        return len(self.members)


@dataclass
class DataGraph:
    """Undirected graph whose nodes carry ordered keyword bags.

    Node ids are dense 0-based ints; ``external_ids[i]`` remembers the id
    node ``i`` had in the source file (identical to ``i`` unless the file
    was sparse). Instances are treated as immutable after construction and
    are safe to share across readers.
    """

    keywords: list[list[str]]
    adjacency: list[set[int]]
    external_ids: list[int] = field(default_factory=list, compare=False, repr=False)

    def __post_init__(self):
        if not self.external_ids:
            self.external_ids = list(range(len(self.keywords)))

    @classmethod
    def from_parts(
        cls,
        keyword_bags: Iterable[Iterable[str]],
        edges: Iterable[tuple[int, int]],
        external_ids: list[int] | None = None,
    ) -> "DataGraph":
        """Build a graph from keyword bags and an edge list.

        Duplicate and reversed-duplicate edges collapse to one undirected
        edge; self-loops and out-of-range endpoints raise ``ValueError``.
        """
        bags = [list(bag) for bag in keyword_bags]
        n = len(bags)
        adjacency: list[set[int]] = [set() for _ in range(n)]
        for a, b in edges:
            if a == b:
                raise ValueError(f"self-loop edge on node {a}")
            if not (0 <= a < n and 0 <= b < n):
                raise ValueError(f"edge ({a},{b}) references a node outside 0..{n - 1}")
            adjacency[a].add(b)
            adjacency[b].add(a)
        return cls(keywords=bags, adjacency=adjacency, external_ids=external_ids or [])

    @property
    def node_count(self) -> int:
        return len(self.keywords)

    @property
    def edge_count(self) -> int:
        return sum(len(s) for s in self.adjacency) // 2

    def neighbors(self, v: int) -> list[int]:
        """Sorted neighbor list of ``v``."""
        self._check_node(v)
        return sorted(self.adjacency[v])

    def degree(self, v: int) -> int:
        self._check_node(v)
        return len(self.adjacency[v])

    def edges(self) -> list[tuple[int, int]]:
        """All undirected edges, each once as (smaller, larger), sorted."""
        out = []
        for a, nbrs in enumerate(self.adjacency):
            for b in nbrs:
                if a < b:
                    out.append((a, b))
        out.sort()
        return out

    def empty_keyword_nodes(self) -> list[int]:
        """Ids of nodes whose keyword bag is empty (legal but worth knowing)."""
        return [v for v, bag in enumerate(self.keywords) if not bag]

    def validate(self) -> None:
        """Check structural invariants; raises ``ValueError`` on violation."""
        n = self.node_count
        if len(self.adjacency) != n:
            raise ValueError("adjacency size does not match node count")
        for v, nbrs in enumerate(self.adjacency):
            for u in nbrs:
                if not (0 <= u < n):
                    raise ValueError(f"adjacency of {v} references unknown node {u}")
                if u == v:
                    raise ValueError(f"self-loop on node {v}")
                if v not in self.adjacency[u]:
                    raise ValueError(f"asymmetric edge ({v},{u})")

    def _check_node(self, v: int) -> None:
        if not (0 <= v < self.node_count):
            raise ValueError(f"unknown node id {v}")


def iter_node_lines(nodes_file) -> Iterator[tuple[int, int, list[str]]]:
    """Yield (1-based line number, external id, raw keyword tokens) per node line."""
    path = Path(nodes_file)
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.rstrip("\n").rstrip("\r")
            if not line.strip():
                raise ParseError(path, "blank node line", lineno)
            head, sep, rest = line.partition(",")
            if not sep:
                raise ParseError(path, "node line has no ',' after the id", lineno)
            try:
                ext_id = int(head)
            except ValueError:
                raise ParseError(path, f"node id {head!r} is not an integer", lineno) from None
            if ext_id < 0:
                raise ParseError(path, f"node id {ext_id} is negative", lineno)
            yield lineno, ext_id, rest.split()


def load_graph(nodes_file, edges_file) -> DataGraph:
    """Load a graph from node/edge files.

    Node file order determines the dense internal ids. Duplicate edge lines
    (in either direction) collapse; self-loops and edges naming unknown ids
    are errors.
    """
    nodes_path = Path(nodes_file)
    edges_path = Path(edges_file)

    bags: list[list[str]] = []
    external_ids: list[int] = []
    id_map: dict[int, int] = {}
    for lineno, ext_id, tokens in iter_node_lines(nodes_path):
        if ext_id in id_map:
            raise ParseError(nodes_path, f"duplicate node id {ext_id}", lineno)
        id_map[ext_id] = len(bags)
        external_ids.append(ext_id)
        bags.append(tokens)

    adjacency: list[set[int]] = [set() for _ in bags]
    with open(edges_path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.rstrip("\n").rstrip("\r")
            if not line.strip():
                raise ParseError(edges_path, "blank edge line", lineno)
            parts = line.split(",")
            if len(parts) != 2:
                raise ParseError(edges_path, "edge line must be '<id>,<id>'", lineno)
            try:
                ea, eb = int(parts[0]), int(parts[1])
            except ValueError:
                raise ParseError(edges_path, f"edge ids {line!r} are not integers", lineno) from None
            for ext in (ea, eb):
                if ext not in id_map:
                    raise ReferentialIntegrityError(
                        f"{edges_path}:{lineno}: edge references unknown node id {ext}",
                        offending_id=ext,
                    )
            if ea == eb:
                raise ParseError(edges_path, f"self-loop edge on node id {ea}", lineno)
            a, b = id_map[ea], id_map[eb]
            adjacency[a].add(b)
            adjacency[b].add(a)

    graph = DataGraph(keywords=bags, adjacency=adjacency, external_ids=external_ids)
    graph.validate()
    empty = graph.empty_keyword_nodes()
    if empty:
        logger.info("loaded %s: %d node(s) with empty keyword bags", nodes_path, len(empty))
    return graph


def save_graph(graph: DataGraph, nodes_file, edges_file) -> None:
    """Write a graph in canonical form: dense ids, sorted lines, LF endings.

    ``load_graph(save_graph(g))`` reproduces ``g`` exactly, and saving the
    reloaded graph is byte-identical.
    """
    graph.validate()
    nodes_path = Path(nodes_file)
    edges_path = Path(edges_file)
    with open(nodes_path, "w", encoding="utf-8", newline="\n") as fh:
        for v, bag in enumerate(graph.keywords):
            fh.write(f"{v},{' '.join(bag)}\n")
    with open(edges_path, "w", encoding="utf-8", newline="\n") as fh:
        for a, b in graph.edges():
            fh.write(f"{a},{b}\n")


def radius_subgraph(graph: DataGraph, center: int, r: int) -> RadiusSubgraph:
    """All nodes within ``r`` hops of ``center``, by breadth-first hop counting."""
    graph._check_node(center)
    if r < 0:
        raise ValueError(f"radius must be >= 0, got {r}")
    seen = {center}
    frontier = deque([(center, 0)])
    while frontier:
        v, dist = frontier.popleft()
        if dist == r:
            continue
        for u in graph.adjacency[v]:
            if u not in seen:
                seen.add(u)
                frontier.append((u, dist + 1))
    return RadiusSubgraph(center=center, radius=r, members=tuple(sorted(seen)))


def hop_distance(graph: DataGraph, a: int, b: int) -> int | None:
    """Shortest-path length in edges between ``a`` and ``b``; None if unreachable."""
    graph._check_node(a)
    graph._check_node(b)
    if a == b:
        return 0
    seen = {a}
    frontier = deque([(a, 0)])
    while frontier:
        v, dist = frontier.popleft()
        for u in graph.adjacency[v]:
            if u == b:
                return dist + 1
            if u not in seen:
                seen.add(u)
                frontier.append((u, dist + 1))
    return None
