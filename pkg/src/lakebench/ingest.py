"""Adapters that turn heterogeneous sources into node/edge files.

Three source formats are supported: movie-rating CSV triples, bibliography
XML, and web-server error logs. Each adapter emits the graph-core file pair
plus ``ingest_report.json`` into its output directory and returns the same
report. A first-N subsampler produces smaller scales from any node/edge
pair. All adapters are deterministic: identical inputs give byte-identical
outputs.
"""
from __future__ import annotations

import csv
import json
import re
import xml.etree.ElementTree as ET
from dataclasses import dataclass, field
from pathlib import Path

from .errors import ConfigError, ParseError
from .graph import DataGraph, normalize_keyword, normalize_text, save_graph

REPORT_NAME = "ingest_report.json"

_YEAR_SUFFIX = re.compile(r"\s*\((\d{4})\)\s*$")
_LEADING_BRACKETS = re.compile(r"^\s*(?:\[[^\]]*\]\s*)+")
_BRACKET_GROUP = re.compile(r"\[([^\]]*)\]")
_CLOCK = re.compile(r"(\d{1,2}):(\d{2})(?::\d{2})?")

# the bibliography record types that carry author/title elements
DBLP_RECORD_TAGS = frozenset(
    ["article", "inproceedings", "proceedings", "book",
     "incollection", "phdthesis", "mastersthesis"]
)


@dataclass
class IngestReport:
    """What an adapter did: counts plus per-record skip reasons."""

    nodes_written: int = 0
    edges_written: int = 0
    records_read: int = 0
    records_skipped: int = 0
    skip_reasons: list[tuple[str, str]] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)

    @property
    def records_accepted(self) -> int:
        return self.records_read - self.records_skipped

    def skip(self, locator: str, reason: str) -> None:
        self.records_skipped += 1
        self.skip_reasons.append((locator, reason))

    def to_dict(self) -> dict:
        return {
            "nodes_written": self.nodes_written,
            "edges_written": self.edges_written,
            "records_read": self.records_read,
            "records_skipped": self.records_skipped,
            "skip_reasons": [list(pair) for pair in self.skip_reasons],
            "notes": list(self.notes),
        }

    def write(self, path) -> None:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            json.dump(self.to_dict(), fh, indent=2, sort_keys=True)
            fh.write("\n")


def _finish(graph: DataGraph, out_dir, report: IngestReport) -> IngestReport:
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    save_graph(graph, out_dir / "node.csv", out_dir / "edge.csv")
    report.nodes_written = graph.node_count
    report.edges_written = graph.edge_count
    report.write(out_dir / REPORT_NAME)
    return report


def _open_csv(path: Path, required: set[str]):
    """DictReader over a CSV file; empty files yield no rows, a present
    header missing required columns is a parse error."""
    fh = open(path, encoding="utf-8", newline="")
    reader = csv.DictReader(fh)
    if reader.fieldnames is None:
        return fh, reader  # zero-byte file: no header, no records
    missing = required - set(reader.fieldnames)
    if missing:
        fh.close()
        raise ParseError(path, f"missing required column(s): {', '.join(sorted(missing))}", 1)
    return fh, reader


def _split_title(title: str) -> tuple[str, str | None]:
    """Separate a movie title from its trailing parenthesized year."""
    m = _YEAR_SUFFIX.search(title)
    if m:
        return title[: m.start()], m.group(1)
    return title, None


def ingest_movies(movies_csv, ratings_csv, tags_csv, out_dir) -> IngestReport:
    """Movie-rating CSVs to a user/movie graph.

    Movie nodes carry genres, the release year, and every tag applied to
    the movie; user nodes carry the title words of each distinct movie the
    user rated or tagged (year suffix excluded). One undirected edge per
    (user, movie) pair with any rating or tag between them.
    """
    movies_csv, ratings_csv, tags_csv = Path(movies_csv), Path(ratings_csv), Path(tags_csv)
    report = IngestReport()

    movie_index: dict[str, int] = {}  # movieId -> node id
    movie_bags: list[list[str]] = []
    movie_titles: dict[str, str] = {}  # movieId -> title base words source

    fh, reader = _open_csv(movies_csv, {"movieId", "title", "genres"})
    with fh:
        for row in reader:
            report.records_read += 1
            locator = f"{movies_csv.name}:{reader.line_num}"
            movie_id = (row.get("movieId") or "").strip()
            title = (row.get("title") or "").strip()
            if not movie_id:
                report.skip(locator, "missing movieId")
                continue
            if movie_id in movie_index:
                report.skip(locator, f"duplicate movieId {movie_id}")
                continue
            base, year = _split_title(title)
            bag: list[str] = []
            genres = (row.get("genres") or "").strip()
            if genres and genres != "(no genres listed)":
                for part in genres.split("|"):
                    bag.extend(normalize_text(part))
            if year:
                bag.append(year)
            movie_index[movie_id] = len(movie_bags)
            movie_bags.append(bag)
            movie_titles[movie_id] = base

    user_index: dict[str, int] = {}  # userId -> order of first appearance
    user_movies: dict[str, list[str]] = {}  # userId -> distinct movieIds, in order
    edges: set[tuple[int, int]] = set()

    def interact(user_id: str, movie_id: str, locator: str, withtag: str | None) -> None:
        report.records_read += 1
        if not user_id or not movie_id:
            report.skip(locator, "missing userId or movieId")
            return
        if movie_id not in movie_index:
            report.skip(locator, f"unknown movieId {movie_id}")
            return
        if user_id not in user_index:
            user_index[user_id] = len(user_index)
            user_movies[user_id] = []
        if movie_id not in user_movies[user_id]:
            user_movies[user_id].append(movie_id)
        if withtag is not None:
            movie_bags[movie_index[movie_id]].extend(normalize_text(withtag))
        edges.add((user_id_node(user_id), movie_index[movie_id]))

    def user_id_node(user_id: str) -> int:
        return len(movie_bags) + user_index[user_id]

    fh, reader = _open_csv(ratings_csv, {"userId", "movieId", "rating", "timestamp"})
    with fh:
        for row in reader:
            interact(
                (row.get("userId") or "").strip(),
                (row.get("movieId") or "").strip(),
                f"{ratings_csv.name}:{reader.line_num}",
                None,
            )

    fh, reader = _open_csv(tags_csv, {"userId", "movieId", "tag", "timestamp"})
    with fh:
        for row in reader:
            interact(
                (row.get("userId") or "").strip(),
                (row.get("movieId") or "").strip(),
                f"{tags_csv.name}:{reader.line_num}",
                (row.get("tag") or "").strip(),
            )

    user_bags: list[list[str]] = []
    for user_id in user_index:  # insertion order = first appearance
        bag: list[str] = []
        for movie_id in user_movies[user_id]:
            bag.extend(normalize_text(movie_titles[movie_id]))
        user_bags.append(bag)

    graph = DataGraph.from_parts(
        movie_bags + user_bags, sorted((min(a, b), max(a, b)) for a, b in edges)
    )
    return _finish(graph, out_dir, report)


def _xml_byte_offset(path: Path, line: int, column: int) -> int:
    """Byte offset of (1-based line, 0-based column) in a file."""
    offset = 0
    with open(path, "rb") as fh:
        for _ in range(line - 1):
            chunk = fh.readline()
            if not chunk:
                break
            offset += len(chunk)
    return offset + column


def ingest_dblp(xml_file, out_dir, scale: int | None = None) -> IngestReport:
    """Bibliography XML to a paper/author graph.

    Paper nodes carry normalized title words plus the year; author nodes
    carry normalized name tokens, deduplicated by exact normalized name.
    One edge per authorship. ``scale`` keeps only the first N publication
    records in document order.
    """
    xml_file = Path(xml_file)
    if scale is not None and scale < 1:
        raise ConfigError(f"scale must be >= 1, got {scale}")
    report = IngestReport()

    paper_bags: list[list[str]] = []
    author_index: dict[str, int] = {}
    author_names: list[str] = []
    edges: list[tuple[int, int]] = []

    depth = 0
    record_no = 0
    try:
        for event, elem in ET.iterparse(xml_file, events=("start", "end")):
            if event == "start":
                depth += 1
                continue
            depth -= 1
            if depth != 1 or elem.tag not in DBLP_RECORD_TAGS:
                if depth == 0:
                    elem.clear()
                continue
            record_no += 1
            report.records_read += 1
            title_el = elem.find("title")
            title = "".join(title_el.itertext()) if title_el is not None else ""
            if not title.strip():
                report.skip(f"{xml_file.name}:record {record_no}", "missing title")
            else:
                bag = normalize_text(title)
                year_el = elem.find("year")
                if year_el is not None and year_el.text and year_el.text.strip():
                    year_kw = normalize_keyword(year_el.text)
                    if year_kw:
                        bag.append(year_kw)
                paper_id = len(paper_bags)
                paper_bags.append(bag)
                seen_authors: set[int] = set()
                for author_el in elem.iter("author"):
                    name = " ".join(normalize_text("".join(author_el.itertext())))
                    if not name:
                        continue
                    if name not in author_index:
                        author_index[name] = len(author_names)
                        author_names.append(name)
                    aid = author_index[name]
                    if aid not in seen_authors:
                        seen_authors.add(aid)
                        edges.append((paper_id, aid))
            elem.clear()
            if scale is not None and record_no >= scale:
                break
    except ET.ParseError as exc:
        line, column = exc.position
        offset = _xml_byte_offset(xml_file, line, column)
        raise ParseError(
            xml_file, f"malformed XML at byte offset {offset}: {exc.msg}", line
        ) from None

    paper_count = len(paper_bags)
    author_bags = [name.split(" ") for name in author_names]
    graph = DataGraph.from_parts(
        paper_bags + author_bags,
        [(p, paper_count + a) for p, a in edges],
    )
    return _finish(graph, out_dir, report)


def _extract_time(line: str) -> str | None:
    """HHMM bucket from the first bracketed group containing a clock time."""
    for m in _BRACKET_GROUP.finditer(line):
        clock = _CLOCK.search(m.group(1))
        if clock:
            hour, minute = int(clock.group(1)), int(clock.group(2))
            if hour <= 23 and minute <= 59:
                return f"{hour:02d}{minute:02d}"
    return None


def ingest_apache_log(log_file, out_dir) -> IngestReport:
    """Web-server error log to a message/time-bucket graph.

    One node per log line (keywords = normalized message after stripping
    the leading bracketed timestamp/level/client groups), one node per
    distinct HHMM bucket, one edge per (line, bucket).
    """
    log_file = Path(log_file)
    report = IngestReport()

    line_bags: list[list[str]] = []
    line_buckets: list[str] = []
    bucket_index: dict[str, int] = {}

    with open(log_file, encoding="utf-8", errors="replace") as fh:
        for lineno, raw in enumerate(fh, start=1):
            raw = raw.rstrip("\n").rstrip("\r")
            report.records_read += 1
            bucket = _extract_time(raw)
            if bucket is None:
                report.skip(f"{log_file.name}:{lineno}", "no parseable timestamp")
                continue
            message = _LEADING_BRACKETS.sub("", raw)
            line_bags.append(normalize_text(message))
            line_buckets.append(bucket)
            if bucket not in bucket_index:
                bucket_index[bucket] = len(bucket_index)

    line_count = len(line_bags)
    bucket_bags = [[kw] for kw in bucket_index]  # insertion order
    edges = [
        (i, line_count + bucket_index[bucket]) for i, bucket in enumerate(line_buckets)
    ]
    graph = DataGraph.from_parts(line_bags + bucket_bags, edges)
    return _finish(graph, out_dir, report)


def subsample(nodes_file, edges_file, scale: int, out_dir) -> IngestReport:
    """First-N node lines plus every edge whose endpoints both survive.

    Lines are copied verbatim, so subsampling is byte-deterministic and
    nested: the N-node output is a prefix of the 2N-node output.
    """
    if scale < 1:
        raise ConfigError(f"scale must be >= 1, got {scale}")
    nodes_file, edges_file = Path(nodes_file), Path(edges_file)
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    report = IngestReport()

    kept_ids: set[str] = set()
    taken = 0
    with open(nodes_file, encoding="utf-8") as src, open(
        out_dir / "node.csv", "w", encoding="utf-8", newline="\n"
    ) as dst:
        for lineno, line in enumerate(src, start=1):
            if taken >= scale:
                break
            stripped = line.rstrip("\n").rstrip("\r")
            if not stripped.strip():
                raise ParseError(nodes_file, "blank node line", lineno)
            head, sep, _ = stripped.partition(",")
            if not sep:
                raise ParseError(nodes_file, "node line has no ',' after the id", lineno)
            kept_ids.add(head.strip())
            dst.write(stripped + "\n")
            taken += 1

    if taken < scale:
        report.notes.append(
            f"requested scale {scale} exceeds node count {taken}; clamped"
        )

    edges_kept = 0
    with open(edges_file, encoding="utf-8") as src, open(
        out_dir / "edge.csv", "w", encoding="utf-8", newline="\n"
    ) as dst:
        for lineno, line in enumerate(src, start=1):
            stripped = line.rstrip("\n").rstrip("\r")
            if not stripped.strip():
                raise ParseError(edges_file, "blank edge line", lineno)
            parts = stripped.split(",")
            if len(parts) != 2:
                raise ParseError(edges_file, "edge line must be '<id>,<id>'", lineno)
            if parts[0].strip() in kept_ids and parts[1].strip() in kept_ids:
                dst.write(stripped + "\n")
                edges_kept += 1

    report.records_read = taken
    report.nodes_written = taken
    report.edges_written = edges_kept
    report.write(out_dir / REPORT_NAME)
    return report
