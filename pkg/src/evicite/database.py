"""The evidence database: unique spans mapped to (cited paper, support) pairs.

Spans are conflated on normalized text only; supports count how many times
a given (span, paper) pairing was observed. The index statistics needed by
the lexical scorers are computed once at build time and persisted with the
records.
"""

from __future__ import annotations

import hashlib
import json
import logging
from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable, Mapping

from .textnorm import normalize_text, tokenize
from .types import PaperMetadata

logger = logging.getLogger(__name__)

MAGIC = "ILCDB1"
FORMAT_VERSION = 1


class DatabaseLoadError(Exception):
    """A database file could not be loaded."""


class DatabaseVersionError(DatabaseLoadError):
    """The file declares an unsupported format version."""


class DatabaseCorruptError(DatabaseLoadError):
    """The file's checksum does not match its payload."""


@dataclass
class EvidenceRecord:
    """One unique evidence span with its cited papers and supports."""

    span_text: str
    citations: dict[str, int]
    sources: list[tuple[str, int]] = field(default_factory=list)

    @property
    def key(self) -> str:
        return normalize_text(self.span_text)

    def total_support(self) -> int:
        return sum(self.citations.values())


@dataclass
class IndexStats:
    """Corpus statistics over the final span set."""

    doc_count: int
    avg_span_tokens: float
    doc_freq: dict[str, int]
    span_lengths: dict[int, int]


@dataclass
class BuildReport:
    """Counts from one database build."""

    spans: int = 0
    cited_papers: int = 0
    citation_occurrences: int = 0
    dropped_citations: int = 0
    avg_span_tokens: float = 0.0

    def to_dict(self) -> dict:
        return {
            "spans": self.spans,
            "cited_papers": self.cited_papers,
            "citation_occurrences": self.citation_occurrences,
            "dropped_citations": self.dropped_citations,
            "avg_span_tokens": round(self.avg_span_tokens, 4),
        }


class EvidenceDatabase:
    """Immutable-after-build store of evidence records and paper metadata.

    Span ids are indices into ``records``, which is ordered by normalized
    span text, so rebuilding from the same stream in any order yields an
    identical database.
    """

    def __init__(
        self,
        papers: dict[str, PaperMetadata],
        records: list[EvidenceRecord],
        stats: IndexStats,
        build_report: BuildReport | None = None,
    ):
        self.papers = papers
        self.records = records
        self.stats = stats
        self.build_report = build_report or BuildReport()
        self._by_key = {record.key: span_id for span_id, record in enumerate(records)}
        self._cited_ids: frozenset[str] | None = None

    def __len__(self) -> int:
        return len(self.records)

    def record(self, span_id: int) -> EvidenceRecord:
        return self.records[span_id]

    def span_id_of(self, span_text: str) -> int | None:
        return self._by_key.get(normalize_text(span_text))

    def cited_paper_ids(self) -> frozenset[str]:
        if self._cited_ids is None:
            ids: set[str] = set()
            for record in self.records:
                ids.update(record.citations)
            self._cited_ids = frozenset(ids)
        return self._cited_ids


def lookup(db: EvidenceDatabase, span_text: str) -> EvidenceRecord | None:
    """Exact-match lookup on normalized span text; absence is a value."""
    span_id = db.span_id_of(span_text)
    return None if span_id is None else db.records[span_id]


def _compute_stats(records: list[EvidenceRecord]) -> IndexStats:
    doc_freq: Counter[str] = Counter()
    span_lengths: dict[int, int] = {}
    for span_id, record in enumerate(records):
        tokens = tokenize(record.span_text)
        span_lengths[span_id] = len(tokens)
        doc_freq.update(set(tokens))
    n = len(records)
    avg = sum(span_lengths.values()) / n if n else 0.0
    return IndexStats(
        doc_count=n,
        avg_span_tokens=avg,
        doc_freq=dict(doc_freq),
        span_lengths=span_lengths,
    )


def build(
    extracted: Iterable[Mapping],
    papers: Mapping[str, PaperMetadata],
) -> EvidenceDatabase:
    """Conflate an extracted-span stream into an evidence database.

    Each stream item carries ``span_text``, ``cited_paper_ids``, and
    optionally ``provenance``. Citations of papers missing from ``papers``
    are dropped and counted in the build report; an empty stream yields a
    valid empty database.
    """
    surfaces: dict[str, str] = {}
    citations: dict[str, Counter[str]] = {}
    sources: dict[str, set[tuple[str, int]]] = {}
    report = BuildReport()

    for item in extracted:
        text = item["span_text"]
        key = normalize_text(text)
        if not key:
            continue
        if key not in surfaces or text < surfaces[key]:
            surfaces[key] = text
        counter = citations.setdefault(key, Counter())
        for paper_id in item["cited_paper_ids"]:
            if paper_id not in papers:
                report.dropped_citations += 1
                continue
            counter[paper_id] += 1
            report.citation_occurrences += 1
        prov = item.get("provenance")
        if prov:
            sources.setdefault(key, set()).add(
                (str(prov.get("paper_id", "")), int(prov.get("sentence_index", 0)))
            )

    records = []
    for key in sorted(surfaces):
        cited = citations.get(key, Counter())
        if not cited:  # every citation for this span was dropped
            continue
        records.append(
            EvidenceRecord(
                span_text=surfaces[key],
                citations=dict(sorted(cited.items())),
                sources=sorted(sources.get(key, ())),
            )
        )

    cited_ids = {pid for record in records for pid in record.citations}
    kept_papers = {pid: papers[pid] for pid in sorted(cited_ids)}

    stats = _compute_stats(records)
    report.spans = stats.doc_count
    report.cited_papers = len(kept_papers)
    report.avg_span_tokens = stats.avg_span_tokens
    return EvidenceDatabase(kept_papers, records, stats, report)


def _payload_lines(db: EvidenceDatabase) -> list[str]:
    lines = []
    for paper_id in sorted(db.papers):
        lines.append(
            json.dumps(
                {"type": "paper", **db.papers[paper_id].to_dict()},
                ensure_ascii=False,
                sort_keys=True,
            )
        )
    for record in db.records:
        lines.append(
            json.dumps(
                {
                    "type": "record",
                    "span": record.span_text,
                    "citations": record.citations,
                    "sources": [list(s) for s in record.sources],
                },
                ensure_ascii=False,
                sort_keys=True,
            )
        )
    stats = db.stats
    lines.append(
        json.dumps(
            {
                "type": "stats",
                "doc_count": stats.doc_count,
                "avg_span_tokens": stats.avg_span_tokens,
                "doc_freq": stats.doc_freq,
                "span_lengths": {str(k): v for k, v in stats.span_lengths.items()},
            },
            ensure_ascii=False,
            sort_keys=True,
        )
    )
    return lines


def save(db: EvidenceDatabase, path) -> None:
    """Write the database as a checksummed, versioned text container."""
    payload = "".join(line + "\n" for line in _payload_lines(db))
    digest = hashlib.sha256(payload.encode("utf-8")).hexdigest()
    header = json.dumps(
        {
            "version": FORMAT_VERSION,
            "checksum": digest,
            "papers": len(db.papers),
            "records": len(db.records),
        },
        sort_keys=True,
    )
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(f"{MAGIC} {header}\n")
        fh.write(payload)


def load(path) -> EvidenceDatabase:
    """Load a database written by :func:`save`, verifying its checksum."""
    with open(path, "rb") as fh:
        blob = fh.read()
    first, sep, payload_bytes = blob.partition(b"\n")
    try:
        first_line = first.decode("utf-8")
    except UnicodeDecodeError as exc:
        raise DatabaseLoadError(f"{path}: not an evidence database file") from exc
    if not sep or not first_line.startswith(MAGIC + " "):
        raise DatabaseLoadError(f"{path}: not an evidence database file")
    try:
        header = json.loads(first_line[len(MAGIC) + 1 :])
    except json.JSONDecodeError as exc:
        raise DatabaseLoadError(f"{path}: unreadable header: {exc}") from exc
    if header.get("version") != FORMAT_VERSION:
        raise DatabaseVersionError(
            f"{path}: format version {header.get('version')!r}, expected {FORMAT_VERSION}"
        )

    if hashlib.sha256(payload_bytes).hexdigest() != header.get("checksum"):
        raise DatabaseCorruptError(f"{path}: checksum mismatch")
    payload = payload_bytes.decode("utf-8")

    papers: dict[str, PaperMetadata] = {}
    records: list[EvidenceRecord] = []
    stats: IndexStats | None = None
    for line in payload.splitlines():
        if not line:
            continue
        entry = json.loads(line)
        kind = entry.get("type")
        if kind == "paper":
            meta = PaperMetadata.from_dict(entry)
            papers[meta.paper_id] = meta
        elif kind == "record":
            records.append(
                EvidenceRecord(
                    span_text=entry["span"],
                    citations={k: int(v) for k, v in entry["citations"].items()},
                    sources=[(s[0], int(s[1])) for s in entry.get("sources", ())],
                )
            )
        elif kind == "stats":
            stats = IndexStats(
                doc_count=int(entry["doc_count"]),
                avg_span_tokens=float(entry["avg_span_tokens"]),
                doc_freq={k: int(v) for k, v in entry["doc_freq"].items()},
                span_lengths={int(k): int(v) for k, v in entry["span_lengths"].items()},
            )
        else:
            raise DatabaseLoadError(f"{path}: unknown entry type {kind!r}")

    if stats is None:
        raise DatabaseCorruptError(f"{path}: missing stats section")
    if len(papers) != header.get("papers") or len(records) != header.get("records"):
        raise DatabaseCorruptError(f"{path}: section counts disagree with header")
    return EvidenceDatabase(papers, records, stats)


def read_papers(path) -> dict[str, PaperMetadata]:
    """Read a line-delimited paper-metadata file into an id-keyed map."""
    papers: dict[str, PaperMetadata] = {}
    with open(path, "r", encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                meta = PaperMetadata.from_dict(json.loads(line))
            except (json.JSONDecodeError, KeyError, ValueError) as exc:
                raise ValueError(f"{path}:{line_no}: bad paper record: {exc}") from exc
            papers[meta.paper_id] = meta
    return papers


def read_span_records(path):
    """Read a line-delimited extracted-span file (yields dicts)."""
    with open(path, "r", encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                yield json.loads(line)
            except json.JSONDecodeError as exc:
                raise ValueError(f"{path}:{line_no}: bad span record: {exc}") from exc
