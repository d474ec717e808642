"""Turn raw papers into parsed-sentence files the recommendation engine
builds databases from, keeping only sentences with a resolved citation."""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass, field
from typing import Iterable, Iterator

from .annotate import AnnotatorError, HeuristicAnnotator, split_sentences, tokenize_sentence
from .markers import REF_TOKEN, normalize_markers
from .types import RawPaper, SentenceRecord

logger = logging.getLogger(__name__)


@dataclass
class ParseDiagnostics:
    """Counters for one ingestion run, emitted alongside the output."""

    annotator: str = ""
    segmenter: str = "regex-terminal-punctuation"
    papers: int = 0
    sentences_seen: int = 0
    sentences_emitted: int = 0
    sentences_without_citations: int = 0
    sentences_failed: int = 0
    markers_resolved: int = 0
    marker_ids_unresolved: int = 0

    def to_dict(self) -> dict:
        return dict(self.__dict__)


def normalize_and_parse(
    paper: RawPaper,
    annotator: HeuristicAnnotator | None = None,
    diagnostics: ParseDiagnostics | None = None,
) -> list[SentenceRecord]:
    """Parsed records for every sentence of ``paper`` with >= 1 resolved
    citation; annotator failures skip the sentence and are counted."""
    annotator = annotator or HeuristicAnnotator()
    diagnostics = diagnostics if diagnostics is not None else ParseDiagnostics()
    diagnostics.annotator = annotator.name
    diagnostics.papers += 1

    records = []
    index = 0
    for body in paper.body_sentences:
        for sentence in split_sentences(body):
            diagnostics.sentences_seen += 1
            rewritten, resolutions, unresolved = normalize_markers(
                sentence, paper.bibliography
            )
            diagnostics.marker_ids_unresolved += unresolved
            if not resolutions:
                diagnostics.sentences_without_citations += 1
                continue
            try:
                tokens = tokenize_sentence(rewritten)
                annotated = annotator.annotate(tokens)
            except AnnotatorError as exc:
                diagnostics.sentences_failed += 1
                logger.warning("annotator failed on %s: %s", paper.paper_id, exc)
                continue
            marker_positions = [i for i, t in enumerate(tokens) if t == REF_TOKEN]
            if len(marker_positions) != len(resolutions):
                diagnostics.sentences_failed += 1
                logger.warning(
                    "marker count mismatch in %s sentence %d", paper.paper_id, index
                )
                continue
            refs = [
                {"token_position": pos, "cited_paper_ids": ids}
                for pos, ids in zip(marker_positions, resolutions)
            ]
            records.append(
                SentenceRecord(
                    paper_id=paper.paper_id,
                    sentence_index=index,
                    tokens=annotated,
                    refs=refs,
                )
            )
            diagnostics.sentences_emitted += 1
            diagnostics.markers_resolved += len(resolutions)
            index += 1
    return records


def collect_cited_papers(papers: Iterable[RawPaper]) -> dict[str, dict]:
    """Paper-metadata table for every bibliography entry across a dump."""
    table: dict[str, dict] = {}
    for paper in papers:
        for entry in paper.bibliography.values():
            paper_id = str(entry.get("paper_id", "")).strip()
            if not paper_id or paper_id in table:
                continue
            table[paper_id] = {
                "paper_id": paper_id,
                "title": entry.get("title", "") or "",
                "year": int(entry.get("year") or 0),
                "venue": entry.get("venue", "") or "",
                "authors": list(entry.get("authors") or ()),
            }
    return table


def read_dump(path) -> Iterator[RawPaper]:
    """Read a line-delimited raw-paper dump, skipping malformed lines."""
    with open(path, "r", encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                yield RawPaper.from_dict(json.loads(line))
            except (json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
                logger.warning("%s:%d: skipping malformed record: %s", path, line_no, exc)


def write_outputs(
    papers: Iterable[RawPaper],
    sentences_path,
    papers_path,
    annotator: HeuristicAnnotator | None = None,
) -> ParseDiagnostics:
    """Run the full ingestion: sentence file + cited-paper table."""
    diagnostics = ParseDiagnostics()
    annotator = annotator or HeuristicAnnotator()
    table: dict[str, dict] = {}
    with open(sentences_path, "w", encoding="utf-8") as fh:
        for paper in papers:
            for record in normalize_and_parse(paper, annotator, diagnostics):
                fh.write(json.dumps(record.to_dict(), ensure_ascii=False) + "\n")
            for pid, meta in collect_cited_papers([paper]).items():
                table.setdefault(pid, meta)
    with open(papers_path, "w", encoding="utf-8") as fh:
        for pid in sorted(table):
            fh.write(json.dumps(table[pid], ensure_ascii=False) + "\n")
    return diagnostics
