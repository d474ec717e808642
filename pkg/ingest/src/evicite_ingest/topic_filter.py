"""Topic filtering over raw paper streams.

A paper is on-topic when its abstract mentions the topic name or one of
its abbreviations. Full topic names match case-insensitively; an all-caps
abbreviation like "NER" must match with its casing intact, otherwise it
would fire on ordinary words.
"""

from __future__ import annotations

import logging
from typing import Iterable, Iterator

from .types import RawPaper

logger = logging.getLogger(__name__)


def matches_topic(abstract: str, topic: str, abbreviations: Iterable[str] = ()) -> bool:
    if topic.lower() in abstract.lower():
        return True
    for abbrev in abbreviations:
        if abbrev.isupper():
            if abbrev in abstract:
                return True
        elif abbrev.lower() in abstract.lower():
            return True
    return False


def filter_by_topic(
    papers: Iterable[dict | RawPaper],
    topic: str,
    abbreviations: Iterable[str] = (),
) -> Iterator[RawPaper]:
    """Yield the papers whose abstract mentions the topic. Malformed
    records are logged and skipped, never aborting the stream."""
    if not topic:
        raise ValueError("topic must be non-empty")
    abbreviations = tuple(abbreviations)
    for item in papers:
        try:
            paper = item if isinstance(item, RawPaper) else RawPaper.from_dict(item)
        except (KeyError, TypeError, ValueError) as exc:
            logger.warning("skipping malformed paper record: %s", exc)
            continue
        if matches_topic(paper.abstract, topic, abbreviations):
            yield paper
