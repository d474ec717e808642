"""Shared fixture builders for the test suite."""

import pytest

from evicite.database import build
from evicite.types import ROOT, ParsedSentence, PaperMetadata, RefGroup, Token


def make_sentence(words, refs, edges=None, paper_id="src", sentence_index=0):
    """Build a parsed sentence from token texts.

    ``refs`` maps marker positions to lists of cited paper ids; ``edges``
    maps a child position to (head position, label). Unlisted tokens hang
    off the root.
    """
    edges = edges or {}
    tokens = tuple(
        Token(
            text=word,
            head=edges.get(pos, (ROOT, ""))[0],
            label=edges.get(pos, (ROOT, ""))[1],
        )
        for pos, word in enumerate(words)
    )
    groups = tuple(
        RefGroup(position=pos, cited_paper_ids=frozenset(ids))
        for pos, ids in sorted(refs.items())
    )
    return ParsedSentence(
        tokens=tokens, refgroups=groups, paper_id=paper_id, sentence_index=sentence_index
    )


def paper(paper_id, year=2020, title=None, venue="", authors=()):
    return PaperMetadata(
        paper_id=paper_id,
        title=title if title is not None else f"Paper {paper_id}",
        year=year,
        venue=venue,
        authors=tuple(authors),
    )


def toy_db(span_items, papers):
    """Build a database from (span_text, cited_ids) pairs and a paper list."""
    stream = [
        {
            "span_text": text,
            "cited_paper_ids": list(ids),
            "provenance": {"paper_id": "src", "sentence_index": i},
        }
        for i, (text, ids) in enumerate(span_items)
    ]
    return build(stream, {p.paper_id: p for p in papers})


@pytest.fixture
def four_paper_db():
    """The small database used by several pipeline tests: 5 spans, 4 papers."""
    papers = [
        paper("PA", year=2013, title="A word alignment model"),
        paper("PB", year=2016, title="Subword embeddings"),
        paper("PC", year=2014, title="A convolutional framework"),
        paper("PD", year=2017, title="An attention architecture"),
    ]
    spans = [
        ("FastAlign", ["PA"]),
        ("FastAlign", ["PA"]),
        ("the alignment is induced with FastAlign", ["PA"]),
        ("fasttext", ["PB"]),
        ("fasttext embeddings trained on web corpora", ["PB", "PC"]),
        ("attention mechanisms for sequence transduction", ["PD"]),
    ]
    return toy_db(spans, papers)
