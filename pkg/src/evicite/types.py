"""Core domain types: papers, parsed sentences, and extracted spans."""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

ROOT = -1
UNKNOWN_YEAR = 0

REF_PLACEHOLDER = "[REF]"
REFGROUP_PLACEHOLDER = "[REFGROUP]"


@dataclass(frozen=True)
class PaperMetadata:
    """Identity and display metadata for a citable paper."""

    paper_id: str
    title: str = ""
    year: int = UNKNOWN_YEAR
    venue: str = ""
    authors: tuple[str, ...] = ()

    def __post_init__(self):
        if not self.paper_id:
            raise ValueError("paper_id must be non-empty")
        if not isinstance(self.authors, tuple):
            object.__setattr__(self, "authors", tuple(self.authors))

    def to_dict(self) -> dict:
        return {
            "paper_id": self.paper_id,
            "title": self.title,
            "year": self.year,
            "venue": self.venue,
            "authors": list(self.authors),
        }

    @classmethod
    def from_dict(cls, d: dict) -> "PaperMetadata":
        return cls(
            paper_id=str(d["paper_id"]),
            title=d.get("title", "") or "",
            year=int(d.get("year") or UNKNOWN_YEAR),
            venue=d.get("venue", "") or "",
            authors=tuple(d.get("authors") or ()),
        )


@dataclass(frozen=True)
class Token:
    """One token of a parsed sentence.

    ``head`` is the index of the governing token, or ``ROOT``. ``label``
    is the dependency relation of this token to its head.
    """

    text: str
    head: int = ROOT
    label: str = ""


@dataclass(frozen=True)
class RefGroup:
    """A citation unit: one marker position and the papers it resolves to."""

    position: int
    cited_paper_ids: frozenset[str]

    def __post_init__(self):
        if not isinstance(self.cited_paper_ids, frozenset):
            object.__setattr__(self, "cited_paper_ids", frozenset(self.cited_paper_ids))
        if not self.cited_paper_ids:
            raise ValueError("RefGroup must cite at least one paper")

    def sorted_ids(self) -> list[str]:
        return sorted(self.cited_paper_ids)


@dataclass(frozen=True)
class ParsedSentence:
    """Dependency-annotated sentence with citation markers.

    Token positions are their list indices; each RefGroup position points
    at a marker token. Head indices must stay within the token list.
    """

    tokens: tuple[Token, ...]
    refgroups: tuple[RefGroup, ...]
    paper_id: str = ""
    sentence_index: int = 0

    def __post_init__(self):
        if not isinstance(self.tokens, tuple):
            object.__setattr__(self, "tokens", tuple(self.tokens))
        if not isinstance(self.refgroups, tuple):
            object.__setattr__(self, "refgroups", tuple(self.refgroups))
        n = len(self.tokens)
        for group in self.refgroups:
            if not 0 <= group.position < n:
                raise ValueError(f"refgroup position {group.position} outside sentence")

    def marker_positions(self) -> set[int]:
        return {g.position for g in self.refgroups}

    def to_record(self) -> dict:
        return {
            "paper_id": self.paper_id,
            "sentence_index": self.sentence_index,
            "tokens": [
                {"text": t.text, "head": t.head, "label": t.label} for t in self.tokens
            ],
            "refs": [
                {"token_position": g.position, "cited_paper_ids": g.sorted_ids()}
                for g in self.refgroups
            ],
        }

    @classmethod
    def from_record(cls, d: dict) -> "ParsedSentence":
        tokens = tuple(
            Token(
                text=t["text"],
                head=ROOT if t.get("head") is None else int(t["head"]),
                label=t.get("label", "") or "",
            )
            for t in d["tokens"]
        )
        refgroups = tuple(
            RefGroup(
                position=int(r["token_position"]),
                cited_paper_ids=frozenset(str(p) for p in r["cited_paper_ids"]),
            )
            for r in d.get("refs", ())
        )
        return cls(
            tokens=tokens,
            refgroups=refgroups,
            paper_id=str(d.get("paper_id", "")),
            sentence_index=int(d.get("sentence_index", 0)),
        )


class SpanRule(str, Enum):
    """Which extraction rule produced a span."""

    DEP_TRAVERSAL = "DEP_TRAVERSAL"
    TOKEN_SPLIT = "TOKEN_SPLIT"
    FULL_SENTENCE = "FULL_SENTENCE"


@dataclass(frozen=True)
class ExtractedSpan:
    """An evidence span paired with the citation group it supports."""

    text: str
    refgroup: RefGroup
    rule: SpanRule
    paper_id: str = ""
    sentence_index: int = 0

    def to_record(self) -> dict:
        return {
            "span_text": self.text,
            "cited_paper_ids": self.refgroup.sorted_ids(),
            "rule": self.rule.value,
            "provenance": {
                "paper_id": self.paper_id,
                "sentence_index": self.sentence_index,
            },
        }
