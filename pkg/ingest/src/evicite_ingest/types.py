"""Raw dump records and the parsed-sentence output schema."""

from __future__ import annotations

from dataclasses import dataclass, field


@dataclass
class RawPaper:
    """One paper from a dump: metadata, body sentences with inline numbered
    citation markers, and a bibliography resolving marker ids to papers."""

    paper_id: str
    title: str = ""
    abstract: str = ""
    year: int = 0
    venue: str = ""
    authors: list[str] = field(default_factory=list)
    body_sentences: list[str] = field(default_factory=list)
    bibliography: dict[str, dict] = field(default_factory=dict)

    def __post_init__(self):
        if not self.paper_id:
            raise ValueError("paper_id must be non-empty")

    @classmethod
    def from_dict(cls, d: dict) -> "RawPaper":
        return cls(
            paper_id=str(d["paper_id"]),
            title=d.get("title", "") or "",
            abstract=d.get("abstract", "") or "",
            year=int(d.get("year") or 0),
            venue=d.get("venue", "") or "",
            authors=list(d.get("authors") or ()),
            body_sentences=list(d.get("body_sentences") or ()),
            bibliography={str(k): v for k, v in (d.get("bibliography") or {}).items()},
        )


@dataclass
class AnnotatedToken:
    text: str
    head: int  # -1 marks the root
    label: str


@dataclass
class SentenceRecord:
    """One parsed sentence in the downstream wire format."""

    paper_id: str
    sentence_index: int
    tokens: list[AnnotatedToken]
    refs: list[dict]  # {"token_position": int, "cited_paper_ids": [str]}

    def to_dict(self) -> dict:
        return {
            "paper_id": self.paper_id,
            "sentence_index": self.sentence_index,
            "tokens": [
                {"text": t.text, "head": t.head, "label": t.label} for t in self.tokens
            ],
            "refs": self.refs,
        }
