"""Lexical pre-fetching: score every evidence span against the query with
two BM25 variants and keep the union of their top-cutoff lists.

Both scorers share one IDF: ln((|D| - n + 0.5) / (n + 0.5) + 1), which is
non-negative for any document frequency n <= |D|. The second scorer adds a
floor term delta to each query token's contribution so long spans with no
matching tokens are not scored on par with short relevant ones.
"""

from __future__ import annotations

import math
import weakref
from collections import Counter
from dataclasses import dataclass, field

from .database import EvidenceDatabase, IndexStats
from .textnorm import tokenize

DEFAULT_CUTOFF = 50


@dataclass(frozen=True)
class Bm25Params:
    k1: float = 1.5
    b: float = 0.75
    delta: float = 1.0

    def __post_init__(self):
        if self.k1 <= 0:
            raise ValueError("k1 must be positive")
        if not 0.0 <= self.b <= 1.0:
            raise ValueError("b must be in [0, 1]")
        if self.delta < 0:
            raise ValueError("delta must be non-negative")


@dataclass(frozen=True)
class CandidateEntry:
    span_id: int
    okapi_score: float
    plus_score: float


@dataclass
class CandidateSet:
    """Pre-fetched spans with both lexical scores, ordered by span id."""

    query_text: str
    query_tokens: list[str]
    entries: list[CandidateEntry]
    per_scorer_cutoff: int = DEFAULT_CUTOFF

    def __len__(self) -> int:
        return len(self.entries)

    def span_ids(self) -> list[int]:
        return [e.span_id for e in self.entries]


def idf(stats: IndexStats, token: str) -> float:
    """Inverse document frequency over the span set; unseen tokens use n=0."""
    n = stats.doc_freq.get(token, 0)
    return math.log((stats.doc_count - n + 0.5) / (n + 0.5) + 1.0)


def _tf_fraction(params: Bm25Params, tf: int, span_len: int, avg_len: float) -> float:
    norm = 1.0 - params.b + params.b * span_len / avg_len if avg_len else 1.0
    return tf * (params.k1 + 1.0) / (tf + params.k1 * norm)


def okapi_score(
    stats: IndexStats,
    params: Bm25Params,
    query_tokens: list[str],
    span_tokens: list[str],
) -> float:
    """Per-span score: sum over query tokens of idf * saturated tf."""
    tf = Counter(span_tokens)
    score = 0.0
    for token in query_tokens:
        score += idf(stats, token) * _tf_fraction(
            params, tf.get(token, 0), len(span_tokens), stats.avg_span_tokens
        )
    return score


def plus_score(
    stats: IndexStats,
    params: Bm25Params,
    query_tokens: list[str],
    span_tokens: list[str],
) -> float:
    """Okapi plus a delta floor per query token: every token contributes at
    least idf * delta, whether or not it occurs in the span.

    The delta part depends only on the query, so it is accumulated
    separately; this lets the posting-list path reproduce these sums
    bit-for-bit.
    """
    floor = 0.0
    for token in query_tokens:
        floor += idf(stats, token)
    return okapi_score(stats, params, query_tokens, span_tokens) + params.delta * floor


@dataclass
class SpanIndex:
    """Inverted index over a database: token -> [(span_id, tf)].

    Scoring through the postings adds the same floats in the same order as
    the naive per-span loop, so results are bit-identical to it.
    """

    stats: IndexStats
    postings: dict[str, list[tuple[int, int]]] = field(default_factory=dict)

    @classmethod
    def from_database(cls, db: EvidenceDatabase) -> "SpanIndex":
        postings: dict[str, list[tuple[int, int]]] = {}
        for span_id, record in enumerate(db.records):
            for token, tf in sorted(Counter(tokenize(record.span_text)).items()):
                postings.setdefault(token, []).append((span_id, tf))
        return cls(stats=db.stats, postings=postings)

    def score_all(
        self, params: Bm25Params, query_tokens: list[str]
    ) -> tuple[list[float], list[float]]:
        """Okapi and plus scores for every span in the database."""
        n = self.stats.doc_count
        okapi = [0.0] * n
        floor = 0.0
        for token in query_tokens:
            token_idf = idf(self.stats, token)
            floor += token_idf
            for span_id, tf in self.postings.get(token, ()):
                okapi[span_id] += token_idf * _tf_fraction(
                    params, tf, self.stats.span_lengths[span_id], self.stats.avg_span_tokens
                )
        delta_part = params.delta * floor
        plus = [s + delta_part for s in okapi]
        return okapi, plus


def top_ids(scores: list[float], cutoff: int) -> list[int]:
    """Span ids of the ``cutoff`` highest scores; ties break by id ascending."""
    order = sorted(range(len(scores)), key=lambda i: (-scores[i], i))
    return order[:cutoff]


_INDEX_CACHE: "weakref.WeakKeyDictionary[EvidenceDatabase, SpanIndex]" = (
    weakref.WeakKeyDictionary()
)


def index_for(db: EvidenceDatabase) -> SpanIndex:
    """Per-database index, built once and reused across queries."""
    cached = _INDEX_CACHE.get(db)
    if cached is None:
        cached = SpanIndex.from_database(db)
        _INDEX_CACHE[db] = cached
    return cached


def prefetch(
    db: EvidenceDatabase,
    params: Bm25Params,
    query: str,
    cutoff: int = DEFAULT_CUTOFF,
) -> CandidateSet:
    """Union of both scorers' top-``cutoff`` spans for the query.

    An empty database or a query with no tokens yields an empty candidate
    set, which downstream stages treat as "no recommendations".
    """
    query_tokens = tokenize(query)
    if not query_tokens or len(db) == 0:
        return CandidateSet(query, query_tokens, [], cutoff)

    okapi, plus = index_for(db).score_all(params, query_tokens)
    candidate_ids = sorted(set(top_ids(okapi, cutoff)) | set(top_ids(plus, cutoff)))
    entries = [
        CandidateEntry(span_id=i, okapi_score=okapi[i], plus_score=plus[i])
        for i in candidate_ids
    ]
    return CandidateSet(query, query_tokens, entries, cutoff)
