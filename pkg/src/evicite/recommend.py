"""Paper aggregation over ranked evidence and the end-to-end pipeline.

Every candidate paper is scored by three keys in strict precedence: the
best (lowest) rank of any evidence span citing it, its summed support
across candidate spans, and its publication year. Each recommended paper
is paired with the span that achieved its best rank, so every entry in
the output is grounded in a concrete piece of evidence.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

from .config import AppConfig, provider_from_config
from .database import EvidenceDatabase
from .prefetch import prefetch
from .rerank import RankedEvidence, rerank
from .types import UNKNOWN_YEAR, PaperMetadata


@dataclass(frozen=True)
class PaperAggregate:
    """A paper's evidence summary across the ranked candidate spans."""

    paper_id: str
    best_rank: int
    total_support: int
    recency: int
    best_span_id: int

    def sort_key(self) -> tuple:
        # Unknown years carry the sentinel 0 and therefore sort last.
        return (self.best_rank, -self.total_support, -self.recency, self.paper_id)


@dataclass(frozen=True)
class Recommendation:
    rank: int
    paper: PaperMetadata
    evidence_span: str
    evidence_span_id: int
    explain: dict


def aggregate(ranked: RankedEvidence, db: EvidenceDatabase) -> list[PaperAggregate]:
    """One aggregate per distinct paper cited by any ranked candidate span."""
    best_rank: dict[str, int] = {}
    best_span: dict[str, int] = {}
    total_support: dict[str, int] = {}
    for entry in ranked.entries:
        record = db.record(entry.span_id)
        for paper_id, support in record.citations.items():
            total_support[paper_id] = total_support.get(paper_id, 0) + support
            if paper_id not in best_rank or entry.rank < best_rank[paper_id]:
                best_rank[paper_id] = entry.rank
                best_span[paper_id] = entry.span_id

    aggregates = []
    for paper_id in sorted(best_rank):
        meta = db.papers.get(paper_id)
        year = meta.year if meta else UNKNOWN_YEAR
        aggregates.append(
            PaperAggregate(
                paper_id=paper_id,
                best_rank=best_rank[paper_id],
                total_support=total_support[paper_id],
                recency=year,
                best_span_id=best_span[paper_id],
            )
        )
    return aggregates


def rank_papers(aggregates: list[PaperAggregate]) -> list[PaperAggregate]:
    """Sort by (best rank asc, support desc, recency desc, id asc)."""
    return sorted(aggregates, key=PaperAggregate.sort_key)


@dataclass
class QueryResult:
    """Everything one query produced: the list plus the routing decision."""

    query: str
    recommendations: list[Recommendation]
    ranked: RankedEvidence


def run_query(
    db: EvidenceDatabase,
    config: AppConfig,
    query: str,
    k: int | None = None,
    provider=None,
) -> QueryResult:
    """Full pipeline: prefetch, rerank, aggregate, order, truncate to ``k``.

    ``k=None`` uses the configured default; a negative ``k`` returns the
    full ordering (used by evaluation); ``k=0`` returns an empty list.
    """
    if k is None:
        k = config.default_k
    if provider is None:
        provider = provider_from_config(config)

    candidates = prefetch(db, config.bm25_params(), query, config.per_scorer_cutoff)
    span_texts = {e.span_id: db.record(e.span_id).span_text for e in candidates.entries}
    ranked = rerank(
        candidates,
        config.router(),
        provider,
        strategy=config.strategy,
        span_texts=span_texts,
        allow_fallback=config.semantic_fallback,
    )
    ordered = rank_papers(aggregate(ranked, db))
    if k >= 0:
        ordered = ordered[:k]

    by_span = {entry.span_id: entry for entry in ranked.entries}
    recommendations = []
    for position, agg in enumerate(ordered, start=1):
        record = db.record(agg.best_span_id)
        entry = by_span[agg.best_span_id]
        meta = db.papers.get(agg.paper_id) or PaperMetadata(paper_id=agg.paper_id)
        supporting = [
            {
                "span_id": e.span_id,
                "rank": e.rank,
                "support": db.record(e.span_id).citations[agg.paper_id],
            }
            for e in ranked.entries
            if agg.paper_id in db.record(e.span_id).citations
        ]
        recommendations.append(
            Recommendation(
                rank=position,
                paper=meta,
                evidence_span=record.span_text,
                evidence_span_id=agg.best_span_id,
                explain={
                    "route": ranked.route_label(),
                    "scores": dict(entry.component_scores),
                    "p_r": agg.best_rank,
                    "p_s": agg.total_support,
                    "evidence": supporting,
                },
            )
        )
    return QueryResult(query=query, recommendations=recommendations, ranked=ranked)


def recommend(
    db: EvidenceDatabase,
    config: AppConfig,
    query: str,
    k: int | None = None,
    provider=None,
) -> list[Recommendation]:
    """Ranked (evidence span, paper) pairs for a query, at most ``k``."""
    return run_query(db, config, query, k=k, provider=provider).recommendations


def payload(result: QueryResult) -> dict:
    """Wire-format recommendation payload shared by the CLI and the service."""
    return {
        "query": result.query,
        "route": result.ranked.route_label(),
        "results": [
            {
                "rank": rec.rank,
                "paper": {
                    "id": rec.paper.paper_id,
                    "title": rec.paper.title,
                    "year": rec.paper.year,
                    "venue": rec.paper.venue,
                    "authors": list(rec.paper.authors),
                },
                "evidence": rec.evidence_span,
                "span_id": rec.evidence_span_id,
                "p_r": rec.explain["p_r"],
                "p_s": rec.explain["p_s"],
                "scores": rec.explain["scores"],
            }
            for rec in result.recommendations
        ],
    }


def to_json(obj: dict) -> str:
    """Canonical JSON used on every transport, byte-stable across them."""
    return json.dumps(obj, ensure_ascii=False, separators=(",", ":"), sort_keys=True)
