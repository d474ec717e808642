"""Candidate re-ranking by conditional rank fusion.

Short queries are ordered by fusing the two lexical scorers' ranks; long
queries fuse a semantic-similarity rank with the delta-floored lexical
rank. Fusion sums the two ranks, breaking ties by the delta-floored score
and then span id, so the result is a total order no matter the inputs.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from enum import Enum

from .embeddings import EmbeddingUnavailableError, cosine
from .prefetch import CandidateSet

logger = logging.getLogger(__name__)

DEFAULT_LENGTH_THRESHOLD = 50


class Route(str, Enum):
    LEXICAL = "lexical"
    SEMANTIC = "semantic"


class Strategy(str, Enum):
    """Candidate-ordering strategies; CONDITIONAL is the shipped default,
    the others exist for ablation runs."""

    OKAPI = "okapi"
    PLUS = "plus"
    SEMANTIC = "semantic"
    NAIVE_ENSEMBLE = "naive-ensemble"
    CONDITIONAL = "conditional"


@dataclass(frozen=True)
class RouterConfig:
    length_threshold_tokens: int = DEFAULT_LENGTH_THRESHOLD

    def __post_init__(self):
        if self.length_threshold_tokens <= 0:
            raise ValueError("length threshold must be positive")


@dataclass(frozen=True)
class RankedSpan:
    span_id: int
    rank: int
    component_ranks: dict
    component_scores: dict


@dataclass
class RankedEvidence:
    """Total ordering of the candidate spans for one query."""

    route: Route
    entries: list[RankedSpan] = field(default_factory=list)
    fell_back: bool = False

    def __len__(self) -> int:
        return len(self.entries)

    def route_label(self) -> str:
        if self.fell_back:
            return "lexical_fallback"
        return self.route.value


def rank_by_score(scores: dict[int, float]) -> dict[int, int]:
    """1-based ranks, highest score first; ties break by span id ascending."""
    order = sorted(scores, key=lambda span_id: (-scores[span_id], span_id))
    return {span_id: rank for rank, span_id in enumerate(order, start=1)}


def fuse_ranks(
    rank_a: dict[int, int],
    rank_b: dict[int, int],
    tiebreak_scores: dict[int, float],
) -> list[int]:
    """Order spans by ascending rank sum, ties by tiebreak score descending
    then span id ascending. Both rank maps must cover the same spans."""
    if set(rank_a) != set(rank_b):
        raise ValueError("rank maps cover different span sets")
    return sorted(
        rank_a,
        key=lambda s: (rank_a[s] + rank_b[s], -tiebreak_scores.get(s, 0.0), s),
    )


def semantic_score(provider, query_text: str, span_text: str) -> float:
    """Cosine similarity of the provider's embeddings for the two texts."""
    query_vec, span_vec = provider.embed([query_text, span_text])
    return cosine(query_vec, span_vec)


def _semantic_ranks(
    provider, query_text: str, span_texts: dict[int, str]
) -> tuple[dict[int, int], dict[int, float]]:
    # One batched call: the query plus every candidate span, in span-id order.
    ids = sorted(span_texts)
    vectors = provider.embed([query_text] + [span_texts[i] for i in ids])
    query_vec = vectors[0]
    scores = {i: cosine(query_vec, v) for i, v in zip(ids, vectors[1:])}
    return rank_by_score(scores), scores


def rerank(
    candidates: CandidateSet,
    router: RouterConfig,
    provider,
    strategy: Strategy = Strategy.CONDITIONAL,
    span_texts: dict[int, str] | None = None,
    allow_fallback: bool = True,
) -> RankedEvidence:
    """Order the candidate set under the chosen strategy.

    ``span_texts`` maps candidate span ids to their text and is required by
    any strategy that consults the embedding provider. When embeddings are
    unavailable and ``allow_fallback`` is set, the lexical ordering is used
    instead and the result is flagged as a fallback.
    """
    if not candidates.entries:
        return RankedEvidence(route=Route.LEXICAL)

    okapi_scores = {e.span_id: e.okapi_score for e in candidates.entries}
    plus_scores = {e.span_id: e.plus_score for e in candidates.entries}
    okapi_ranks = rank_by_score(okapi_scores)
    plus_ranks = rank_by_score(plus_scores)

    wants_semantic = strategy in (Strategy.SEMANTIC, Strategy.NAIVE_ENSEMBLE) or (
        strategy is Strategy.CONDITIONAL
        and len(candidates.query_tokens) > router.length_threshold_tokens
    )

    semantic_ranks: dict[int, int] | None = None
    semantic_scores: dict[int, float] = {}
    fell_back = False
    if wants_semantic:
        if span_texts is None:
            raise ValueError("semantic ranking requires candidate span texts")
        try:
            semantic_ranks, semantic_scores = _semantic_ranks(
                provider, candidates.query_text, span_texts
            )
        except EmbeddingUnavailableError:
            if not allow_fallback:
                raise
            logger.warning(
                "embeddings unavailable for query %r; using lexical ranks",
                candidates.query_text[:60],
            )
            fell_back = True

    if strategy is Strategy.OKAPI:
        ordered = sorted(okapi_ranks, key=okapi_ranks.get)
        route = Route.LEXICAL
    elif strategy is Strategy.PLUS:
        ordered = sorted(plus_ranks, key=plus_ranks.get)
        route = Route.LEXICAL
    elif semantic_ranks is not None and strategy is Strategy.SEMANTIC:
        ordered = sorted(semantic_ranks, key=semantic_ranks.get)
        route = Route.SEMANTIC
    elif semantic_ranks is not None:
        ordered = fuse_ranks(semantic_ranks, plus_ranks, plus_scores)
        route = Route.SEMANTIC
    else:
        ordered = fuse_ranks(okapi_ranks, plus_ranks, plus_scores)
        route = Route.LEXICAL

    entries = []
    for rank, span_id in enumerate(ordered, start=1):
        component_ranks = {"okapi": okapi_ranks[span_id], "plus": plus_ranks[span_id]}
        component_scores = {
            "okapi": okapi_scores[span_id],
            "plus": plus_scores[span_id],
        }
        if semantic_ranks is not None:
            component_ranks["semantic"] = semantic_ranks[span_id]
            component_scores["semantic"] = semantic_scores[span_id]
        entries.append(
            RankedSpan(
                span_id=span_id,
                rank=rank,
                component_ranks=component_ranks,
                component_scores=component_scores,
            )
        )
    return RankedEvidence(route=route, entries=entries, fell_back=fell_back)
