"""Evidence-grounded local citation recommendation.

Given a query span of scientific text, rank (evidence span, paper) pairs
where each recommended paper is justified by a literature span that both
resembles the query and cites that paper.
"""

from .config import AppConfig, load_config, provider_from_config
from .database import (
    EvidenceDatabase,
    EvidenceRecord,
    IndexStats,
    build,
    load,
    lookup,
    save,
)
from .embeddings import (
    CacheFileProvider,
    DisabledProvider,
    EmbeddingUnavailableError,
    HashingProvider,
    HttpProvider,
    cosine,
)
from .evaluation import (
    EvalDatapoint,
    MetricsReport,
    evaluate,
    filter_eval_candidates,
    reciprocal_rank,
)
from .extraction import (
    extract_all,
    extract_corpus,
    extract_dep_spans,
    extract_full_sentence_spans,
    extract_token_split_spans,
    group_refs,
)
from .prefetch import Bm25Params, CandidateSet, idf, okapi_score, plus_score, prefetch
from .recommend import (
    PaperAggregate,
    QueryResult,
    Recommendation,
    aggregate,
    rank_papers,
    recommend,
    run_query,
)
from .rerank import (
    RankedEvidence,
    Route,
    RouterConfig,
    Strategy,
    fuse_ranks,
    rerank,
    semantic_score,
)
from .textnorm import normalize_text, tokenize
from .types import ExtractedSpan, PaperMetadata, ParsedSentence, RefGroup, SpanRule, Token

__version__ = "0.1.0"

__all__ = [
    "AppConfig",
    "Bm25Params",
    "CacheFileProvider",
    "CandidateSet",
    "DisabledProvider",
    "EmbeddingUnavailableError",
    "EvalDatapoint",
    "EvidenceDatabase",
    "EvidenceRecord",
    "ExtractedSpan",
    "HashingProvider",
    "HttpProvider",
    "IndexStats",
    "MetricsReport",
    "PaperAggregate",
    "PaperMetadata",
    "ParsedSentence",
    "QueryResult",
    "RankedEvidence",
    "Recommendation",
    "RefGroup",
    "Route",
    "RouterConfig",
    "SpanRule",
    "Strategy",
    "Token",
    "aggregate",
    "build",
    "cosine",
    "evaluate",
    "extract_all",
    "extract_corpus",
    "extract_dep_spans",
    "extract_full_sentence_spans",
    "extract_token_split_spans",
    "filter_eval_candidates",
    "fuse_ranks",
    "group_refs",
    "idf",
    "load",
    "load_config",
    "lookup",
    "normalize_text",
    "okapi_score",
    "plus_score",
    "prefetch",
    "provider_from_config",
    "rank_papers",
    "recommend",
    "reciprocal_rank",
    "rerank",
    "run_query",
    "save",
    "semantic_score",
    "tokenize",
]
