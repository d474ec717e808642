"""Corpus ingestion for the evidence-grounded citation recommender:
topic filtering, citation-marker normalization, sentence annotation, and
embedding caches plus an HTTP embedding provider."""

from .annotate import HeuristicAnnotator, split_sentences, tokenize_sentence
from .cache import embed_spans, write_binary, write_jsonl
from .encoder import EncoderUnavailableError, HashingEncoder, cache_key, make_encoder
from .markers import REF_TOKEN, normalize_markers
from .parse import ParseDiagnostics, normalize_and_parse, read_dump, write_outputs
from .topic_filter import filter_by_topic, matches_topic
from .types import RawPaper, SentenceRecord

__version__ = "0.1.0"

__all__ = [
    "EncoderUnavailableError",
    "HashingEncoder",
    "HeuristicAnnotator",
    "ParseDiagnostics",
    "RawPaper",
    "REF_TOKEN",
    "SentenceRecord",
    "cache_key",
    "embed_spans",
    "filter_by_topic",
    "make_encoder",
    "matches_topic",
    "normalize_and_parse",
    "normalize_markers",
    "read_dump",
    "split_sentences",
    "tokenize_sentence",
    "write_binary",
    "write_jsonl",
    "write_outputs",
]
