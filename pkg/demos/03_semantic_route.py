"""Show the conditional semantic route and its lexical fallback.

Queries longer than the token threshold (default 50) bring in embedding
similarity: candidates are re-ordered by fusing the cosine-similarity
rank with the delta-floored lexical rank. When no embedding source is
available the engine logs a warning and falls back to lexical ranks,
flagging the response route so callers can tell.

The deterministic hashing encoder stands in for a real one here; swap in
an HTTP provider (see the ingest package) for meaningful semantics.
"""

import logging
from pathlib import Path

from evicite import AppConfig, build, run_query
from evicite.embeddings import DisabledProvider, HashingProvider
from evicite.database import read_papers
from evicite.extraction import extract_corpus, read_sentences

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"

LONG_QUERY = (
    "we study how attention mechanisms inside encoder decoder translation "
    "models distribute probability mass across source positions and whether "
    "the induced alignments resemble those produced by classical statistical "
    "word alignment tools such as the reparameterized ibm models when the "
    "training corpus is small noisy or drawn from a distant domain and how "
    "that changes downstream translation quality"
)


def main():
    logging.basicConfig(level=logging.WARNING)
    papers = read_papers(FIXTURES / "papers.jsonl")
    stream = (s.to_record() for s in extract_corpus(read_sentences(FIXTURES / "sentences.jsonl")))
    db = build(stream, papers)
    config = AppConfig()

    n_tokens = len(LONG_QUERY.split())
    print(f"query has {n_tokens} tokens; threshold is {config.length_threshold}\n")

    provider = HashingProvider()
    result = run_query(db, config, LONG_QUERY, k=3, provider=provider)
    print(f"with an embedding provider -> route: {result.ranked.route_label()}")
    print(f"provider was asked for {provider.texts_embedded} embeddings "
          f"(the query plus each of the {provider.texts_embedded - 1} candidates)")
    for rec in result.recommendations:
        print(f"  {rec.rank}. {rec.paper.title}")
        print(f"     evidence: {rec.evidence_span!r}")
        print(f"     scores: { {k: round(v, 4) for k, v in rec.explain['scores'].items()} }")
    print()

    result = run_query(db, config, LONG_QUERY, k=3, provider=DisabledProvider())
    print(f"without any provider -> route: {result.ranked.route_label()} "
          "(lexical ordering, flagged as a fallback)")

    short = run_query(db, config, "FastAlign", k=1, provider=provider)
    before = provider.texts_embedded
    assert short.ranked.route_label() == "lexical"
    print(f"\nshort query -> route: {short.ranked.route_label()}; "
          f"provider calls unchanged ({provider.texts_embedded - before} new embeddings)")


if __name__ == "__main__":
    main()
