"""Query the engine and read the evidence behind each recommendation.

Short queries ride the lexical route: both BM25 variants score every
span, the top lists are unioned, and their ranks are summed. Each
recommended paper arrives with the evidence span that earned its best
rank, plus its support count, which is the whole point: you can see why
a paper was suggested.
"""

from pathlib import Path

from evicite import AppConfig, build, run_query
from evicite.database import read_papers
from evicite.embeddings import DisabledProvider
from evicite.extraction import extract_corpus, read_sentences

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"


def main():
    papers = read_papers(FIXTURES / "papers.jsonl")
    stream = (s.to_record() for s in extract_corpus(read_sentences(FIXTURES / "sentences.jsonl")))
    db = build(stream, papers)
    config = AppConfig()

    for query in ["FastAlign", "fasttext", "attention mechanisms", "sequence tagging"]:
        result = run_query(db, config, query, k=3, provider=DisabledProvider())
        print(f"query: {query!r}  (route: {result.ranked.route_label()})")
        for rec in result.recommendations:
            meta = rec.paper
            print(f"  {rec.rank}. {meta.title} ({meta.year})")
            print(f"     evidence: {rec.evidence_span!r}")
            print(f"     best evidence rank {rec.explain['p_r']}, "
                  f"total support {rec.explain['p_s']}")
        print()


if __name__ == "__main__":
    main()
