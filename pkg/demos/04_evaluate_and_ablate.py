"""Score the engine on an evaluation set and compare ranking strategies.

Datapoints whose ground-truth papers never appear in the database are
filtered out first; the rest are scored with MRR and Recall@N. The same
harness drives the ablation strategies, so each row below uses an
identical database and differs only in how candidates are ordered.
"""

from pathlib import Path

from evicite import AppConfig, Strategy, build, evaluate, filter_eval_candidates
from evicite.database import read_papers
from evicite.embeddings import HashingProvider
from evicite.evaluation import load_eval_file
from evicite.extraction import extract_corpus, read_sentences

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"


def main():
    papers = read_papers(FIXTURES / "papers.jsonl")
    stream = (s.to_record() for s in extract_corpus(read_sentences(FIXTURES / "sentences.jsonl")))
    db = build(stream, papers)

    datapoints = load_eval_file(FIXTURES / "eval.jsonl")
    kept = filter_eval_candidates(datapoints, db)
    print(f"eval set: {len(datapoints)} datapoints, {len(kept)} with a paper in the db\n")

    provider = HashingProvider()
    print(f"{'strategy':<16} {'MRR':>8} {'R@1':>6} {'R@3':>6} {'R@10':>6}")
    for strategy in Strategy:
        config = AppConfig(strategy=strategy)
        report = evaluate(db, config, kept, provider=provider)
        print(f"{strategy.value:<16} {report.mrr:>8.4f} {report.recall_at[1]:>6.2f} "
              f"{report.recall_at[3]:>6.2f} {report.recall_at[10]:>6.2f}")

    config = AppConfig()
    report = evaluate(db, config, kept, provider=provider)
    print("\nper-query breakdown (conditional strategy):")
    for row in report.per_query:
        print(f"  {row['query']!r}: first hit at rank {row['first_hit_rank']}, "
              f"rr={row['reciprocal_rank']:.3f}, route={row['route']}")


if __name__ == "__main__":
    main()
