import functools
import random

import pytest

from conftest import paper, toy_db
from evicite.config import AppConfig
from evicite.embeddings import DisabledProvider
from evicite.recommend import (
    PaperAggregate,
    aggregate,
    payload,
    rank_papers,
    recommend,
    run_query,
    to_json,
)
from evicite.rerank import RankedEvidence, RankedSpan, Route


def ranked_from(span_ranks):
    """span_ranks: list of span ids in rank order."""
    return RankedEvidence(
        route=Route.LEXICAL,
        entries=[
            RankedSpan(span_id=s, rank=r, component_ranks={}, component_scores={})
            for r, s in enumerate(span_ranks, start=1)
        ],
    )


PAPERS = [paper("X", 2016), paper("Y", 2018), paper("Z", 2014)]


# ------------------------------------------------------------- aggregate


def test_aggregate_single_span():
    db = toy_db([("fasttext", ["X"])] * 3, PAPERS)
    span_id = db.span_id_of("fasttext")
    aggs = aggregate(ranked_from([span_id]), db)
    assert len(aggs) == 1
    assert aggs[0].paper_id == "X"
    assert aggs[0].best_rank == 1
    assert aggs[0].total_support == 3
    assert aggs[0].best_span_id == span_id


def test_aggregate_min_rank_and_summed_support():
    # X cited by spans at ranks 2 and 5 with supports 1 and 4
    db = toy_db(
        [("a", ["X"])] + [("b", ["X"])] * 4 + [("c", ["Y"])] * 3 + [("d", ["Z"]), ("e", ["Z"])],
        PAPERS,
    )
    ids = {t: db.span_id_of(t) for t in "abcde"}
    order = [ids["c"], ids["a"], ids["d"], ids["e"], ids["b"]]  # ranks 1..5
    aggs = {a.paper_id: a for a in aggregate(ranked_from(order), db)}
    assert aggs["X"].best_rank == 2
    assert aggs["X"].total_support == 5
    assert aggs["X"].best_span_id == ids["a"]
    assert aggs["Y"].best_rank == 1
    assert aggs["Z"].total_support == 2


def test_aggregate_skips_papers_outside_candidates():
    db = toy_db([("a", ["X"]), ("b", ["Y"])], PAPERS)
    aggs = aggregate(ranked_from([db.span_id_of("a")]), db)
    assert [a.paper_id for a in aggs] == ["X"]


# ------------------------------------------------------------ rank_papers


def test_rank_papers_best_rank_dominates():
    a = PaperAggregate("A", best_rank=1, total_support=1, recency=2016, best_span_id=0)
    b = PaperAggregate("B", best_rank=2, total_support=9, recency=2020, best_span_id=1)
    assert [p.paper_id for p in rank_papers([b, a])] == ["A", "B"]


def test_rank_papers_recency_breaks_support_tie():
    a = PaperAggregate("A", best_rank=1, total_support=2, recency=2010, best_span_id=0)
    b = PaperAggregate("B", best_rank=1, total_support=2, recency=2018, best_span_id=1)
    assert [p.paper_id for p in rank_papers([a, b])] == ["B", "A"]


def test_rank_papers_single():
    a = PaperAggregate("A", 1, 1, 2000, 0)
    assert rank_papers([a]) == [a]


def test_rank_papers_unknown_year_sorts_last():
    a = PaperAggregate("A", 1, 1, 0, 0)
    b = PaperAggregate("B", 1, 1, 1997, 1)
    assert [p.paper_id for p in rank_papers([a, b])] == ["B", "A"]


def pairwise_better(x: PaperAggregate, y: PaperAggregate) -> int:
    """Literal precedence comparison, kept independent of sort_key."""
    if x.best_rank != y.best_rank:
        return -1 if x.best_rank < y.best_rank else 1
    if x.total_support != y.total_support:
        return -1 if x.total_support > y.total_support else 1
    if x.recency != y.recency:
        return -1 if x.recency > y.recency else 1
    if x.paper_id != y.paper_id:
        return -1 if x.paper_id < y.paper_id else 1
    return 0


def test_rank_papers_matches_bruteforce_comparator_on_1000_triples():
    rng = random.Random(101)
    mismatches = 0
    for _ in range(1000):
        aggs = [
            PaperAggregate(
                paper_id=f"P{i}",
                best_rank=rng.randint(1, 4),
                total_support=rng.randint(1, 5),
                recency=rng.choice([0, 1999, 2010, 2015, 2020]),
                best_span_id=i,
            )
            for i in range(3)
        ]
        expected = sorted(aggs, key=functools.cmp_to_key(pairwise_better))
        if rank_papers(aggs) != expected:
            mismatches += 1
    assert mismatches == 0


# -------------------------------------------------------------- recommend


CONFIG = AppConfig()


def test_recommend_exact_match_query_tops_the_list(four_paper_db):
    recs = recommend(four_paper_db, CONFIG, "FastAlign", provider=DisabledProvider())
    assert recs[0].paper.paper_id == "PA"
    assert recs[0].evidence_span == "FastAlign"
    assert recs[0].rank == 1


def test_recommend_k_zero(four_paper_db):
    assert recommend(four_paper_db, CONFIG, "FastAlign", k=0) == []


def test_recommend_k_truncates(four_paper_db):
    recs = recommend(four_paper_db, CONFIG, "fasttext embeddings", k=1)
    assert len(recs) == 1


def test_recommend_papers_unique_and_grounded(four_paper_db):
    recs = recommend(four_paper_db, CONFIG, "fasttext embeddings alignment", k=-1)
    ids = [r.paper.paper_id for r in recs]
    assert len(ids) == len(set(ids))
    for rec in recs:
        record = four_paper_db.record(four_paper_db.span_id_of(rec.evidence_span))
        assert rec.paper.paper_id in record.citations


def test_recommend_empty_candidates_yield_empty_list(four_paper_db):
    assert recommend(four_paper_db, CONFIG, "") == []


def test_recommend_deterministic(four_paper_db):
    first = recommend(four_paper_db, CONFIG, "fasttext alignment", k=-1)
    second = recommend(four_paper_db, CONFIG, "fasttext alignment", k=-1)
    assert first == second


def test_removing_candidate_never_improves_surviving_best_rank(four_paper_db):
    db = four_paper_db
    result = run_query(db, CONFIG, "fasttext embeddings alignment", k=-1,
                       provider=DisabledProvider())
    full = {a.paper_id: a.best_rank for a in aggregate(result.ranked, db)}
    for drop in range(len(result.ranked.entries)):
        remaining = [e for i, e in enumerate(result.ranked.entries) if i != drop]
        reduced = RankedEvidence(route=result.ranked.route, entries=remaining)
        for agg in aggregate(reduced, db):
            assert agg.best_rank >= full[agg.paper_id]


def test_payload_schema(four_paper_db):
    result = run_query(four_paper_db, CONFIG, "FastAlign", provider=DisabledProvider())
    body = payload(result)
    assert body["query"] == "FastAlign"
    assert body["route"] == "lexical"
    first = body["results"][0]
    assert set(first) == {"rank", "paper", "evidence", "span_id", "p_r", "p_s", "scores"}
    assert set(first["paper"]) == {"id", "title", "year", "venue", "authors"}
    assert first["paper"]["id"] == "PA"
    assert four_paper_db.record(first["span_id"]).span_text == first["evidence"]
    # canonical serialization is stable
    assert to_json(body) == to_json(payload(
        run_query(four_paper_db, CONFIG, "FastAlign", provider=DisabledProvider())
    ))
