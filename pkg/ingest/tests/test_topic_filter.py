import logging

from evicite_ingest.topic_filter import filter_by_topic, matches_topic
from evicite_ingest.types import RawPaper


def make_paper(abstract, paper_id="P1"):
    return {"paper_id": paper_id, "abstract": abstract}


def test_full_topic_is_case_insensitive():
    assert matches_topic("We study Named Entity Recognition models.",
                         "named entity recognition")


def test_abbreviation_match():
    assert matches_topic("we study NER tagging", "named entity recognition", ["NER"])


def test_allcaps_abbreviation_is_case_sensitive():
    assert not matches_topic("the inner workings of parsers",
                             "named entity recognition", ["NER"])


def test_lowercase_abbreviation_is_case_insensitive():
    assert matches_topic("Neural MT Systems", "machine translation", ["mt"])


def test_off_topic_dropped():
    kept = list(filter_by_topic([make_paper("image segmentation networks")],
                                "machine translation"))
    assert kept == []


def test_on_topic_retained():
    kept = list(filter_by_topic([make_paper("a machine translation system")],
                                "machine translation"))
    assert len(kept) == 1
    assert isinstance(kept[0], RawPaper)


def test_malformed_record_skipped_with_warning(caplog):
    stream = [{"no_id": True}, make_paper("machine translation")]
    with caplog.at_level(logging.WARNING):
        kept = list(filter_by_topic(stream, "machine translation"))
    assert len(kept) == 1
    assert any("malformed" in r.message for r in caplog.records)


def test_filter_is_idempotent():
    papers = [make_paper("machine translation work", f"P{i}") for i in range(4)]
    once = list(filter_by_topic(papers, "machine translation"))
    twice = list(filter_by_topic(once, "machine translation"))
    assert [p.paper_id for p in once] == [p.paper_id for p in twice]


def test_empty_topic_rejected():
    import pytest

    with pytest.raises(ValueError):
        list(filter_by_topic([], ""))
