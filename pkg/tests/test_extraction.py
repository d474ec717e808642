import random

import pytest

import worked_sentences as ws
from conftest import make_sentence
from evicite.extraction import (
    MalformedTreeError,
    extract_all,
    extract_corpus,
    extract_dep_spans,
    extract_full_sentence_spans,
    extract_token_split_spans,
    group_refs,
    ExtractionReport,
)
from evicite.textnorm import normalize_text
from evicite.types import REFGROUP_PLACEHOLDER, ROOT, SpanRule

REF = "[REF]"


def by_rule(spans, rule):
    return [s for s in spans if s.rule is rule]


def pairs(spans):
    return {(normalize_text(s.text), s.refgroup.position) for s in spans}


# ---------------------------------------------------------------- grouping


def test_group_refs_merges_comma_separated_run():
    words = ["There", "are", "two", "broad", "types", "of", "text",
             "summarization", "approaches", ",", "namely", ",", "extractive",
             REF, ",", REF, ",", REF, "and", "abstractive", REF]
    refs = {13: ["P1"], 15: ["P2"], 17: ["P3"], 20: ["P4"]}
    grouped = group_refs(make_sentence(words, refs))

    assert len(grouped.refgroups) == 2
    first, second = grouped.refgroups
    assert first.cited_paper_ids == frozenset({"P1", "P2", "P3"})
    assert second.cited_paper_ids == frozenset({"P4"})
    texts = [t.text for t in grouped.tokens]
    assert texts == ["There", "are", "two", "broad", "types", "of", "text",
                     "summarization", "approaches", ",", "namely", ",",
                     "extractive", REFGROUP_PLACEHOLDER, "and", "abstractive",
                     REFGROUP_PLACEHOLDER]
    assert first.position == 13
    assert second.position == 16


def test_group_refs_single_marker():
    grouped = group_refs(make_sentence(["fasttext", REF], {1: ["P1"]}))
    assert len(grouped.refgroups) == 1
    assert grouped.refgroups[0].cited_paper_ids == frozenset({"P1"})


def test_group_refs_adjacent_markers_no_separator():
    grouped = group_refs(
        make_sentence(["models", REF, REF, "here"], {1: ["P1"], 2: ["P2"]})
    )
    assert len(grouped.refgroups) == 1
    assert grouped.refgroups[0].cited_paper_ids == frozenset({"P1", "P2"})
    assert [t.text for t in grouped.tokens] == ["models", REFGROUP_PLACEHOLDER, "here"]


def test_group_refs_word_breaks_run():
    grouped = group_refs(
        make_sentence(["a", REF, "versus", REF, "b"], {1: ["P1"], 3: ["P2"]})
    )
    assert len(grouped.refgroups) == 2


def test_group_refs_requires_marker():
    with pytest.raises(ValueError):
        group_refs(make_sentence(["no", "markers"], {}))


def test_group_refs_remaps_heads_into_run():
    # "metrics" headed by the second marker of a merged run must end up
    # pointing at the collapsed group token
    words = ["metrics", REF, ",", REF, "end"]
    edges = {0: (3, "dep"), 4: (1, "dep")}
    grouped = group_refs(make_sentence(words, {1: ["P1"], 3: ["P2"]}, edges))
    assert [t.text for t in grouped.tokens] == ["metrics", REFGROUP_PLACEHOLDER, "end"]
    assert grouped.tokens[0].head == 1
    assert grouped.tokens[2].head == 1


# ------------------------------------------------- dependency traversal


def test_dep_span_iex_parser():
    spans = extract_dep_spans(ws.iex_parser_sentence())
    assert len(spans) == 1
    assert spans[0].text == "IEX parser"
    assert spans[0].rule is SpanRule.DEP_TRAVERSAL


def test_dep_span_extractive_summarization():
    spans = extract_dep_spans(ws.extractive_summarization_sentence())
    assert [s.text for s in spans] == ["extractive summarization"]


def test_dep_span_stops_without_qualifying_edge():
    assert extract_dep_spans(ws.rouge_meteor_sentence()) == []


def test_dep_span_requires_adjacency():
    # qualifying label but the child is two positions away: no span
    words = ["deep", "model", "works", REF]
    edges = {1: (3, "compound")}
    spans = extract_dep_spans(make_sentence(words, {3: ["P1"]}, edges))
    assert spans == []


def test_dep_span_label_set_is_configurable():
    words = ["parser", REF]
    edges = {0: (1, "nmod")}
    sentence = make_sentence(words, {1: ["P1"]}, edges)
    assert extract_dep_spans(sentence) == []
    spans = extract_dep_spans(sentence, labels=frozenset({"nmod"}))
    assert [s.text for s in spans] == ["parser"]


def test_dep_span_contiguous_and_adjacent_to_marker():
    rng = random.Random(7)
    for _ in range(50):
        sentence = random_grouped_sentence(rng)
        for span in extract_dep_spans(sentence):
            start = span.refgroup.position - len(span.text.split())
            # reconstruct which positions produced this span
            texts = [t.text for t in sentence.tokens]
            width = 0
            pos = span.refgroup.position - 1
            collected = []
            while pos >= 0 and width < len(sentence.tokens):
                collected.insert(0, texts[pos])
                if normalize_text(" ".join(collected)) == normalize_text(span.text):
                    break
                pos -= 1
                width += 1
            assert normalize_text(" ".join(collected)) == normalize_text(span.text)


def test_malformed_tree_out_of_range():
    words = ["a", REF]
    sentence = make_sentence(words, {1: ["P1"]}, {0: (9, "amod")})
    with pytest.raises(MalformedTreeError):
        extract_dep_spans(sentence)


def test_malformed_tree_cycle():
    words = ["a", "b", REF]
    sentence = make_sentence(words, {2: ["P1"]}, {0: (1, "dep"), 1: (0, "dep")})
    with pytest.raises(MalformedTreeError):
        extract_dep_spans(sentence)


# ------------------------------------------------------- token splitting


def test_token_split_two_groups():
    words = ["There", "are", "two", "broad", "types", ",", "namely", ",",
             "extractive", REF, "and", "abstractive", REF]
    refs = {9: ["P1"], 12: ["P2"]}
    spans = extract_token_split_spans(make_sentence(words, refs))
    assert [(s.text, sorted(s.refgroup.cited_paper_ids)) for s in spans] == [
        ("There are two broad types, namely, extractive", ["P1"]),
        ("and abstractive", ["P2"]),
    ]


def test_token_split_group_at_start_has_no_segment():
    words = [REF, "introduced", "this"]
    spans = extract_token_split_spans(make_sentence(words, {0: ["P1"]}))
    assert spans == []


def test_token_split_trailing_text_unmapped():
    words = ["uses", "embeddings", REF, "for", "tagging"]
    spans = extract_token_split_spans(make_sentence(words, {2: ["P1"]}))
    assert len(spans) == 1
    assert spans[0].text == "uses embeddings"
    assert spans[0].rule is SpanRule.TOKEN_SPLIT


def test_token_split_strips_edge_punctuation():
    words = ["BERT", REF, ",", "a", "model", REF]
    spans = extract_token_split_spans(make_sentence(words, {1: ["P1"], 5: ["P2"]}))
    assert [s.text for s in spans] == ["BERT", "a model"]


def test_token_split_punctuation_only_segment_dropped():
    words = ["BERT", REF, ",", REF]
    # the two markers here cite different papers and are joined by a comma,
    # so grouping would merge them; feed ungrouped to isolate the split rule
    spans = extract_token_split_spans(make_sentence(words, {1: ["P1"], 3: ["P2"]}))
    assert [s.text for s in spans] == ["BERT"]


# ------------------------------------------------------- full sentence


def test_full_sentence_for_final_group():
    spans = extract_full_sentence_spans(ws.sentence_transformers_sentence())
    assert [s.text for s in spans] == [
        "Context embeddings were generated using Sentence Transformers"
    ]
    assert spans[0].rule is SpanRule.FULL_SENTENCE


def test_full_sentence_for_only_group():
    spans = extract_full_sentence_spans(ws.rouge_meteor_sentence())
    assert [s.text for s in spans] == [
        "They used ROUGE and METEOR metrics for evaluating their models"
    ]


def test_full_sentence_ignores_terminal_punctuation():
    words = ["embeddings", "from", "toolkits", REF, "."]
    spans = extract_full_sentence_spans(make_sentence(words, {3: ["P1"]}))
    assert [s.text for s in spans] == ["embeddings from toolkits."]


def test_no_full_sentence_for_two_midsentence_groups():
    words = ["a", REF, "b", REF, "c"]
    spans = extract_full_sentence_spans(
        make_sentence(words, {1: ["P1"], 3: ["P2"]})
    )
    assert spans == []


def test_two_groups_final_one_gets_full_sentence():
    words = ["extractive", REF, "and", "abstractive", REF]
    spans = extract_full_sentence_spans(
        make_sentence(words, {1: ["P1"], 4: ["P2"]})
    )
    assert len(spans) == 1
    assert spans[0].refgroup.position == 4
    assert spans[0].text == "extractive and abstractive"


# ------------------------------------------------------------ extract_all


def test_extract_all_bert_sentence_exact_pairs():
    spans = extract_all(ws.bert_llm_sentence())
    expected = {
        ("bert", 3),
        ("large language model", 10),
        ("to generate text embeddings", 16),
        ("they used bert, a popular large language model, to generate text embeddings", 16),
    }
    assert pairs(spans) == expected


def test_extract_all_dedups_identical_texts():
    # traversal and token split both produce "fasttext" for the same group
    words = ["fasttext", REF]
    edges = {0: (1, "compound")}
    spans = extract_all(make_sentence(words, {1: ["P1"]}, edges))
    texts = [normalize_text(s.text) for s in spans]
    assert texts.count("fasttext") == 1


def test_extract_all_single_group_emits_full_sentence():
    rng = random.Random(21)
    for _ in range(50):
        sentence = random_grouped_sentence(rng, n_groups=1)
        spans = extract_all(sentence)
        assert any(s.rule is SpanRule.FULL_SENTENCE for s in spans)


def test_extract_all_never_leaks_placeholders():
    rng = random.Random(3)
    for _ in range(100):
        sentence = random_grouped_sentence(rng)
        for span in extract_all(sentence):
            assert REF not in span.text
            assert REFGROUP_PLACEHOLDER not in span.text
            assert normalize_text(span.text)


def test_extract_all_deterministic():
    sentence = ws.bert_llm_sentence()
    assert extract_all(sentence) == extract_all(sentence)


# ------------------------------------------- reference-oracle comparison

VOCAB = ["neural", "models", "for", "parsing", "toolkit", "embeddings",
         "alignment", "translation", "evaluated", "with", "metrics", ","]


def random_grouped_sentence(rng, n_groups=None):
    """Random small sentence with markers scattered through it."""
    n_words = rng.randint(1, 8)
    words = [rng.choice(VOCAB) for _ in range(n_words)]
    if n_groups is None:
        n_groups = rng.randint(1, 3)
    positions = sorted(rng.sample(range(n_words + n_groups), n_groups))
    refs = {}
    for i, pos in enumerate(positions):
        words.insert(pos, REF)
        refs[pos] = [f"P{i}"]
    # random leftward compound/amod chains plus noise edges
    edges = {}
    for pos in range(len(words) - 1):
        if rng.random() < 0.4:
            label = rng.choice(["compound", "amod", "det", "nsubj"])
            edges[pos] = (pos + 1, label)
    sentence = make_sentence(words, refs, edges)
    return group_refs(sentence)


def reference_extract_all(sentence, labels=frozenset({"compound", "amod"})):
    """Literal restatement of the three rules, kept independent of the
    implementation under test."""
    from evicite.textnorm import detokenize, is_punctuation

    markers = {g.position for g in sentence.refgroups}
    results = []

    dep_covered = set()
    for group in sentence.refgroups:
        chain = []
        curr = group.position
        while True:
            child = curr - 1
            if child < 0 or child in markers:
                break
            token = sentence.tokens[child]
            if token.head == curr and token.label.lower() in labels:
                chain.insert(0, child)
                curr = child
            else:
                break
        if chain:
            text = detokenize([sentence.tokens[p].text for p in chain])
            if normalize_text(text):
                results.append((text, group.position))
                dep_covered.add(group.position)

    ordered = sorted(sentence.refgroups, key=lambda g: g.position)
    prev = -1
    for group in ordered:
        segment = list(range(prev + 1, group.position))
        prev = group.position
        if group.position in dep_covered:
            continue
        toks = [sentence.tokens[p].text for p in segment]
        while toks and is_punctuation(toks[0]):
            toks.pop(0)
        while toks and is_punctuation(toks[-1]):
            toks.pop()
        text = detokenize(toks)
        if normalize_text(text):
            results.append((text, group.position))

    non_marker = [t.text for p, t in enumerate(sentence.tokens) if p not in markers]
    full_text = detokenize(non_marker)
    for group in sentence.refgroups:
        tail = sentence.tokens[group.position + 1:]
        final = all(is_punctuation(t.text) for t in tail)
        if (final or len(sentence.refgroups) == 1) and normalize_text(full_text):
            results.append((full_text, group.position))

    seen = set()
    deduped = []
    for text, pos in results:
        key = (normalize_text(text), pos)
        if key not in seen:
            seen.add(key)
            deduped.append(key)
    return set(deduped)


def test_extract_all_matches_reference_on_random_fixtures():
    rng = random.Random(42)
    for _ in range(10):
        sentence = random_grouped_sentence(rng)
        assert pairs(extract_all(sentence)) == reference_extract_all(sentence)


# ------------------------------------------------------------- pipeline


def test_extract_corpus_skips_malformed_and_counts():
    good = ws.iex_parser_sentence()
    bad = make_sentence(["x", REF], {1: ["P1"]}, {0: (5, "amod")})
    report = ExtractionReport()
    spans = list(extract_corpus([good, bad], report=report))
    assert report.sentences_seen == 2
    assert report.sentences_skipped == 1
    assert report.spans_emitted == len(spans) > 0


def test_extract_corpus_skips_refless_sentences():
    refless = make_sentence(["no", "refs"], {})
    report = ExtractionReport()
    assert list(extract_corpus([refless], report=report)) == []
    assert report.sentences_without_refs == 1
