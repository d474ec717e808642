"""Evidence-span extraction from citation-bearing parsed sentences.

Three rules produce candidate spans for each citation group, applied
hierarchically per group: a dependency traversal captures tight entity
mentions, a token-sequence split captures the clause preceding a group
when the traversal finds nothing, and two whole-sentence conditions add
the full sentence as a span of its own.
"""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass, field
from typing import Iterable, Iterator

from .textnorm import detokenize, is_punctuation, normalize_text
from .types import (
    REFGROUP_PLACEHOLDER,
    ROOT,
    ExtractedSpan,
    ParsedSentence,
    RefGroup,
    SpanRule,
    Token,
)

logger = logging.getLogger(__name__)

# Dependency labels a traversal may follow (compound nouns and adjectival
# modifiers in common parser tag inventories). Matching is case-insensitive.
DEFAULT_TRAVERSAL_LABELS = frozenset({"compound", "amod"})

# Tokens allowed between two markers that still count as one citation run.
_SEPARATOR_WORDS = {"and", "or"}
_SEPARATOR_PUNCT = {",", ";", "&", "[", "]", "(", ")"}


class MalformedTreeError(ValueError):
    """Raised when a sentence's head indices are out of range or cyclic."""


def _is_separator(token: Token) -> bool:
    text = token.text
    return text in _SEPARATOR_PUNCT or text.lower() in _SEPARATOR_WORDS


def group_refs(sentence: ParsedSentence) -> ParsedSentence:
    """Collapse maximal runs of adjacent citation markers into single groups.

    Markers separated only by commas, conjunctions, or bracket tokens merge
    into one group citing the union of their papers; token positions and
    head indices are re-mapped onto the shortened sentence.
    """
    if not sentence.refgroups:
        raise ValueError("sentence has no citation markers to group")

    by_position = {g.position: g for g in sentence.refgroups}
    marker_positions = sorted(by_position)

    # Runs of marker positions; interior tokens must all be separators.
    runs: list[list[int]] = [[marker_positions[0]]]
    for pos in marker_positions[1:]:
        prev = runs[-1][-1]
        between = sentence.tokens[prev + 1 : pos]
        if all(_is_separator(t) for t in between):
            runs[-1].append(pos)
        else:
            runs.append([pos])

    # Old position -> new position, collapsing each run to one token.
    run_span = {}  # first position of run -> last position
    for run in runs:
        run_span[run[0]] = run[-1]

    old_to_new: dict[int, int] = {}
    new_tokens: list[Token] = []
    new_groups: list[RefGroup] = []
    old = 0
    while old < len(sentence.tokens):
        if old in run_span:
            last = run_span[old]
            new_pos = len(new_tokens)
            for covered in range(old, last + 1):
                old_to_new[covered] = new_pos
            run = [p for p in range(old, last + 1) if p in by_position]
            cited = frozenset().union(*(by_position[p].cited_paper_ids for p in run))
            head, label = sentence.tokens[old].head, sentence.tokens[old].label
            for p in run:  # prefer a head that escapes the collapsed run
                if not old <= sentence.tokens[p].head <= last:
                    head, label = sentence.tokens[p].head, sentence.tokens[p].label
                    break
            new_tokens.append(Token(text=REFGROUP_PLACEHOLDER, head=head, label=label))
            new_groups.append(RefGroup(position=new_pos, cited_paper_ids=cited))
            old = last + 1
        else:
            old_to_new[old] = len(new_tokens)
            new_tokens.append(sentence.tokens[old])
            old += 1

    def remap(head: int) -> int:
        if head == ROOT:
            return ROOT
        if head not in old_to_new:
            raise MalformedTreeError(f"head {head} out of range")
        return old_to_new[head]

    remapped = []
    for new_pos, tok in enumerate(new_tokens):
        head = remap(tok.head)
        if head == new_pos:  # head collapsed into this token's own run
            head = ROOT
        remapped.append(Token(text=tok.text, head=head, label=tok.label))

    return ParsedSentence(
        tokens=tuple(remapped),
        refgroups=tuple(new_groups),
        paper_id=sentence.paper_id,
        sentence_index=sentence.sentence_index,
    )


def validate_tree(sentence: ParsedSentence) -> None:
    """Reject out-of-range heads and cyclic head chains."""
    n = len(sentence.tokens)
    for pos, tok in enumerate(sentence.tokens):
        if tok.head == ROOT:
            continue
        if not 0 <= tok.head < n:
            raise MalformedTreeError(f"token {pos} head {tok.head} out of range")
        if tok.head == pos:
            raise MalformedTreeError(f"token {pos} is its own head")
    for pos in range(n):
        seen = set()
        cur = pos
        while cur != ROOT:
            if cur in seen:
                raise MalformedTreeError(f"cycle through token {cur}")
            seen.add(cur)
            cur = sentence.tokens[cur].head


def _span_from_positions(
    sentence: ParsedSentence,
    positions: list[int],
    refgroup: RefGroup,
    rule: SpanRule,
    strip_edges: bool = False,
) -> ExtractedSpan | None:
    tokens = [sentence.tokens[p].text for p in sorted(positions)]
    if strip_edges:
        while tokens and is_punctuation(tokens[0]):
            tokens.pop(0)
        while tokens and is_punctuation(tokens[-1]):
            tokens.pop()
    text = detokenize(tokens)
    if not normalize_text(text):
        return None
    return ExtractedSpan(
        text=text,
        refgroup=refgroup,
        rule=rule,
        paper_id=sentence.paper_id,
        sentence_index=sentence.sentence_index,
    )


def extract_dep_spans(
    sentence: ParsedSentence,
    labels: frozenset[str] = DEFAULT_TRAVERSAL_LABELS,
) -> list[ExtractedSpan]:
    """Traverse the dependency tree leftward from each citation group.

    A step from ``curr`` to ``child`` is taken only when the child sits
    immediately left of ``curr`` and is attached to it by a label in
    ``labels``; the visited tokens, left to right, form the span.
    """
    validate_tree(sentence)
    labels = frozenset(l.lower() for l in labels)
    markers = sentence.marker_positions()
    children: dict[int, list[int]] = {}
    for pos, tok in enumerate(sentence.tokens):
        if tok.head != ROOT:
            children.setdefault(tok.head, []).append(pos)

    spans = []
    for group in sentence.refgroups:
        visited = {group.position}
        stack = [group.position]
        collected: list[int] = []
        while stack:
            curr = stack.pop()
            for child in children.get(curr, ()):
                if child in visited:
                    continue
                if curr - child == 1 and sentence.tokens[child].label.lower() in labels:
                    visited.add(child)
                    if child not in markers:
                        collected.append(child)
                    stack.append(child)
        if collected:
            span = _span_from_positions(sentence, collected, group, SpanRule.DEP_TRAVERSAL)
            if span is not None:
                spans.append(span)
    return spans


def extract_token_split_spans(sentence: ParsedSentence) -> list[ExtractedSpan]:
    """Cut the token sequence at citation groups; each segment between the
    previous group (or sentence start) and a group belongs to that group.
    Text after the last group maps to nothing."""
    if not sentence.refgroups:
        raise ValueError("sentence has no citation groups")
    ordered = sorted(sentence.refgroups, key=lambda g: g.position)
    spans = []
    prev_end = -1
    for group in ordered:
        segment = list(range(prev_end + 1, group.position))
        prev_end = group.position
        if not segment:
            continue
        span = _span_from_positions(
            sentence, segment, group, SpanRule.TOKEN_SPLIT, strip_edges=True
        )
        if span is not None:
            spans.append(span)
    return spans


def extract_full_sentence_spans(sentence: ParsedSentence) -> list[ExtractedSpan]:
    """Emit the whole sentence (markers removed) for a group that either
    closes the sentence, ignoring terminal punctuation, or is the only
    group in it."""
    if not sentence.refgroups:
        raise ValueError("sentence has no citation groups")
    markers = sentence.marker_positions()
    non_marker = [p for p in range(len(sentence.tokens)) if p not in markers]

    def sentence_final(group: RefGroup) -> bool:
        tail = sentence.tokens[group.position + 1 :]
        return all(is_punctuation(t.text) for t in tail)

    spans = []
    only = len(sentence.refgroups) == 1
    for group in sentence.refgroups:
        if only or sentence_final(group):
            span = _span_from_positions(sentence, non_marker, group, SpanRule.FULL_SENTENCE)
            if span is not None:
                spans.append(span)
    return spans


def extract_all(
    sentence: ParsedSentence,
    labels: frozenset[str] = DEFAULT_TRAVERSAL_LABELS,
) -> list[ExtractedSpan]:
    """Apply the three rules hierarchically over a grouped sentence.

    The dependency traversal claims a group first; the token split covers
    only groups the traversal left empty; full-sentence spans are added on
    top. Results are deduplicated on (normalized text, group position);
    when a traversal or split span already covers the whole sentence, the
    surviving span keeps the full-sentence tag.
    """
    dep = extract_dep_spans(sentence, labels)
    covered = {s.refgroup.position for s in dep}
    token_split = [
        s for s in extract_token_split_spans(sentence) if s.refgroup.position not in covered
    ]
    full = extract_full_sentence_spans(sentence)

    seen: set[tuple[str, int]] = set()
    result = []
    for span in [*full, *dep, *token_split]:
        key = (normalize_text(span.text), span.refgroup.position)
        if key not in seen:
            seen.add(key)
            result.append(span)
    return result


@dataclass
class ExtractionReport:
    """Counts from a corpus extraction run."""

    sentences_seen: int = 0
    sentences_skipped: int = 0
    sentences_without_refs: int = 0
    spans_emitted: int = 0
    skipped_details: list[str] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "sentences_seen": self.sentences_seen,
            "sentences_skipped": self.sentences_skipped,
            "sentences_without_refs": self.sentences_without_refs,
            "spans_emitted": self.spans_emitted,
        }


def extract_corpus(
    sentences: Iterable[ParsedSentence],
    labels: frozenset[str] = DEFAULT_TRAVERSAL_LABELS,
    report: ExtractionReport | None = None,
) -> Iterator[ExtractedSpan]:
    """Group and extract over a sentence stream, skipping malformed parses."""
    if report is None:
        report = ExtractionReport()
    for sentence in sentences:
        report.sentences_seen += 1
        if not sentence.refgroups:
            report.sentences_without_refs += 1
            continue
        try:
            grouped = group_refs(sentence)
            spans = extract_all(grouped, labels)
        except MalformedTreeError as exc:
            report.sentences_skipped += 1
            detail = f"{sentence.paper_id}#{sentence.sentence_index}: {exc}"
            report.skipped_details.append(detail)
            logger.warning("skipping sentence %s", detail)
            continue
        for span in spans:
            report.spans_emitted += 1
            yield span


def read_sentences(path) -> Iterator[ParsedSentence]:
    """Read line-delimited parsed-sentence records."""
    with open(path, "r", encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                yield ParsedSentence.from_record(json.loads(line))
            except (json.JSONDecodeError, KeyError, ValueError) as exc:
                raise ValueError(f"{path}:{line_no}: bad sentence record: {exc}") from exc


def write_spans(path, spans: Iterable[ExtractedSpan]) -> int:
    """Write extracted spans as line-delimited records; returns the count."""
    n = 0
    with open(path, "w", encoding="utf-8") as fh:
        for span in spans:
            fh.write(json.dumps(span.to_record(), ensure_ascii=False) + "\n")
            n += 1
    return n
