"""Sentence segmentation and lightweight dependency annotation.

The annotator is deliberately simple and fully deterministic: tokens are
words (hyphens and internal apostrophes kept), and noun-phrase-like runs
ending at a citation marker are chained onto it with compound/amod
labels, which is the structure the downstream span extractor traverses.
The interface is small so a real parser can be dropped in when one is
available; the diagnostics report records which annotator produced a
file.
"""

from __future__ import annotations

import re

from .markers import REF_TOKEN
from .types import AnnotatedToken

ROOT = -1

_SENTENCE_SPLIT_RE = re.compile(r"(?<=[.!?])\s+(?=[A-Z\[])")
_TOKEN_RE = re.compile(r"\[REF\]|[A-Za-z0-9]+(?:[-'][A-Za-z0-9]+)*|[^\sA-Za-z0-9]")

# function words that terminate a noun-phrase chain
_STOPWORDS = frozenset("""
a an the this that these those of in on at by for with from to as into over
under between during and or but nor so yet is are was were be been being has
have had do does did will would can could may might shall should must not no
we they he she it its our their such than then there here when where which
while who whom whose very more most other some any each using used use
""".split())

_ADJ_SUFFIXES = ("al", "ive", "ous", "ic", "ed", "able", "ible", "ary")


class AnnotatorError(ValueError):
    """The annotator could not process a sentence."""


def split_sentences(text: str) -> list[str]:
    """Regex segmentation: break after terminal punctuation followed by an
    uppercase letter or a citation marker."""
    parts = [part.strip() for part in _SENTENCE_SPLIT_RE.split(text)]
    return [part for part in parts if part]


def tokenize_sentence(text: str) -> list[str]:
    return _TOKEN_RE.findall(text)


def _chainable(token: str) -> bool:
    if token == REF_TOKEN or not token[0].isalnum():
        return False
    return token.lower() not in _STOPWORDS


def _chain_label(token: str) -> str:
    lower = token.lower()
    if lower == token and lower.endswith(_ADJ_SUFFIXES):
        return "amod"
    return "compound"


class HeuristicAnnotator:
    """Deterministic annotator producing marker-anchored compound chains.

    Up to ``max_chain`` content tokens immediately left of each marker are
    linked rightward (each token headed by its right neighbor, the last one
    by the marker itself); everything else hangs off the root.
    """

    name = "heuristic-v1"

    def __init__(self, max_chain: int = 4):
        self.max_chain = max_chain

    def annotate(self, tokens: list[str]) -> list[AnnotatedToken]:
        if not tokens:
            raise AnnotatorError("empty sentence")
        heads = [ROOT] * len(tokens)
        labels = [""] * len(tokens)
        for pos, token in enumerate(tokens):
            if token != REF_TOKEN:
                continue
            child = pos - 1
            while child >= 0 and (pos - child) <= self.max_chain and _chainable(tokens[child]):
                heads[child] = child + 1
                labels[child] = _chain_label(tokens[child])
                child -= 1
        return [
            AnnotatedToken(text=t, head=heads[i], label=labels[i])
            for i, t in enumerate(tokens)
        ]
