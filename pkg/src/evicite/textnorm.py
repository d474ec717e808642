"""Text normalization, tokenization, and hashing shared across the pipeline.

Evidence spans are conflated on normalized text (lowercase, collapsed
whitespace), and the same normalization feeds embedding cache keys, so
every consumer must go through these helpers.
"""

import hashlib
import re
import string

_TOKEN_RE = re.compile(r"[^\W_]+", re.UNICODE)
_WS_RE = re.compile(r"\s+")

# Tokens glued to their neighbor when reassembling surface text.
_NO_SPACE_BEFORE = {",", ".", ";", ":", "!", "?", ")", "]", "}", "%", "'s", "n't", "'"}
_NO_SPACE_AFTER = ("(", "[", "{")

_PUNCT = set(string.punctuation)


def normalize_text(text: str) -> str:
    """Canonical form used for exact-match conflation: lowercase,
    whitespace collapsed to single spaces, stripped."""
    return _WS_RE.sub(" ", text.lower()).strip()


def tokenize(text: str) -> list[str]:
    """Lowercased tokens split on whitespace and punctuation boundaries.

    >>> tokenize("BiLSTM-CRF model")
    ['bilstm', 'crf', 'model']
    """
    return _TOKEN_RE.findall(text.lower())


def content_key(text: str) -> str:
    """Hex digest keying a span's normalized text (embedding cache key)."""
    return hashlib.sha256(normalize_text(text).encode("utf-8")).hexdigest()


def content_key_bytes(text: str) -> bytes:
    """Raw 32-byte digest form of :func:`content_key`."""
    return hashlib.sha256(normalize_text(text).encode("utf-8")).digest()


def is_punctuation(token: str) -> bool:
    return bool(token) and all(ch in _PUNCT for ch in token)


def detokenize(tokens: list[str]) -> str:
    """Join tokens back into display text, reattaching punctuation."""
    text = ""
    for tok in tokens:
        if not text:
            text = tok
        elif tok in _NO_SPACE_BEFORE or text.endswith(_NO_SPACE_AFTER):
            text += tok
        else:
            text += " " + tok
    return text
