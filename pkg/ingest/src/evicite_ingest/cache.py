"""Embedding cache files in the formats the recommendation engine reads:
jsonl records of {key, vector}, or a binary layout of an 8-byte count
followed by 32-byte key digests and 768 little-endian float32 values."""

from __future__ import annotations

import json
import struct
from typing import Iterable

import numpy as np

from .encoder import EMBED_DIM, cache_key, normalize_key_text


def embed_spans(texts: Iterable[str], encoder) -> dict[str, np.ndarray]:
    """One cache entry per unique normalized text."""
    unique: dict[str, str] = {}
    for text in texts:
        normalized = normalize_key_text(text)
        if not normalized:
            raise ValueError("cannot embed an empty span")
        unique.setdefault(cache_key(text), normalized)
    keys = sorted(unique)
    vectors = encoder.encode([unique[k] for k in keys])
    entries = {}
    for key, vector in zip(keys, vectors):
        vector = np.asarray(vector, dtype=np.float64)
        if vector.shape != (EMBED_DIM,):
            raise ValueError(f"encoder produced shape {vector.shape}, need ({EMBED_DIM},)")
        if not np.all(np.isfinite(vector)):
            raise ValueError("encoder produced non-finite components")
        entries[key] = vector
    return entries


def write_jsonl(path, entries: dict[str, np.ndarray]) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for key in sorted(entries):
            fh.write(json.dumps({"key": key, "vector": entries[key].tolist()}) + "\n")


def write_binary(path, entries: dict[str, np.ndarray]) -> None:
    with open(path, "wb") as fh:
        fh.write(struct.pack("<Q", len(entries)))
        for key in sorted(entries):
            fh.write(bytes.fromhex(key))
            fh.write(entries[key].astype("<f4").tobytes())
