"""Embedding providers for the semantic route.

Three interchangeable sources produce 768-dimensional vectors: a cache
file written offline (text or binary form), an HTTP endpoint, and a
deterministic hashing encoder useful for tests and demos. Lookups key on
the sha-256 of normalized text, matching the database's span conflation.
"""

from __future__ import annotations

import json
import struct

import numpy as np
import requests

from .textnorm import content_key, content_key_bytes, normalize_text

EMBED_DIM = 768


class EmbeddingUnavailableError(Exception):
    """No embedding could be produced for a requested text."""


def cosine(a: np.ndarray, b: np.ndarray) -> float:
    na = float(np.linalg.norm(a))
    nb = float(np.linalg.norm(b))
    if na == 0.0 or nb == 0.0:
        return 0.0
    return float(np.dot(a, b) / (na * nb))


def _validate(vector: np.ndarray, origin: str) -> np.ndarray:
    vector = np.asarray(vector, dtype=np.float64)
    if vector.shape != (EMBED_DIM,):
        raise ValueError(f"{origin}: expected {EMBED_DIM}-dim vector, got shape {vector.shape}")
    if not np.all(np.isfinite(vector)):
        raise ValueError(f"{origin}: vector has non-finite components")
    return vector


class CacheFileProvider:
    """Serves vectors from a cache file keyed by normalized-text hash."""

    def __init__(self, path):
        self.path = path
        self._by_key = read_cache(path)

    def embed(self, texts: list[str]) -> list[np.ndarray]:
        vectors = []
        for text in texts:
            vector = self._by_key.get(content_key(text))
            if vector is None:
                raise EmbeddingUnavailableError(
                    f"no cached embedding for {normalize_text(text)[:60]!r}"
                )
            vectors.append(vector)
        return vectors


class HttpProvider:
    """Client for the embedding endpoint: POST {base_url}/embed."""

    def __init__(self, base_url: str, timeout: float = 30.0):
        self.base_url = base_url.rstrip("/")
        self.timeout = timeout

    def embed(self, texts: list[str]) -> list[np.ndarray]:
        try:
            resp = requests.post(
                self.base_url + "/embed", json={"texts": texts}, timeout=self.timeout
            )
        except requests.RequestException as exc:
            raise EmbeddingUnavailableError(f"embedding endpoint unreachable: {exc}") from exc
        if resp.status_code != 200:
            raise EmbeddingUnavailableError(
                f"embedding endpoint returned {resp.status_code}"
            )
        try:
            vectors = resp.json()["vectors"]
        except (ValueError, KeyError) as exc:
            raise EmbeddingUnavailableError(f"malformed embedding response: {exc}") from exc
        if len(vectors) != len(texts):
            raise EmbeddingUnavailableError(
                f"embedding endpoint returned {len(vectors)} vectors for {len(texts)} texts"
            )
        return [_validate(np.asarray(v), self.base_url) for v in vectors]


class HashingProvider:
    """Deterministic stand-in encoder: one pseudo-random unit vector per
    normalized text. Identical texts always map to identical vectors."""

    def __init__(self, seed: int = 0):
        self.seed = seed
        self.calls = 0
        self.texts_embedded = 0

    def embed(self, texts: list[str]) -> list[np.ndarray]:
        self.calls += 1
        self.texts_embedded += len(texts)
        vectors = []
        for text in texts:
            digest = content_key_bytes(text)
            rng = np.random.default_rng(
                [self.seed, int.from_bytes(digest[:8], "little")]
            )
            v = rng.standard_normal(EMBED_DIM)
            vectors.append(v / np.linalg.norm(v))
        return vectors


class DisabledProvider:
    """Placeholder when no embedding source is configured."""

    def embed(self, texts: list[str]) -> list[np.ndarray]:
        raise EmbeddingUnavailableError("embedding provider is disabled")


def write_cache_jsonl(path, entries: dict[str, np.ndarray]) -> None:
    """Write text-form cache: one {key, vector} record per line."""
    with open(path, "w", encoding="utf-8") as fh:
        for key in sorted(entries):
            vector = _validate(entries[key], path)
            fh.write(json.dumps({"key": key, "vector": vector.tolist()}) + "\n")


def write_cache_binary(path, entries: dict[str, np.ndarray]) -> None:
    """Write binary-form cache: count, then 32-byte key + 768 float32 each."""
    with open(path, "wb") as fh:
        fh.write(struct.pack("<Q", len(entries)))
        for key in sorted(entries):
            vector = _validate(entries[key], path)
            fh.write(bytes.fromhex(key))
            fh.write(vector.astype("<f4").tobytes())


def read_cache(path) -> dict[str, np.ndarray]:
    """Read either cache form, sniffing text vs binary from the first byte."""
    with open(path, "rb") as fh:
        first = fh.read(1)
    if not first:
        return {}
    if first == b"{":
        return _read_cache_jsonl(path)
    return _read_cache_binary(path)


def _read_cache_jsonl(path) -> dict[str, np.ndarray]:
    entries: dict[str, np.ndarray] = {}
    with open(path, "r", encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                record = json.loads(line)
                key = record["key"]
                vector = _validate(np.asarray(record["vector"]), f"{path}:{line_no}")
            except (json.JSONDecodeError, KeyError) as exc:
                raise ValueError(f"{path}:{line_no}: bad cache record: {exc}") from exc
            entries[key] = vector
    return entries


def _read_cache_binary(path) -> dict[str, np.ndarray]:
    entry_size = 32 + EMBED_DIM * 4
    with open(path, "rb") as fh:
        blob = fh.read()
    if len(blob) < 8:
        raise ValueError(f"{path}: truncated cache file")
    (count,) = struct.unpack_from("<Q", blob, 0)
    if len(blob) != 8 + count * entry_size:
        raise ValueError(f"{path}: cache size disagrees with declared count {count}")
    entries: dict[str, np.ndarray] = {}
    for i in range(count):
        offset = 8 + i * entry_size
        key = blob[offset : offset + 32].hex()
        vector = np.frombuffer(
            blob, dtype="<f4", count=EMBED_DIM, offset=offset + 32
        ).astype(np.float64)
        entries[key] = _validate(vector, path)
    return entries
