"""Text encoders producing 768-dimensional vectors.

The default encoder is a deterministic hashing projection: useful for
plumbing, testing, and demos, and honest about being a stand-in. A
transformer-backed encoder is attempted only when explicitly requested,
since it needs locally available weights.
"""

from __future__ import annotations

import hashlib
import re

import numpy as np

EMBED_DIM = 768

_WS_RE = re.compile(r"\s+")


class EncoderUnavailableError(RuntimeError):
    """The requested encoder cannot run in this environment."""


def normalize_key_text(text: str) -> str:
    """Lowercase, collapse whitespace, strip: the cache-key normalization."""
    return _WS_RE.sub(" ", text.lower()).strip()


def cache_key(text: str) -> str:
    return hashlib.sha256(normalize_key_text(text).encode("utf-8")).hexdigest()


class HashingEncoder:
    """One pseudo-random unit vector per normalized text, seeded by its
    hash; identical texts always encode identically."""

    name = "hashing-v1"

    def __init__(self, seed: int = 0):
        self.seed = seed

    def encode(self, texts: list[str]) -> list[np.ndarray]:
        vectors = []
        for text in texts:
            digest = hashlib.sha256(normalize_key_text(text).encode("utf-8")).digest()
            rng = np.random.default_rng([self.seed, int.from_bytes(digest[:8], "little")])
            v = rng.standard_normal(EMBED_DIM)
            vectors.append(v / np.linalg.norm(v))
        return vectors


class TransformerEncoder:
    """CLS-vector encoder over a locally available transformer model."""

    def __init__(self, model_name_or_path: str):
        try:
            import torch
            from transformers import AutoModel, AutoTokenizer
        except ImportError as exc:
            raise EncoderUnavailableError(f"transformers stack not installed: {exc}") from exc
        try:
            self._tokenizer = AutoTokenizer.from_pretrained(model_name_or_path)
            self._model = AutoModel.from_pretrained(model_name_or_path)
        except Exception as exc:
            raise EncoderUnavailableError(
                f"cannot load model {model_name_or_path!r}: {exc}"
            ) from exc
        self._model.eval()
        self._torch = torch
        self.name = f"transformer:{model_name_or_path}"

    def encode(self, texts: list[str]) -> list[np.ndarray]:
        torch = self._torch
        with torch.no_grad():
            batch = self._tokenizer(
                texts, padding=True, truncation=True, max_length=512, return_tensors="pt"
            )
            output = self._model(**batch)
            cls = output.last_hidden_state[:, 0, :].cpu().numpy().astype(np.float64)
        if cls.shape[1] != EMBED_DIM:
            raise EncoderUnavailableError(
                f"model produces {cls.shape[1]}-dim vectors, need {EMBED_DIM}"
            )
        return [cls[i] for i in range(cls.shape[0])]


def make_encoder(spec: str):
    """``hashing`` (optionally ``hashing:<seed>``) or ``transformer:<model>``."""
    if spec == "hashing":
        return HashingEncoder()
    if spec.startswith("hashing:"):
        return HashingEncoder(seed=int(spec.split(":", 1)[1]))
    if spec.startswith("transformer:"):
        return TransformerEncoder(spec.split(":", 1)[1])
    raise ValueError(f"unknown encoder {spec!r}")
