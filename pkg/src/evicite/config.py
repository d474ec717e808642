"""Runtime configuration: a key-value file, environment selection, and
flag overrides layered on top."""

from __future__ import annotations

import os
from dataclasses import dataclass

from .prefetch import DEFAULT_CUTOFF, Bm25Params
from .rerank import DEFAULT_LENGTH_THRESHOLD, RouterConfig, Strategy

CONFIG_ENV_VAR = "ILCDB_CONFIG"

PROVIDER_MODES = ("http", "cache", "disabled")


class ConfigError(ValueError):
    """A configuration file or value is invalid."""


@dataclass(frozen=True)
class AppConfig:
    db_path: str | None = None
    k1: float = 1.5
    b: float = 0.75
    delta: float = 1.0
    length_threshold: int = DEFAULT_LENGTH_THRESHOLD
    strategy: Strategy = Strategy.CONDITIONAL
    per_scorer_cutoff: int = DEFAULT_CUTOFF
    provider_mode: str = "disabled"
    provider_url: str = ""
    provider_cache: str = ""
    default_k: int = 10
    semantic_fallback: bool = True
    max_concurrent_embeds: int = 4

    def __post_init__(self):
        if self.provider_mode not in PROVIDER_MODES:
            raise ConfigError(f"provider mode must be one of {PROVIDER_MODES}")
        if self.per_scorer_cutoff <= 0:
            raise ConfigError("per_scorer_cutoff must be positive")
        if self.default_k < 0:
            raise ConfigError("default_k must be non-negative")
        if self.max_concurrent_embeds <= 0:
            raise ConfigError("max_concurrent_embeds must be positive")
        try:
            self.bm25_params()
            self.router()
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc

    def bm25_params(self) -> Bm25Params:
        return Bm25Params(k1=self.k1, b=self.b, delta=self.delta)

    def router(self) -> RouterConfig:
        return RouterConfig(length_threshold_tokens=self.length_threshold)

    def to_dict(self) -> dict:
        return {
            "db_path": self.db_path,
            "k1": self.k1,
            "b": self.b,
            "delta": self.delta,
            "length_threshold": self.length_threshold,
            "strategy": self.strategy.value,
            "per_scorer_cutoff": self.per_scorer_cutoff,
            "provider_mode": self.provider_mode,
            "provider_url": self.provider_url,
            "provider_cache": self.provider_cache,
            "default_k": self.default_k,
            "semantic_fallback": self.semantic_fallback,
            "max_concurrent_embeds": self.max_concurrent_embeds,
        }


_BOOL_VALUES = {"true": True, "1": True, "yes": True, "false": False, "0": False, "no": False}

_PARSERS = {
    "db_path": str,
    "k1": float,
    "b": float,
    "delta": float,
    "length_threshold": int,
    "strategy": Strategy,
    "per_scorer_cutoff": int,
    "provider_mode": str,
    "provider_url": str,
    "provider_cache": str,
    "default_k": int,
    "semantic_fallback": lambda v: _BOOL_VALUES[v.lower()],
    "max_concurrent_embeds": int,
}


def parse_config_text(text: str, origin: str = "<config>") -> dict:
    """Parse ``key = value`` lines into an override dict."""
    overrides: dict = {}
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{origin}:{line_no}: expected 'key = value'")
        key, value = (part.strip() for part in line.split("=", 1))
        parser = _PARSERS.get(key)
        if parser is None:
            raise ConfigError(f"{origin}:{line_no}: unknown setting {key!r}")
        try:
            overrides[key] = parser(value)
        except (ValueError, KeyError) as exc:
            raise ConfigError(f"{origin}:{line_no}: bad value for {key!r}: {exc}") from exc
    return overrides


def load_config(path: str | None = None, **overrides) -> AppConfig:
    """Build the effective config: file (explicit path or $ILCDB_CONFIG),
    then keyword overrides. ``None`` overrides are ignored."""
    path = path or os.environ.get(CONFIG_ENV_VAR)
    settings: dict = {}
    if path:
        try:
            with open(path, "r", encoding="utf-8") as fh:
                settings.update(parse_config_text(fh.read(), origin=str(path)))
        except OSError as exc:
            raise ConfigError(f"cannot read config file {path}: {exc}") from exc
    settings.update({k: v for k, v in overrides.items() if v is not None})
    if isinstance(settings.get("strategy"), str):
        settings["strategy"] = Strategy(settings["strategy"])
    return AppConfig(**settings)


def provider_from_config(config: AppConfig):
    """Instantiate the embedding provider the config names."""
    from .embeddings import CacheFileProvider, DisabledProvider, HttpProvider

    if config.provider_mode == "http":
        if not config.provider_url:
            raise ConfigError("provider_mode=http requires provider_url")
        return HttpProvider(config.provider_url)
    if config.provider_mode == "cache":
        if not config.provider_cache:
            raise ConfigError("provider_mode=cache requires provider_cache")
        return CacheFileProvider(config.provider_cache)
    return DisabledProvider()
