import pytest

from evicite.config import (
    CONFIG_ENV_VAR,
    AppConfig,
    ConfigError,
    load_config,
    parse_config_text,
    provider_from_config,
)
from evicite.embeddings import CacheFileProvider, DisabledProvider, HttpProvider
from evicite.rerank import Strategy


def test_defaults():
    config = AppConfig()
    assert config.k1 == 1.5
    assert config.b == 0.75
    assert config.delta == 1.0
    assert config.length_threshold == 50
    assert config.per_scorer_cutoff == 50
    assert config.strategy is Strategy.CONDITIONAL
    assert config.default_k == 10
    assert config.provider_mode == "disabled"


def test_parse_key_value_text():
    text = """
    # comment
    k1 = 2.0
    strategy = naive-ensemble   # inline comment
    semantic_fallback = false
    """
    overrides = parse_config_text(text)
    assert overrides == {
        "k1": 2.0,
        "strategy": Strategy.NAIVE_ENSEMBLE,
        "semantic_fallback": False,
    }


def test_parse_rejects_unknown_key():
    with pytest.raises(ConfigError):
        parse_config_text("mystery = 1")


def test_parse_rejects_bad_value():
    with pytest.raises(ConfigError):
        parse_config_text("k1 = fast")


def test_load_config_from_file_with_overrides(tmp_path):
    path = tmp_path / "conf"
    path.write_text("k1 = 2.0\ndefault_k = 5\n", encoding="utf-8")
    config = load_config(str(path), default_k=7)
    assert config.k1 == 2.0
    assert config.default_k == 7  # override wins


def test_load_config_env_var(tmp_path, monkeypatch):
    path = tmp_path / "conf"
    path.write_text("delta = 0.5\n", encoding="utf-8")
    monkeypatch.setenv(CONFIG_ENV_VAR, str(path))
    assert load_config().delta == 0.5


def test_load_config_missing_file_errors(tmp_path):
    with pytest.raises(ConfigError):
        load_config(str(tmp_path / "absent"))


def test_validation_ranges():
    with pytest.raises(ConfigError):
        AppConfig(k1=-1)
    with pytest.raises(ConfigError):
        AppConfig(b=2.0)
    with pytest.raises(ConfigError):
        AppConfig(length_threshold=0)
    with pytest.raises(ConfigError):
        AppConfig(per_scorer_cutoff=0)
    with pytest.raises(ConfigError):
        AppConfig(default_k=-1)
    with pytest.raises(ConfigError):
        AppConfig(provider_mode="carrier-pigeon")


def test_provider_selection(tmp_path):
    assert isinstance(provider_from_config(AppConfig()), DisabledProvider)
    assert isinstance(
        provider_from_config(AppConfig(provider_mode="http", provider_url="http://x")),
        HttpProvider,
    )
    from evicite.embeddings import write_cache_jsonl

    cache = tmp_path / "c.jsonl"
    write_cache_jsonl(cache, {})
    assert isinstance(
        provider_from_config(AppConfig(provider_mode="cache", provider_cache=str(cache))),
        CacheFileProvider,
    )


def test_provider_http_requires_url():
    with pytest.raises(ConfigError):
        provider_from_config(AppConfig(provider_mode="http"))
