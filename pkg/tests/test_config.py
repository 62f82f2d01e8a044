import pytest

from polynorm.config import DEFAULT_PROVIDERS, load_config, provider_config


def test_load_none_is_empty():
    assert load_config(None) == {}


def test_builtin_default_provider():
    cfg = provider_config("openai", {})
    assert cfg.model_id == DEFAULT_PROVIDERS["openai"].model_id
    assert cfg.api_key_env == "OPENAI_API_KEY"


def test_unknown_provider_raises():
    with pytest.raises(KeyError):
        provider_config("nope", {})


def test_config_file_section(tmp_path):
    p = tmp_path / "polynorm.toml"
    p.write_text(
        '[provider.local]\n'
        'endpoint = "http://localhost:8080/v1/chat/completions"\n'
        'model_id = "local-7b"\n'
        'api_key_env = "LOCAL_KEY"\n'
        'temperature = 0.2\n',
        encoding="utf-8",
    )
    cfg = provider_config("local", load_config(p))
    assert cfg.endpoint.startswith("http://localhost:8080")
    assert cfg.model_id == "local-7b"
    assert cfg.temperature == 0.2


def test_cli_overrides_win(tmp_path):
    p = tmp_path / "polynorm.toml"
    p.write_text('[provider.local]\nmodel_id = "local-7b"\n', encoding="utf-8")
    cfg = provider_config("local", load_config(p), model_id="local-13b")
    assert cfg.model_id == "local-13b"


def test_no_key_material_fields():
    # config carries only the env var name, never a secret value
    cfg = provider_config("openai", {})
    assert not hasattr(cfg, "api_key")
