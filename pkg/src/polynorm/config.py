"""TOML config file handling for provider endpoints and defaults."""

from __future__ import annotations

import sys
from pathlib import Path
from typing import Optional

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

from .llm_client import ProviderConfig

DEFAULT_PROVIDERS = {
    "openai": ProviderConfig(
        endpoint="https://api.openai.com/v1/chat/completions",
        model_id="gpt-4o",
        api_key_env="OPENAI_API_KEY",
    ),
}


def load_config(path: Optional[str | Path]) -> dict:
    if path is None:
        return {}
    with open(path, "rb") as f:
        return tomllib.load(f)


def provider_config(name: str, config: dict, **overrides) -> ProviderConfig:
    """Resolve a provider by name from config, falling back to built-in defaults.

    Keyword overrides (from CLI flags) win over config values. Secrets come
    only from the environment variable named by api_key_env.
    """
    section = (config.get("provider") or {}).get(name)
    if section is None:
        base = DEFAULT_PROVIDERS.get(name)
        if base is None:
            raise KeyError(f"unknown provider {name!r}: not in config and no built-in default")
        section = {}
    else:
        base = None
    fields = {}
    for key in ("endpoint", "model_id", "api_key_env", "timeout", "max_retries", "temperature", "max_tokens"):
        if key in overrides and overrides[key] is not None:
            fields[key] = overrides[key]
        elif key in section:
            fields[key] = section[key]
        elif base is not None:
            fields[key] = getattr(base, key)
    return ProviderConfig(**fields)
