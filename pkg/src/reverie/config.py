"""Engine configuration, loadable from a flat TOML file."""

from __future__ import annotations

import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

from .agents.providers import ProviderConfig
from .safety import RiskLexicon


@dataclass(frozen=True)
class EngineConfig:
    pass_threshold: float = 100.0
    cooldown_rounds: int = 6
    provider: ProviderConfig = field(default_factory=ProviderConfig)
    lexicon_path: Optional[str] = None
    data_dir: str = "reverie-data"

    def __post_init__(self):
        if self.pass_threshold <= 0:
            raise ValueError("engine.pass_threshold must be positive")
        if self.cooldown_rounds < 0:
            raise ValueError("engine.cooldown_rounds must be non-negative")
        if self.lexicon_path is not None and not Path(self.lexicon_path).is_file():
            raise ValueError(f"safety.lexicon_path not readable: {self.lexicon_path}")

    def load_lexicon(self) -> RiskLexicon:
        if self.lexicon_path is None:
            return RiskLexicon.bundled()
        return RiskLexicon.from_file(self.lexicon_path)


def load_config(path: str | Path) -> EngineConfig:
    """Read a TOML config file.

    Recognized keys: [provider] base_url, model, api_key_env, timeout_s,
    max_retries, temperature, image_model, images_url; [engine]
    pass_threshold, cooldown_rounds; [safety] lexicon_path; [service]
    data_dir. Everything is optional and defaults sensibly.
    """
    with open(path, "rb") as handle:
        raw = tomllib.load(handle)
    provider_raw = raw.get("provider", {})
    provider = ProviderConfig(
        base_url=provider_raw.get("base_url", ProviderConfig.base_url),
        model_name=provider_raw.get("model", ProviderConfig.model_name),
        api_key_env=provider_raw.get("api_key_env", ProviderConfig.api_key_env),
        timeout_s=provider_raw.get("timeout_s", ProviderConfig.timeout_s),
        max_retries=provider_raw.get("max_retries", ProviderConfig.max_retries),
        temperature=provider_raw.get("temperature", ProviderConfig.temperature),
        image_model=provider_raw.get("image_model", ProviderConfig.image_model),
        images_url=provider_raw.get("images_url", ProviderConfig.images_url),
    )
    engine_raw = raw.get("engine", {})
    safety_raw = raw.get("safety", {})
    service_raw = raw.get("service", {})
    return EngineConfig(
        pass_threshold=engine_raw.get("pass_threshold", 100.0),
        cooldown_rounds=engine_raw.get("cooldown_rounds", 6),
        provider=provider,
        lexicon_path=safety_raw.get("lexicon_path"),
        data_dir=service_raw.get("data_dir", "reverie-data"),
    )
