"""Service configuration: env > file > default."""

from __future__ import annotations

import json
import os
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

from cfe_registry.domain.vocab import DEFAULT_LICENSE_ALLOWLIST
from cfe_registry.errors import ConfigError

ENV_PREFIX = "CFE_REGISTRY_"


@dataclass
class RegistryConfig:
    data_dir: str = "data"
    host: str = "127.0.0.1"
    port: int = 8300
    admin_token: str = ""
    license_allowlist: tuple[str, ...] = tuple(sorted(DEFAULT_LICENSE_ALLOWLIST))
    alpha: float = 0.05
    threshold: float = 0.01
    embargo_days: float = 90.0
    token_ttl_days: float = 30.0
    page_size: int = 20
    snapshot_every: Optional[int] = None
    durable_fsync: bool = True

    def validate(self) -> "RegistryConfig":
        if not self.data_dir:
            raise ConfigError("data_dir must be set")
        if not 0 < self.alpha < 1:
            raise ConfigError(f"alpha must lie in (0, 1), got {self.alpha}")
        if not 0 <= self.threshold < 1:
            raise ConfigError(f"threshold must lie in [0, 1), got {self.threshold}")
        if self.embargo_days <= 0:
            raise ConfigError("embargo_days must be positive")
        if self.page_size < 1:
            raise ConfigError("page_size must be >= 1")
        if self.snapshot_every is not None and self.snapshot_every < 1:
            raise ConfigError("snapshot_every must be >= 1 when set")
        return self


_PARSERS = {
    "data_dir": str,
    "host": str,
    "port": int,
    "admin_token": str,
    "alpha": float,
    "threshold": float,
    "embargo_days": float,
    "token_ttl_days": float,
    "page_size": int,
    "snapshot_every": lambda v: None if v in ("", "none", None) else int(v),
    "durable_fsync": lambda v: v if isinstance(v, bool) else str(v).lower() in ("1", "true", "yes"),
    "license_allowlist": lambda v: tuple(v) if isinstance(v, (list, tuple)) else tuple(
        item.strip() for item in str(v).split(",") if item.strip()
    ),
}


def load_config(path: Optional[str | Path] = None, env: Optional[dict] = None) -> RegistryConfig:
    env = env if env is not None else dict(os.environ)
    values: dict = {}
    if path is not None:
        try:
            raw = json.loads(Path(path).read_text(encoding="utf-8"))
        except FileNotFoundError:
            raise ConfigError(f"config file not found: {path}")
        except json.JSONDecodeError as exc:
            raise ConfigError(f"config file is not valid JSON: {exc}")
        if not isinstance(raw, dict):
            raise ConfigError("config file must contain a JSON object")
        unknown = set(raw) - set(_PARSERS)
        if unknown:
            raise ConfigError(f"unknown config keys: {sorted(unknown)}")
        values.update(raw)
    for key in _PARSERS:
        env_key = ENV_PREFIX + key.upper()
        if env_key in env:
            values[key] = env[env_key]
    config = RegistryConfig()
    for key, value in values.items():
        try:
            setattr(config, key, _PARSERS[key](value))
        except (TypeError, ValueError) as exc:
            raise ConfigError(f"invalid value for {key}: {value!r} ({exc})")
    return config.validate()
