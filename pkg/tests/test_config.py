import json

import pytest

from cfe_registry.errors import ConfigError
from cfe_registry.service.config import RegistryConfig, load_config


def test_defaults():
    config = load_config(env={})
    assert config.alpha == 0.05
    assert config.threshold == 0.01
    assert config.embargo_days == 90.0
    assert config.durable_fsync is True


def test_file_values_override_defaults(tmp_path):
    path = tmp_path / "registry.json"
    path.write_text(json.dumps({"alpha": 0.1, "data_dir": "/srv/registry"}))
    config = load_config(path, env={})
    assert config.alpha == 0.1
    assert config.data_dir == "/srv/registry"
    assert config.threshold == 0.01


def test_env_overrides_file(tmp_path):
    path = tmp_path / "registry.json"
    path.write_text(json.dumps({"alpha": 0.1, "embargo_days": 45}))
    config = load_config(
        path,
        env={"CFE_REGISTRY_ALPHA": "0.2", "CFE_REGISTRY_PAGE_SIZE": "7", "CFE_REGISTRY_DURABLE_FSYNC": "false"},
    )
    assert config.alpha == 0.2  # env > file
    assert config.embargo_days == 45.0  # file > default
    assert config.page_size == 7
    assert config.durable_fsync is False


def test_license_allowlist_parses_from_env():
    config = load_config(env={"CFE_REGISTRY_LICENSE_ALLOWLIST": "MIT, CC0-1.0"})
    assert config.license_allowlist == ("MIT", "CC0-1.0")


@pytest.mark.parametrize(
    "values",
    [
        {"alpha": 1.5},
        {"threshold": -0.1},
        {"embargo_days": 0},
        {"page_size": 0},
        {"snapshot_every": 0},
    ],
)
def test_invalid_values_rejected(values):
    with pytest.raises(ConfigError):
        RegistryConfig(data_dir="d", **values).validate()


def test_unknown_file_keys_rejected(tmp_path):
    path = tmp_path / "registry.json"
    path.write_text(json.dumps({"surprise": 1}))
    with pytest.raises(ConfigError):
        load_config(path, env={})


def test_missing_file_rejected(tmp_path):
    with pytest.raises(ConfigError):
        load_config(tmp_path / "absent.json", env={})
