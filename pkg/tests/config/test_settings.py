from __future__ import annotations

from pathlib import Path
from typing import Any, cast

import pytest

from src.config.settings import Settings, ensure_runtime_dirs, load_settings, validate_settings


def _valid_settings(**overrides: object) -> Settings:
    defaults = {
        "workers": 1,
        "workers_from_env": False,
        "log_level": "INFO",
        "protocol_config_path": "config/kaist_protocol.yaml",
        "output_dir": "output/",
    }
    defaults.update(overrides)
    return Settings(**cast(dict[str, Any], defaults))


def test_defaults_are_valid():
    assert validate_settings(load_settings()) == []


def test_env_values_are_read(monkeypatch: pytest.MonkeyPatch):
    monkeypatch.setenv("THERMSAL_WORKERS", " 6 ")
    monkeypatch.setenv("THERMSAL_LOG_LEVEL", "warning")
    settings = load_settings()
    assert settings.workers == 6
    assert settings.workers_from_env is True
    assert settings.log_level == "WARNING"


def test_non_integer_worker_count_is_reported(monkeypatch: pytest.MonkeyPatch):
    monkeypatch.setenv("THERMSAL_WORKERS", "four")
    errors = validate_settings(load_settings())
    assert any("THERMSAL_WORKERS" in e for e in errors)


def test_validate_settings_rejects_unknown_log_level():
    errors = validate_settings(_valid_settings(log_level="CHATTY"))
    assert any("THERMSAL_LOG_LEVEL" in e for e in errors)


def test_validate_settings_rejects_whitespace_only_protocol_path():
    errors = validate_settings(_valid_settings(protocol_config_path="   "))
    assert any("THERMSAL_PROTOCOL_CONFIG" in e for e in errors)


def test_ensure_runtime_dirs_creates_output_dir(tmp_path: Path):
    target = tmp_path / "runs" / "latest"
    ensure_runtime_dirs(_valid_settings(output_dir=str(target)))
    assert target.is_dir()
