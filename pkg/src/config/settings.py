from __future__ import annotations

import os
from dataclasses import dataclass
from pathlib import Path

from src.utils.log import LEVELS


def _get_int_env(name: str, default: int) -> int:
    raw = os.getenv(name)
    if raw is None or not raw.strip():
        return default
    try:
        return int(raw.strip())
    except ValueError:
        # validate_settings reports it
        return 0


@dataclass(frozen=True)
class Settings:
    workers: int
    workers_from_env: bool
    log_level: str
    protocol_config_path: str
    output_dir: str


def load_settings() -> Settings:
    return Settings(
        workers=_get_int_env("THERMSAL_WORKERS", 1),
        workers_from_env=bool(os.getenv("THERMSAL_WORKERS", "").strip()),
        log_level=os.getenv("THERMSAL_LOG_LEVEL", "INFO").strip().upper(),
        protocol_config_path=os.getenv(
            "THERMSAL_PROTOCOL_CONFIG", "config/kaist_protocol.yaml"
        ),
        output_dir=os.getenv("THERMSAL_OUTPUT_DIR", "output/"),
    )


def validate_settings(settings: Settings) -> list[str]:
    errors: list[str] = []
    if settings.workers < 1:
        errors.append("THERMSAL_WORKERS must be an integer >= 1")
    if settings.log_level not in LEVELS:
        errors.append(f"THERMSAL_LOG_LEVEL must be one of {', '.join(LEVELS)}")
    if not (settings.protocol_config_path and settings.protocol_config_path.strip()):
        errors.append("THERMSAL_PROTOCOL_CONFIG is required")
    if not (settings.output_dir and settings.output_dir.strip()):
        errors.append("THERMSAL_OUTPUT_DIR is required")
    return errors


def ensure_runtime_dirs(settings: Settings) -> None:
    Path(settings.output_dir).mkdir(parents=True, exist_ok=True)
