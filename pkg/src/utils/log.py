from __future__ import annotations

import sys
from typing import Any

LEVELS = {"DEBUG": 10, "INFO": 20, "WARNING": 30, "ERROR": 40}

_threshold = LEVELS["INFO"]


def set_log_level(level: str) -> None:
    global _threshold
    _threshold = LEVELS.get(level.strip().upper(), LEVELS["INFO"])


def _format_value(value: Any) -> str:
    if isinstance(value, float):
        return f"{value:.6f}"
    text = str(value)
    return text.replace(" ", "_") if text else '""'


def log_status(tag: str, status: str, **fields: Any) -> None:
    """Emit one `[TAG] status=... key=value` line.

    failed/partial records go to stderr and are always shown; everything else
    goes to stdout and is dropped when the level is above INFO.
    """
    failing = status in {"failed", "partial"}
    if not failing and _threshold > LEVELS["INFO"]:
        return
    msg = f"[{tag.upper()}] status={status}"
    for key, value in fields.items():
        msg += f" {key}={_format_value(value)}"
    print(msg, file=sys.stderr if failing else sys.stdout)
