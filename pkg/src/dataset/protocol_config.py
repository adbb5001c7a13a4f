from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

import yaml  # type: ignore[import-untyped]

from src.utils.errors import FormatError, IoError, ValidationError

DEFAULT_PROTOCOL: dict[str, Any] = {
    "day_sets": [0, 1, 2, 6, 7, 8],
    "night_sets": [3, 4, 5, 9, 10, 11],
    "train_sets": [0, 1, 2, 3, 4, 5],
    "test_sets": [6, 7, 8, 9, 10, 11],
    "train_stride": 3,
    "test_stride": 20,
    "sample_offset": 0,
    "subset_day_stride": 15,
    "subset_night_stride": 10,
    "min_height": 50,
    "person_label": "person",
    "frame_width": 640,
    "frame_height": 512,
    "image_subdir": "lwir",
    "annotation_dirs": {"train": "annotations", "test": "annotations"},
}


@dataclass(frozen=True)
class DatasetProtocol:
    day_sets: frozenset[int] = frozenset(DEFAULT_PROTOCOL["day_sets"])
    night_sets: frozenset[int] = frozenset(DEFAULT_PROTOCOL["night_sets"])
    train_sets: frozenset[int] = frozenset(DEFAULT_PROTOCOL["train_sets"])
    test_sets: frozenset[int] = frozenset(DEFAULT_PROTOCOL["test_sets"])
    train_stride: int = 3
    test_stride: int = 20
    sample_offset: int = 0
    subset_day_stride: int = 15
    subset_night_stride: int = 10
    min_height: float = 50
    person_label: str = "person"
    frame_width: int = 640
    frame_height: int = 512
    image_subdir: str = "lwir"
    annotation_dirs: dict[str, str] = field(
        default_factory=lambda: dict(DEFAULT_PROTOCOL["annotation_dirs"])
    )

    def condition_of(self, set_id: int) -> str:
        if set_id in self.day_sets:
            return "day"
        if set_id in self.night_sets:
            return "night"
        raise ValidationError(f"set{set_id:02d} is neither a day nor a night set")

    def split_of(self, set_id: int) -> str | None:
        if set_id in self.train_sets:
            return "train"
        if set_id in self.test_sets:
            return "test"
        return None

    def stride_for(self, split: str) -> int:
        return self.train_stride if split == "train" else self.test_stride


def _int_set(raw: Any, fallback: list[int]) -> frozenset[int]:
    if not isinstance(raw, list):
        return frozenset(fallback)
    return frozenset(int(item) for item in raw)


def _coerce_protocol(payload: dict[str, Any]) -> DatasetProtocol:
    merged = {**DEFAULT_PROTOCOL, **payload}
    dirs = merged.get("annotation_dirs")
    if not isinstance(dirs, dict):
        dirs = DEFAULT_PROTOCOL["annotation_dirs"]
    try:
        protocol = DatasetProtocol(
            day_sets=_int_set(merged["day_sets"], DEFAULT_PROTOCOL["day_sets"]),
            night_sets=_int_set(merged["night_sets"], DEFAULT_PROTOCOL["night_sets"]),
            train_sets=_int_set(merged["train_sets"], DEFAULT_PROTOCOL["train_sets"]),
            test_sets=_int_set(merged["test_sets"], DEFAULT_PROTOCOL["test_sets"]),
            train_stride=int(merged["train_stride"]),
            test_stride=int(merged["test_stride"]),
            sample_offset=int(merged["sample_offset"]),
            subset_day_stride=int(merged["subset_day_stride"]),
            subset_night_stride=int(merged["subset_night_stride"]),
            min_height=float(merged["min_height"]),
            person_label=str(merged["person_label"]).strip(),
            frame_width=int(merged["frame_width"]),
            frame_height=int(merged["frame_height"]),
            image_subdir=str(merged["image_subdir"]).strip(),
            annotation_dirs={
                "train": str(dirs.get("train", "annotations")),
                "test": str(dirs.get("test", "annotations")),
            },
        )
    except (TypeError, ValueError) as exc:
        raise ValidationError(f"protocol value is not usable: {exc}") from exc
    errors = validate_protocol(protocol)
    if errors:
        raise ValidationError("; ".join(errors))
    return protocol


def validate_protocol(protocol: DatasetProtocol) -> list[str]:
    errors: list[str] = []
    for name in ("train_stride", "test_stride", "subset_day_stride", "subset_night_stride"):
        if getattr(protocol, name) < 1:
            errors.append(f"{name} must be >= 1")
    if protocol.day_sets & protocol.night_sets:
        errors.append("day_sets and night_sets overlap")
    if protocol.train_sets & protocol.test_sets:
        errors.append("train_sets and test_sets overlap")
    if protocol.frame_width < 1 or protocol.frame_height < 1:
        errors.append("frame size must be positive")
    if not protocol.person_label:
        errors.append("person_label is required")
    return errors


def load_protocol(config_path: str | Path) -> DatasetProtocol:
    path = Path(config_path)
    payload: dict[str, Any] = {}
    if path.exists():
        try:
            text = path.read_text(encoding="utf-8")
        except OSError as exc:
            raise IoError(f"{path}: {exc}") from exc
        try:
            loaded = yaml.safe_load(text) or {}
        except yaml.YAMLError as exc:
            raise FormatError(f"{path}: invalid YAML: {exc}") from exc
        section = loaded.get("protocol", loaded) if isinstance(loaded, dict) else {}
        payload = section if isinstance(section, dict) else {}
    return _coerce_protocol(payload)
