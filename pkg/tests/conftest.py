from __future__ import annotations

from collections.abc import Callable
from pathlib import Path

import numpy as np
import pytest

from src.dataset.protocol_config import DatasetProtocol
from src.imagery.raster import GrayImage, save_image
from src.utils.log import set_log_level
from tests.helpers import BBGT_HEADER

# (set_id, video_id) -> frame_index -> annotation lines without header
KaistLayout = dict[tuple[int, int], dict[int, list[str]]]


@pytest.fixture(autouse=True)
def _clean_env(monkeypatch: pytest.MonkeyPatch) -> None:
    for name in (
        "THERMSAL_WORKERS",
        "THERMSAL_LOG_LEVEL",
        "THERMSAL_PROTOCOL_CONFIG",
        "THERMSAL_OUTPUT_DIR",
    ):
        monkeypatch.delenv(name, raising=False)
    set_log_level("INFO")


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(20190417)


@pytest.fixture
def protocol() -> DatasetProtocol:
    return DatasetProtocol()


@pytest.fixture
def kaist_tree(tmp_path: Path) -> Callable[..., Path]:
    """Write a synthetic KAIST tree and return its root."""

    def build(layout: KaistLayout, with_images: bool = False, image_size: int = 16) -> Path:
        root = tmp_path / "kaist"
        for (set_id, video_id), frames in layout.items():
            ann_dir = root / "annotations" / f"set{set_id:02d}" / f"V{video_id:03d}"
            ann_dir.mkdir(parents=True, exist_ok=True)
            img_dir = root / f"set{set_id:02d}" / f"V{video_id:03d}" / "lwir"
            if with_images:
                img_dir.mkdir(parents=True, exist_ok=True)
            for frame_index, lines in frames.items():
                text = "\n".join([BBGT_HEADER, *lines]) + "\n"
                (ann_dir / f"I{frame_index:05d}.txt").write_text(text, encoding="utf-8")
                if with_images:
                    pixels = np.full((image_size, image_size), frame_index % 256, dtype=np.uint8)
                    save_image(GrayImage(pixels), img_dir / f"I{frame_index:05d}.png")
        return root

    return build
