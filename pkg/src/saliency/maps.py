from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np

from src.imagery.raster import (
    FloatMap,
    GrayImage,
    first_plane,
    load_image,
    quantize,
    save_image,
    to_float_map,
)
from src.imagery.resample import minmax_normalize, resize_lanczos
from src.utils.errors import DimensionError


@dataclass(frozen=True)
class SaliencyMap:
    """Per-pixel conspicuity in [0, 1]."""

    values: np.ndarray

    def __post_init__(self) -> None:
        fmap = FloatMap(self.values)
        if fmap.values.min() < 0.0 or fmap.values.max() > 1.0:
            raise DimensionError("saliency values must lie in [0, 1]")
        object.__setattr__(self, "values", fmap.values)

    @classmethod
    def from_float_map(cls, fmap: FloatMap) -> SaliencyMap:
        return cls(np.clip(fmap.values, 0.0, 1.0))

    @property
    def width(self) -> int:
        return int(self.values.shape[1])

    @property
    def height(self) -> int:
        return int(self.values.shape[0])

    def as_float_map(self) -> FloatMap:
        return FloatMap(self.values)

    def to_bytes(self) -> np.ndarray:
        return quantize(self.values)


def save_saliency(s: SaliencyMap, path: str | Path) -> None:
    save_image(GrayImage(s.to_bytes()), path)


def load_saliency(path: str | Path) -> SaliencyMap:
    """Read an 8-bit saliency PNG as value / 255 without rescaling."""
    return SaliencyMap(to_float_map(first_plane(load_image(path))).values)


def ingest_external_saliency(
    path: str | Path, width: int | None = None, height: int | None = None
) -> SaliencyMap:
    """Load a network-produced map, resize it to the frame size and stretch it to [0, 1].

    Deep saliency networks emit fixed-size maps (224x224 for the common
    encoders); they are brought back to the thermal frame size with Lanczos.
    """
    fmap = to_float_map(first_plane(load_image(path)))
    if width is not None and height is not None and (fmap.width, fmap.height) != (width, height):
        fmap = resize_lanczos(fmap, width, height)
    return SaliencyMap.from_float_map(minmax_normalize(fmap))
