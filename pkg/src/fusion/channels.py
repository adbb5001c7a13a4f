"""Augment channel-replicated thermal frames with their saliency maps.

A thermal frame is stored as three identical planes; one duplicate plane is
swapped for the 8-bit saliency map so any 3-channel detector can consume the
result unchanged.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from src.imagery.raster import GrayImage, RgbImage
from src.saliency.maps import SaliencyMap
from src.utils.errors import DimensionMismatch, ValidationError


@dataclass(frozen=True)
class FusionConfig:
    replaced_channel: int = 2

    def __post_init__(self) -> None:
        if self.replaced_channel not in (0, 1, 2):
            raise ValidationError(
                f"replaced_channel must be 0, 1 or 2, got {self.replaced_channel}"
            )


def replicate_to_rgb(t: GrayImage) -> RgbImage:
    return RgbImage(np.repeat(t.pixels[:, :, np.newaxis], 3, axis=2))


def fuse_channel_replace(
    t: GrayImage, s: SaliencyMap, cfg: FusionConfig | None = None
) -> RgbImage:
    cfg = cfg or FusionConfig()
    if (t.width, t.height) != (s.width, s.height):
        raise DimensionMismatch(
            f"thermal {t.width}x{t.height} and saliency {s.width}x{s.height} differ"
        )
    planes = np.repeat(t.pixels[:, :, np.newaxis], 3, axis=2)
    planes[:, :, cfg.replaced_channel] = s.to_bytes()
    return RgbImage(planes)


def saliency_to_rgb(s: SaliencyMap) -> RgbImage:
    """Saliency-only detector input: the quantized map in every channel."""
    return replicate_to_rgb(GrayImage(s.to_bytes()))
