"""Multi-scale center-surround saliency over summed-area tables."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from src.imagery.raster import FloatMap, GrayImage
from src.imagery.resample import minmax_normalize
from src.saliency.maps import SaliencyMap
from src.utils.errors import DimensionError, ValidationError


def integral_image(src: FloatMap) -> FloatMap:
    """Entry (x, y) holds the sum of src over [0..x] x [0..y]."""
    return FloatMap(np.cumsum(np.cumsum(src.values, axis=0), axis=1))


def box_sum(table: FloatMap, x0: int, y0: int, x1: int, y1: int) -> float:
    """Sum over the inclusive rectangle [x0..x1] x [y0..y1]."""
    t = table.values
    total = t[y1, x1]
    if x0 > 0:
        total -= t[y1, x0 - 1]
    if y0 > 0:
        total -= t[y0 - 1, x1]
    if x0 > 0 and y0 > 0:
        total += t[y0 - 1, x0 - 1]
    return float(total)


@dataclass(frozen=True)
class FineGrainedParams:
    surround_radii: tuple[int, ...] = (3, 7, 15, 31)

    def __post_init__(self) -> None:
        radii = tuple(int(r) for r in self.surround_radii)
        if not radii:
            raise ValidationError("at least one surround radius is required")
        if radii[0] < 1 or any(b <= a for a, b in zip(radii, radii[1:], strict=False)):
            raise ValidationError("surround radii must be >= 1 and strictly increasing")
        object.__setattr__(self, "surround_radii", radii)


def _box_means(values: np.ndarray, radius: int) -> np.ndarray:
    side = 2 * radius + 1
    padded = np.pad(values, radius, mode="edge")
    table = np.pad(integral_image(FloatMap(padded)).values, ((1, 0), (1, 0)))
    sums = table[side:, side:] - table[:-side, side:] - table[side:, :-side] + table[:-side, :-side]
    return sums / float(side * side)


def fine_grained(src: GrayImage, params: FineGrainedParams | None = None) -> SaliencyMap:
    params = params or FineGrainedParams()
    largest = max(params.surround_radii)
    if src.width <= 2 * largest or src.height <= 2 * largest:
        raise DimensionError(
            f"image {src.width}x{src.height} too small for surround radius {largest}"
        )
    # raw 0..255 intensities keep the table sums exact integers
    center = src.pixels.astype(np.float64)
    contrast = np.zeros_like(center)
    for radius in params.surround_radii:
        surround = _box_means(center, radius)
        on = np.maximum(0.0, center - surround)
        off = np.maximum(0.0, surround - center)
        contrast += on + off
    return SaliencyMap.from_float_map(minmax_normalize(FloatMap(contrast)))
