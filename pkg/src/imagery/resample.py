"""Separable Lanczos resampling and min-max scaling of real-valued maps."""

from __future__ import annotations

import math

import numpy as np

from src.imagery.raster import FloatMap
from src.utils.errors import DimensionError

LANCZOS_LOBES = 3


def lanczos_kernel(x: np.ndarray, lobes: int = LANCZOS_LOBES) -> np.ndarray:
    """sinc(x) * sinc(x / a) on |x| < a, zero elsewhere."""
    x = np.asarray(x, dtype=np.float64)
    return np.where(np.abs(x) < lobes, np.sinc(x) * np.sinc(x / lobes), 0.0)


def lanczos_weights(n_in: int, n_out: int, lobes: int = LANCZOS_LOBES) -> np.ndarray:
    """Return the (n_out, n_in) resampling matrix for one axis.

    Output pixel i is centred at source coordinate (i + 0.5) * n_in / n_out - 0.5.
    When shrinking, the kernel is stretched by the scale factor so it also
    low-passes. Taps outside the source are clamped to the nearest edge pixel
    and every row is renormalized to sum to one.
    """
    scale = n_in / n_out
    stretch = max(scale, 1.0)
    support = lobes * stretch
    weights = np.zeros((n_out, n_in), dtype=np.float64)
    for i in range(n_out):
        center = (i + 0.5) * scale - 0.5
        first = math.floor(center - support) + 1
        last = math.floor(center + support)
        taps = np.arange(first, last + 1)
        row = lanczos_kernel((taps - center) / stretch, lobes)
        np.add.at(weights[i], np.clip(taps, 0, n_in - 1), row)
        weights[i] /= weights[i].sum()
    return weights


def resize_lanczos(src: FloatMap, out_width: int, out_height: int) -> FloatMap:
    if out_width < 1 or out_height < 1:
        raise DimensionError(f"target size must be at least 1x1, got {out_width}x{out_height}")
    rows = lanczos_weights(src.height, out_height)
    cols = lanczos_weights(src.width, out_width)
    return FloatMap(rows @ src.values @ cols.T)


def minmax_normalize(src: FloatMap) -> FloatMap:
    """Affine map onto [0, 1]; a constant map becomes all zeros."""
    lo = float(src.values.min())
    hi = float(src.values.max())
    if hi <= lo:
        return FloatMap(np.zeros_like(src.values))
    return FloatMap((src.values - lo) / (hi - lo))
