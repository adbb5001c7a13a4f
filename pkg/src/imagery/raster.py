"""Raster buffers for thermal frames, fused outputs and real-valued maps.

All arrays are stored read-only so instances can be shared across workers.
8-bit data is converted to the real domain as value / 255.0 and back as
round(value * 255) clamped to [0, 255].
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np
from PIL import Image, UnidentifiedImageError

from src.utils.errors import DimensionError, FormatError, IoError

READABLE_FORMATS = {"PNG", "JPEG"}
GRAY_MODES = {"L", "1", "LA"}
COLOR_MODES = {"RGB", "RGBA", "P", "CMYK", "YCbCr"}


def _frozen(values: np.ndarray, dtype: type) -> np.ndarray:
    out = np.array(values, dtype=dtype, copy=True)
    out.setflags(write=False)
    return out


@dataclass(frozen=True)
class GrayImage:
    pixels: np.ndarray

    def __post_init__(self) -> None:
        pixels = np.asarray(self.pixels)
        if pixels.ndim != 2 or pixels.shape[0] < 1 or pixels.shape[1] < 1:
            raise DimensionError(f"GrayImage needs a non-empty 2-D array, got {pixels.shape}")
        if pixels.dtype != np.uint8 and (pixels.min() < 0 or pixels.max() > 255):
            raise DimensionError("GrayImage intensities must lie in [0, 255]")
        object.__setattr__(self, "pixels", _frozen(pixels, np.uint8))

    @property
    def width(self) -> int:
        return int(self.pixels.shape[1])

    @property
    def height(self) -> int:
        return int(self.pixels.shape[0])


@dataclass(frozen=True)
class RgbImage:
    """Three intensity planes stacked as an (H, W, 3) array."""

    pixels: np.ndarray

    def __post_init__(self) -> None:
        pixels = np.asarray(self.pixels)
        if pixels.ndim != 3 or pixels.shape[2] != 3 or pixels.shape[0] < 1 or pixels.shape[1] < 1:
            raise DimensionError(f"RgbImage needs an (H, W, 3) array, got {pixels.shape}")
        object.__setattr__(self, "pixels", _frozen(pixels, np.uint8))

    @classmethod
    def from_planes(cls, planes: list[GrayImage]) -> RgbImage:
        if len(planes) != 3:
            raise DimensionError("RgbImage needs exactly three planes")
        shapes = {p.pixels.shape for p in planes}
        if len(shapes) != 1:
            raise DimensionError(f"RgbImage planes differ in shape: {sorted(shapes)}")
        return cls(np.stack([p.pixels for p in planes], axis=2))

    @property
    def width(self) -> int:
        return int(self.pixels.shape[1])

    @property
    def height(self) -> int:
        return int(self.pixels.shape[0])

    def plane(self, index: int) -> GrayImage:
        return GrayImage(self.pixels[:, :, index])


@dataclass(frozen=True)
class FloatMap:
    values: np.ndarray

    def __post_init__(self) -> None:
        values = np.asarray(self.values, dtype=np.float64)
        if values.ndim != 2 or values.shape[0] < 1 or values.shape[1] < 1:
            raise DimensionError(f"FloatMap needs a non-empty 2-D array, got {values.shape}")
        if not np.all(np.isfinite(values)):
            raise DimensionError("FloatMap values must be finite")
        object.__setattr__(self, "values", _frozen(values, np.float64))

    @property
    def width(self) -> int:
        return int(self.values.shape[1])

    @property
    def height(self) -> int:
        return int(self.values.shape[0])


def to_float_map(img: GrayImage) -> FloatMap:
    return FloatMap(img.pixels.astype(np.float64) / 255.0)


def quantize(values: np.ndarray) -> np.ndarray:
    """Real values in [0, 1] to 8-bit intensities."""
    return np.clip(np.rint(np.asarray(values, dtype=np.float64) * 255.0), 0, 255).astype(np.uint8)


def to_gray_image(fmap: FloatMap) -> GrayImage:
    return GrayImage(quantize(fmap.values))


def first_plane(img: GrayImage | RgbImage) -> GrayImage:
    """Thermal frames ship channel-replicated; plane 0 carries the intensities."""
    if isinstance(img, RgbImage):
        return img.plane(0)
    return img


def load_image(path: str | Path) -> GrayImage | RgbImage:
    file_path = Path(path)
    try:
        with Image.open(file_path) as handle:
            if handle.format not in READABLE_FORMATS:
                raise FormatError(f"{file_path}: unsupported image format {handle.format}")
            handle.load()
            mode = handle.mode
            if mode in GRAY_MODES:
                return GrayImage(np.asarray(handle.convert("L")))
            if mode in COLOR_MODES:
                return RgbImage(np.asarray(handle.convert("RGB")))
            raise FormatError(f"{file_path}: unsupported pixel mode {mode}")
    except (FileNotFoundError, IsADirectoryError, PermissionError) as exc:
        raise IoError(f"{file_path}: {exc}") from exc
    except UnidentifiedImageError as exc:
        raise FormatError(f"{file_path}: not a PNG or JPEG image") from exc
    except (OSError, SyntaxError) as exc:
        # Pillow reports truncated streams as OSError
        raise FormatError(f"{file_path}: unreadable image data ({exc})") from exc


def save_image(img: GrayImage | RgbImage, path: str | Path) -> None:
    file_path = Path(path)
    try:
        Image.fromarray(np.ascontiguousarray(img.pixels)).save(file_path, format="PNG")
    except OSError as exc:
        raise IoError(f"{file_path}: {exc}") from exc
