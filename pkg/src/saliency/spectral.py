"""Spectral-residual saliency and the 2-D DFT kernels it runs on."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Literal

import numpy as np
from scipy.ndimage import gaussian_filter, uniform_filter

from src.imagery.raster import FloatMap, GrayImage, to_float_map
from src.imagery.resample import minmax_normalize, resize_lanczos
from src.saliency.maps import SaliencyMap
from src.utils.errors import DimensionError, ValidationError

MIN_SIDE = 8


@dataclass(frozen=True)
class ComplexMap:
    values: np.ndarray

    def __post_init__(self) -> None:
        values = np.array(self.values, dtype=np.complex128, copy=True)
        if values.ndim != 2:
            raise DimensionError(f"ComplexMap needs a 2-D array, got {values.shape}")
        values.setflags(write=False)
        object.__setattr__(self, "values", values)

    @classmethod
    def from_parts(cls, re: np.ndarray, im: np.ndarray) -> ComplexMap:
        re_arr = np.asarray(re, dtype=np.float64)
        im_arr = np.asarray(im, dtype=np.float64)
        if re_arr.shape != im_arr.shape:
            raise DimensionError("real and imaginary parts differ in shape")
        return cls(re_arr + 1j * im_arr)

    @property
    def re(self) -> np.ndarray:
        return self.values.real

    @property
    def im(self) -> np.ndarray:
        return self.values.imag

    @property
    def width(self) -> int:
        return int(self.values.shape[1])

    @property
    def height(self) -> int:
        return int(self.values.shape[0])


def dft2d(src: FloatMap) -> ComplexMap:
    """Unnormalized forward transform."""
    return ComplexMap(np.fft.fft2(src.values))


def idft2d(src: ComplexMap) -> ComplexMap:
    """Inverse transform scaled by 1 / (W * H)."""
    return ComplexMap(np.fft.ifft2(src.values))


def _dft_matrix(n: int) -> np.ndarray:
    k = np.arange(n)
    return np.exp(-2j * np.pi * np.outer(k, k) / n)


def dft2d_direct(src: FloatMap) -> ComplexMap:
    """Straight evaluation of the DFT sum; reference for the fast path."""
    return ComplexMap(_dft_matrix(src.height) @ src.values @ _dft_matrix(src.width))


@dataclass(frozen=True)
class SpectralResidualParams:
    working_width: int = 64
    working_height: int = 64
    log_epsilon: float = 1e-8
    smoothing_sigma: float = 2.5
    # the spectrum is periodic, so its local average wraps around
    spectrum_border: Literal["wrap", "nearest"] = "wrap"

    def __post_init__(self) -> None:
        if self.working_width < MIN_SIDE or self.working_height < MIN_SIDE:
            raise ValidationError(f"working size must be at least {MIN_SIDE}x{MIN_SIDE}")
        if self.log_epsilon <= 0:
            raise ValidationError("log_epsilon must be > 0")
        if self.smoothing_sigma < 0:
            raise ValidationError("smoothing_sigma must be >= 0")
        if self.spectrum_border not in {"wrap", "nearest"}:
            raise ValidationError("spectrum_border must be 'wrap' or 'nearest'")


def spectral_residual(
    src: GrayImage, params: SpectralResidualParams | None = None
) -> SaliencyMap:
    params = params or SpectralResidualParams()
    if src.width < MIN_SIDE or src.height < MIN_SIDE:
        raise DimensionError(
            f"spectral residual needs at least {MIN_SIDE}x{MIN_SIDE}, got {src.width}x{src.height}"
        )
    small = resize_lanczos(to_float_map(src), params.working_width, params.working_height)
    spectrum = dft2d(small).values
    log_amplitude = np.log(np.abs(spectrum) + params.log_epsilon)
    phase = np.angle(spectrum)
    residual = log_amplitude - uniform_filter(log_amplitude, size=3, mode=params.spectrum_border)
    recon = idft2d(ComplexMap(np.exp(residual + 1j * phase))).values
    energy = np.abs(recon) ** 2
    if params.smoothing_sigma > 0:
        energy = gaussian_filter(energy, sigma=params.smoothing_sigma, mode="nearest")
    normalized = minmax_normalize(FloatMap(energy))
    return SaliencyMap.from_float_map(resize_lanczos(normalized, src.width, src.height))
