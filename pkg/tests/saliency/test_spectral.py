from __future__ import annotations

import math

import numpy as np
import pytest

from src.imagery.raster import FloatMap, GrayImage
from src.saliency.spectral import (
    ComplexMap,
    SpectralResidualParams,
    dft2d,
    dft2d_direct,
    idft2d,
    spectral_residual,
)
from src.utils.errors import DimensionError, ValidationError


def _direct_transform(values: np.ndarray, sign: float) -> np.ndarray:
    h, w = values.shape
    out = np.zeros((h, w), dtype=np.complex128)
    ys = np.arange(h)[:, None]
    xs = np.arange(w)[None, :]
    for v in range(h):
        for u in range(w):
            phase = sign * 2j * math.pi * (u * xs / w + v * ys / h)
            out[v, u] = np.sum(values * np.exp(phase))
    return out


def _gaussian_nearest(values: np.ndarray, sigma: float) -> np.ndarray:
    radius = int(4.0 * sigma + 0.5)
    offsets = np.arange(-radius, radius + 1)
    kernel = np.exp(-0.5 * (offsets / sigma) ** 2)
    kernel /= kernel.sum()
    out = values.copy()
    for axis in (0, 1):
        n = out.shape[axis]
        smoothed = np.zeros_like(out)
        for k, weight in zip(offsets, kernel, strict=True):
            idx = np.clip(np.arange(n) + k, 0, n - 1)
            smoothed += weight * np.take(out, idx, axis=axis)
        out = smoothed
    return out


def _box_mean(values: np.ndarray, border: str) -> np.ndarray:
    h, w = values.shape
    total = np.zeros_like(values)
    for dy in (-1, 0, 1):
        for dx in (-1, 0, 1):
            if border == "wrap":
                total += np.roll(np.roll(values, dy, axis=0), dx, axis=1)
            else:
                rows = np.clip(np.arange(h) + dy, 0, h - 1)
                cols = np.clip(np.arange(w) + dx, 0, w - 1)
                total += values[np.ix_(rows, cols)]
    return total / 9.0


def _reference_saliency(
    pixels: np.ndarray, sigma: float = 2.5, eps: float = 1e-8, border: str = "wrap"
) -> np.ndarray:
    x = pixels.astype(np.float64) / 255.0
    h, w = x.shape
    spectrum = _direct_transform(x, -1.0)
    log_amp = np.log(np.abs(spectrum) + eps)
    phase = np.angle(spectrum)
    residual = log_amp - _box_mean(log_amp, border)
    recon = _direct_transform(np.exp(residual) * np.exp(1j * phase), 1.0) / (w * h)
    energy = _gaussian_nearest(np.abs(recon) ** 2, sigma)
    return (energy - energy.min()) / (energy.max() - energy.min())


def test_dft_of_two_by_two_example():
    out = dft2d(FloatMap(np.array([[1.0, 2.0], [3.0, 4.0]])))
    assert np.allclose(out.re, [[10.0, -2.0], [-4.0, 0.0]], atol=1e-12)
    assert np.allclose(out.im, 0.0, atol=1e-12)


def test_dft_of_constant_is_dc_only():
    out = dft2d(FloatMap(np.ones((3, 3))))
    expected = np.zeros((3, 3))
    expected[0, 0] = 9.0
    assert np.allclose(out.re, expected, atol=1e-12)
    assert np.allclose(out.im, 0.0, atol=1e-12)


def test_inverse_recovers_input(rng: np.random.Generator):
    values = rng.random((5, 7))
    back = idft2d(dft2d(FloatMap(values)))
    assert np.allclose(back.re, values, atol=1e-12)
    assert np.allclose(back.im, 0.0, atol=1e-12)


def test_parseval_holds(rng: np.random.Generator):
    values = rng.random((6, 10))
    spectrum = dft2d(FloatMap(values)).values
    assert np.sum(values**2) == pytest.approx(np.sum(np.abs(spectrum) ** 2) / 60.0, rel=1e-12)


def test_fast_and_direct_transforms_agree(rng: np.random.Generator):
    values = rng.random((9, 12))
    fast = dft2d(FloatMap(values)).values
    direct = dft2d_direct(FloatMap(values)).values
    assert np.allclose(fast, direct, atol=1e-9)
    assert np.allclose(direct, _direct_transform(values, -1.0), atol=1e-9)


def test_complex_map_from_parts_checks_shapes():
    assert ComplexMap.from_parts(np.ones((2, 2)), np.zeros((2, 2))).width == 2
    with pytest.raises(DimensionError):
        ComplexMap.from_parts(np.ones((2, 2)), np.zeros((2, 3)))


def test_output_matches_input_size_and_range(rng: np.random.Generator):
    img = GrayImage(rng.integers(0, 256, size=(51, 77), dtype=np.uint8))
    out = spectral_residual(img)
    assert (out.width, out.height) == (77, 51)
    assert out.values.min() >= 0.0
    assert out.values.max() <= 1.0


def test_single_blob_is_most_salient():
    pixels = np.zeros((64, 64), dtype=np.uint8)
    pixels[30:33, 40:43] = 255
    out = spectral_residual(GrayImage(pixels))
    row, col = np.unravel_index(int(np.argmax(out.values)), out.values.shape)
    assert abs(row - 31) <= 4
    assert abs(col - 41) <= 4


def test_matches_straight_line_reference(rng: np.random.Generator):
    params = SpectralResidualParams(working_width=16, working_height=16)
    for _ in range(20):
        pixels = rng.integers(0, 256, size=(16, 16), dtype=np.uint8)
        out = spectral_residual(GrayImage(pixels), params)
        assert np.allclose(out.values, _reference_saliency(pixels), atol=1e-6, rtol=0)


def test_edge_replicated_spectrum_average_matches_reference(rng: np.random.Generator):
    nearest = SpectralResidualParams(working_width=16, working_height=16, spectrum_border="nearest")
    wrapped = SpectralResidualParams(working_width=16, working_height=16)
    for _ in range(5):
        pixels = rng.integers(0, 256, size=(16, 16), dtype=np.uint8)
        out = spectral_residual(GrayImage(pixels), nearest).values
        expected = _reference_saliency(pixels, border="nearest")
        assert np.allclose(out, expected, atol=1e-6, rtol=0)
        assert not np.allclose(out, spectral_residual(GrayImage(pixels), wrapped).values)


def test_commutes_with_half_turn(rng: np.random.Generator):
    params = SpectralResidualParams(working_width=16, working_height=16)
    for _ in range(20):
        pixels = rng.integers(0, 256, size=(16, 16), dtype=np.uint8)
        direct = spectral_residual(GrayImage(pixels), params).values
        turned = spectral_residual(GrayImage(np.rot90(pixels, 2)), params).values
        assert np.allclose(np.rot90(direct, 2), turned, atol=1e-6, rtol=0)


def test_too_small_image_is_rejected():
    with pytest.raises(DimensionError):
        spectral_residual(GrayImage(np.zeros((7, 20), dtype=np.uint8)))


@pytest.mark.parametrize(
    "overrides",
    [
        {"working_width": 4},
        {"log_epsilon": 0.0},
        {"smoothing_sigma": -1.0},
        {"spectrum_border": "reflect"},
    ],
)
def test_params_validation(overrides: dict[str, object]):
    with pytest.raises(ValidationError):
        SpectralResidualParams(**overrides)  # type: ignore[arg-type]
