from __future__ import annotations

import numpy as np
import pytest

from src.imagery.raster import FloatMap, GrayImage
from src.saliency.fine_grained import FineGrainedParams, box_sum, fine_grained, integral_image
from src.utils.errors import DimensionError, ValidationError


def _reference_contrast(pixels: np.ndarray, radius: int) -> np.ndarray:
    values = pixels.astype(np.float64)
    h, w = values.shape
    out = np.zeros_like(values)
    for y in range(h):
        for x in range(w):
            total = 0.0
            for dy in range(-radius, radius + 1):
                for dx in range(-radius, radius + 1):
                    yy = min(max(y + dy, 0), h - 1)
                    xx = min(max(x + dx, 0), w - 1)
                    total += values[yy, xx]
            out[y, x] = abs(values[y, x] - total / (2 * radius + 1) ** 2)
    return (out - out.min()) / (out.max() - out.min())


def test_integral_image_examples():
    table = integral_image(FloatMap(np.array([[1.0, 2.0], [3.0, 4.0]])))
    assert table.values.tolist() == [[1.0, 3.0], [4.0, 10.0]]
    ones = integral_image(FloatMap(np.ones((3, 3))))
    assert ones.values[2, 2] == 9.0


def test_box_sums_match_brute_force(rng: np.random.Generator):
    values = rng.integers(0, 256, size=(12, 9)).astype(np.float64)
    table = integral_image(FloatMap(values))
    for _ in range(200):
        x0, x1 = sorted(rng.integers(0, 9, size=2).tolist())
        y0, y1 = sorted(rng.integers(0, 12, size=2).tolist())
        assert box_sum(table, x0, y0, x1, y1) == values[y0 : y1 + 1, x0 : x1 + 1].sum()


def test_constant_image_gives_zeros():
    out = fine_grained(GrayImage(np.full((70, 70), 137, dtype=np.uint8)))
    assert np.array_equal(out.values, np.zeros((70, 70)))


def test_single_bright_pixel_is_the_maximum():
    pixels = np.zeros((64, 64), dtype=np.uint8)
    pixels[20, 45] = 255
    out = fine_grained(GrayImage(pixels))
    assert np.unravel_index(int(np.argmax(out.values)), out.values.shape) == (20, 45)
    assert out.values[20, 45] == 1.0


def test_single_radius_matches_brute_force(rng: np.random.Generator):
    pixels = rng.integers(0, 256, size=(24, 20), dtype=np.uint8)
    out = fine_grained(GrayImage(pixels), FineGrainedParams(surround_radii=(3,)))
    assert np.allclose(out.values, _reference_contrast(pixels, 3), atol=1e-9, rtol=0)


def test_commutes_with_half_turn(rng: np.random.Generator):
    pixels = rng.integers(0, 256, size=(66, 80), dtype=np.uint8)
    direct = fine_grained(GrayImage(pixels)).values
    turned = fine_grained(GrayImage(np.rot90(pixels, 2))).values
    assert np.allclose(np.rot90(direct, 2), turned, atol=1e-9, rtol=0)


def test_image_smaller_than_largest_surround_is_rejected():
    with pytest.raises(DimensionError):
        fine_grained(GrayImage(np.zeros((62, 100), dtype=np.uint8)))


@pytest.mark.parametrize("radii", [(), (0, 3), (7, 3), (3, 3)])
def test_radii_validation(radii: tuple[int, ...]):
    with pytest.raises(ValidationError):
        FineGrainedParams(surround_radii=radii)
