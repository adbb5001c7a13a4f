from __future__ import annotations

from pathlib import Path

import numpy as np
import pytest

from src.imagery.raster import GrayImage, save_image
from src.saliency.maps import SaliencyMap
from src.salmetrics.evaluate import (
    evaluate_saliency,
    load_ground_truth_dir,
    load_prediction_dir,
)
from src.utils.errors import IoError, KeyMismatch, ValidationError


def _mask(top_rows: int, size: int = 8) -> SaliencyMap:
    values = np.zeros((size, size))
    values[:top_rows, :] = 1.0
    return SaliencyMap(values)


def test_perfect_predictions_score_one_and_zero_error():
    gts = {"a": _mask(2), "b": _mask(1)}
    scores = evaluate_saliency(dict(gts), gts, method="oracle")
    assert scores.method == "oracle"
    assert scores.count == 2
    assert scores.f_beta == pytest.approx(1.0)
    assert scores.mae == 0.0


def test_scores_are_means_over_images():
    gts = {"a": _mask(2), "b": _mask(2)}
    preds = {"a": _mask(2), "b": SaliencyMap(np.zeros((8, 8)))}
    scores = evaluate_saliency(preds, gts)
    assert scores.f_beta == pytest.approx(0.5)
    assert scores.mae == pytest.approx(0.125)


def test_key_sets_must_match():
    with pytest.raises(KeyMismatch):
        evaluate_saliency({"a": _mask(1)}, {"a": _mask(1), "b": _mask(1)})


def test_empty_ground_truth_is_rejected():
    with pytest.raises(ValidationError):
        evaluate_saliency({}, {})


def test_ground_truth_masks_are_binarized(tmp_path: Path):
    pixels = np.array([[0, 127], [128, 255]], dtype=np.uint8)
    save_image(GrayImage(pixels), tmp_path / "set00_V000_I00000.png")
    gts = load_ground_truth_dir(tmp_path)
    assert gts["set00_V000_I00000"].values.tolist() == [[0.0, 0.0], [1.0, 1.0]]


def test_predictions_are_resized_to_ground_truth(tmp_path: Path):
    gt_dir, pred_dir = tmp_path / "gt", tmp_path / "pred"
    gt_dir.mkdir()
    pred_dir.mkdir()
    save_image(GrayImage(np.zeros((16, 20), dtype=np.uint8)), gt_dir / "f.png")
    pred = np.full((8, 8), 30, dtype=np.uint8)
    pred[:4] = 200
    save_image(GrayImage(pred), pred_dir / "f.png")
    preds = load_prediction_dir(pred_dir, reference=load_ground_truth_dir(gt_dir))
    assert (preds["f"].width, preds["f"].height) == (20, 16)
    assert preds["f"].values.min() == 0.0


def test_missing_directory_raises_io_error(tmp_path: Path):
    with pytest.raises(IoError):
        load_ground_truth_dir(tmp_path / "absent")
