from __future__ import annotations

import pytest

from src.dataset.bbgt import Annotation
from src.detmetrics.matching import FP, IGNORED, TP, Detection, iou, match_frame, score_order
from src.utils.errors import ValidationError
from tests.helpers import make_frame

FRAME = make_frame(0)


def _det(x: float, y: float, w: float, h: float, score: float) -> Detection:
    return Detection(frame=FRAME, x=x, y=y, w=w, h=h, score=score)


def _gt(x: float, y: float, w: float, h: float) -> Annotation:
    return Annotation("person", x, y, w, h)


def test_iou_examples():
    assert iou((0, 0, 2, 2), (1, 1, 2, 2)) == pytest.approx(1 / 7)
    assert iou((0, 0, 2, 2), (0, 0, 2, 2)) == 1.0
    assert iou((0, 0, 2, 2), (2, 0, 2, 2)) == 0.0


def test_iou_is_symmetric():
    a, b = (3, 4, 10, 7), (6, 1, 9, 12)
    assert iou(a, b) == iou(b, a)


def test_higher_score_takes_the_shared_box():
    gt = _gt(0, 0, 10, 20)
    result = match_frame([_det(1, 0, 10, 20, 0.4), _det(0, 0, 10, 20, 0.9)], [gt])
    assert result.det_labels == (FP, TP)
    assert result.gt_matched == (True,)
    assert (result.true_positives, result.false_positives) == (1, 1)


def test_best_overlap_wins_and_first_box_breaks_ties():
    left, right = _gt(0, 0, 10, 10), _gt(2, 0, 10, 10)
    assert match_frame([_det(2, 0, 10, 10, 1.0)], [left, right]).gt_matched == (False, True)
    twin = match_frame([_det(0, 0, 10, 10, 1.0)], [left, _gt(0, 0, 10, 10)])
    assert twin.gt_matched == (True, False)


def test_equal_scores_keep_input_order():
    dets = [_det(0, 0, 1, 1, 0.5), _det(0, 0, 1, 1, 0.9), _det(0, 0, 1, 1, 0.5)]
    assert score_order(dets) == [1, 0, 2]


def test_detection_in_ignore_region_is_neither_hit_nor_false_alarm():
    result = match_frame(
        [_det(100, 100, 10, 20, 0.9), _det(300, 300, 10, 20, 0.8)],
        kept=[],
        ignored=[_gt(95, 95, 30, 40)],
    )
    assert result.det_labels == (IGNORED, FP)


def test_kept_box_is_preferred_over_ignore_region():
    result = match_frame(
        [_det(0, 0, 10, 20, 0.9)], kept=[_gt(0, 0, 10, 20)], ignored=[_gt(0, 0, 50, 50)]
    )
    assert result.det_labels == (TP,)


def test_threshold_must_lie_in_open_unit_interval():
    with pytest.raises(ValidationError):
        match_frame([], [], iou_thresh=1.0)


def test_detection_validation():
    with pytest.raises(ValidationError):
        _det(0, 0, 0, 5, 0.5)
    with pytest.raises(ValidationError):
        _det(0, 0, 5, 5, float("nan"))
