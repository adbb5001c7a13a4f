"""Miss-rate/FPPI curves, log-average miss rate and average precision."""

from __future__ import annotations

import math
from collections.abc import Sequence
from dataclasses import dataclass

import numpy as np

from src.detmetrics.matching import FP, TP, FrameInput, FrameMatch, match_frame
from src.utils.errors import EmptyGroundTruth, ValidationError

LAMR_REFERENCES = tuple(10.0 ** (-2.0 + 0.25 * k) for k in range(9))
MISS_RATE_FLOOR = 1e-10


@dataclass(frozen=True)
class OperatingPoint:
    threshold: float
    fppi: float
    miss_rate: float

    def __post_init__(self) -> None:
        if self.fppi < 0:
            raise ValidationError("fppi must be >= 0")
        if not 0.0 <= self.miss_rate <= 1.0:
            raise ValidationError("miss_rate must lie in [0, 1]")


def _total_ground_truth(frames: Sequence[FrameInput]) -> int:
    total = sum(len(frame.kept) for frame in frames)
    if total == 0:
        raise EmptyGroundTruth("no kept ground-truth pedestrians in the evaluated frames")
    return total


def _match_all(frames: Sequence[FrameInput], iou_thresh: float) -> list[FrameMatch]:
    return [match_frame(f.detections, f.kept, f.ignored, iou_thresh) for f in frames]


def _ranked_labels(
    frames: Sequence[FrameInput], matches: Sequence[FrameMatch]
) -> list[tuple[float, bool]]:
    """(score, is_tp) for every TP/FP detection, best first.

    Equal scores keep detection file order; detections without a file
    position fall back to frame order, then to their position in the frame.
    """
    ranked: list[tuple[float, int, int, int, bool]] = []
    for f_pos, (frame, match) in enumerate(zip(frames, matches, strict=True)):
        for d_pos, (det, label) in enumerate(zip(frame.detections, match.det_labels, strict=True)):
            if label in (TP, FP):
                ranked.append((-det.score, det.file_position, f_pos, d_pos, label == TP))
    ranked.sort(key=lambda item: item[:4])
    return [(-item[0], item[4]) for item in ranked]


def fppi_missrate_curve(
    frames: Sequence[FrameInput], iou_thresh: float = 0.5
) -> list[OperatingPoint]:
    """One point per distinct score threshold, sorted by ascending FPPI.

    Greedy matching visits detections best-first, so the labels at a lower
    threshold extend those at a higher one and a single matching pass serves
    every threshold.
    """
    if not frames:
        raise ValidationError("at least one frame is required")
    total_gt = _total_ground_truth(frames)
    ranked = _ranked_labels(frames, _match_all(frames, iou_thresh))
    if not ranked:
        return [OperatingPoint(threshold=math.inf, fppi=0.0, miss_rate=1.0)]

    points: list[OperatingPoint] = []
    tp = fp = 0
    for pos, (score, is_tp) in enumerate(ranked):
        if is_tp:
            tp += 1
        else:
            fp += 1
        last_of_threshold = pos + 1 == len(ranked) or ranked[pos + 1][0] != score
        if last_of_threshold:
            points.append(
                OperatingPoint(
                    threshold=score,
                    fppi=fp / len(frames),
                    miss_rate=1.0 - tp / total_gt,
                )
            )
    return sorted(points, key=lambda p: p.fppi)


def lamr(curve: Sequence[OperatingPoint]) -> float:
    """Geometric mean of miss rates sampled at nine log-spaced FPPI values in [1e-2, 1].

    Each sample takes the point with the largest FPPI not above the reference
    (the last such point, i.e. the lowest threshold, on FPPI ties); with no
    such point the miss rate is 1.
    """
    if not curve:
        raise ValidationError("curve must not be empty")
    log_sum = 0.0
    for ref in LAMR_REFERENCES:
        miss = 1.0
        for point in curve:
            if point.fppi <= ref:
                miss = point.miss_rate
            else:
                break
        log_sum += math.log(max(miss, MISS_RATE_FLOOR))
    return math.exp(log_sum / len(LAMR_REFERENCES))


def _envelope_area(recall: np.ndarray, precision: np.ndarray) -> float:
    mrec = np.concatenate(([0.0], recall, [1.0]))
    mpre = np.concatenate(([0.0], precision, [0.0]))
    mpre = np.maximum.accumulate(mpre[::-1])[::-1]
    steps = np.where(mrec[1:] != mrec[:-1])[0]
    return float(np.sum((mrec[steps + 1] - mrec[steps]) * mpre[steps + 1]))


def _eleven_point_area(recall: np.ndarray, precision: np.ndarray) -> float:
    total = 0.0
    for t in np.linspace(0.0, 1.0, 11):
        reached = precision[recall >= t]
        total += float(reached.max()) if reached.size else 0.0
    return total / 11.0


def average_precision(
    frames: Sequence[FrameInput], iou_thresh: float = 0.5, eleven_point: bool = False
) -> float:
    """Single-class AP; all-point envelope integration unless eleven_point is set."""
    total_gt = _total_ground_truth(frames)
    ranked = _ranked_labels(frames, _match_all(frames, iou_thresh))
    if not ranked:
        return 0.0
    hits = np.array([is_tp for _, is_tp in ranked], dtype=np.float64)
    tp = np.cumsum(hits)
    fp = np.cumsum(1.0 - hits)
    recall = tp / total_gt
    precision = tp / (tp + fp)
    if eleven_point:
        return _eleven_point_area(recall, precision)
    return _envelope_area(recall, precision)
