from __future__ import annotations

import math
from collections.abc import Sequence
from dataclasses import dataclass
from typing import Literal

from src.dataset.bbgt import Annotation
from src.dataset.kaist_index import FrameRef
from src.utils.errors import ValidationError

Box = tuple[float, float, float, float]
MatchLabel = Literal["TP", "FP", "IGNORED"]

TP: MatchLabel = "TP"
FP: MatchLabel = "FP"
IGNORED: MatchLabel = "IGNORED"


@dataclass(frozen=True)
class Detection:
    frame: FrameRef
    x: float
    y: float
    w: float
    h: float
    score: float
    # position in the detection file; breaks score ties when ranking
    file_position: int = 0

    def __post_init__(self) -> None:
        if self.w <= 0 or self.h <= 0:
            raise ValidationError(f"detection box needs w > 0 and h > 0 ({self.frame.frame_id})")
        if not math.isfinite(self.score):
            raise ValidationError(f"detection score must be finite ({self.frame.frame_id})")

    @property
    def box(self) -> Box:
        return (self.x, self.y, self.w, self.h)


@dataclass(frozen=True)
class FrameInput:
    """Everything the matcher needs for one frame; detections keep file order."""

    detections: tuple[Detection, ...]
    kept: tuple[Annotation, ...]
    ignored: tuple[Annotation, ...] = ()


@dataclass(frozen=True)
class FrameMatch:
    det_labels: tuple[MatchLabel, ...]
    gt_matched: tuple[bool, ...]

    @property
    def true_positives(self) -> int:
        return self.det_labels.count(TP)

    @property
    def false_positives(self) -> int:
        return self.det_labels.count(FP)


def _intersection(a: Box, b: Box) -> float:
    ix = min(a[0] + a[2], b[0] + b[2]) - max(a[0], b[0])
    iy = min(a[1] + a[3], b[1] + b[3]) - max(a[1], b[1])
    if ix <= 0 or iy <= 0:
        return 0.0
    return ix * iy


def iou(a: Box, b: Box) -> float:
    inter = _intersection(a, b)
    if inter == 0.0:
        return 0.0
    return inter / (a[2] * a[3] + b[2] * b[3] - inter)


def score_order(dets: Sequence[Detection]) -> list[int]:
    """Indices by descending score; ties keep input order."""
    return sorted(range(len(dets)), key=lambda i: -dets[i].score)


def match_frame(
    dets: Sequence[Detection],
    kept: Sequence[Annotation],
    ignored: Sequence[Annotation] = (),
    iou_thresh: float = 0.5,
) -> FrameMatch:
    """Greedy score-ordered matching with ignore regions.

    Each detection takes the unmatched kept box of highest IoU >= iou_thresh.
    An unmatched detection covered by an ignore region (intersection over the
    detection's own area >= iou_thresh) is neither rewarded nor penalized.
    """
    if not 0.0 < iou_thresh < 1.0:
        raise ValidationError(f"iou_thresh must be in (0, 1), got {iou_thresh}")
    labels: list[MatchLabel] = [FP] * len(dets)
    matched = [False] * len(kept)
    for i in score_order(dets):
        det = dets[i]
        best, best_iou = -1, iou_thresh
        for j, gt in enumerate(kept):
            if matched[j]:
                continue
            overlap = iou(det.box, gt.box)
            if overlap >= best_iou and (best < 0 or overlap > best_iou):
                best, best_iou = j, overlap
        if best >= 0:
            matched[best] = True
            labels[i] = TP
            continue
        area = det.w * det.h
        if any(_intersection(det.box, region.box) / area >= iou_thresh for region in ignored):
            labels[i] = IGNORED
    return FrameMatch(det_labels=tuple(labels), gt_matched=tuple(matched))
