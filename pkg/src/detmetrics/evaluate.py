from __future__ import annotations

from collections import defaultdict
from collections.abc import Iterable, Sequence
from dataclasses import dataclass, replace

from src.dataset.kaist_index import DatasetIndex, FrameRef
from src.dataset.protocol import DEFAULT_PROTOCOL, reasonable_split
from src.dataset.protocol_config import DatasetProtocol
from src.detmetrics.curves import (
    OperatingPoint,
    average_precision,
    fppi_missrate_curve,
    lamr,
)
from src.detmetrics.matching import Detection, FrameInput
from src.utils.errors import UnknownFrame, ValidationError

CONDITIONS = ("day", "night", "all")


@dataclass(frozen=True)
class EvalReport:
    """One testing condition of one method: a row of the comparison table."""

    condition: str
    lamr: float
    map: float
    curve: tuple[OperatingPoint, ...]
    frame_count: int
    gt_count: int
    method: str = ""


def restrict_to_condition(frames: Iterable[FrameRef], condition: str) -> list[FrameRef]:
    if condition not in CONDITIONS:
        raise ValidationError(f"condition must be one of {', '.join(CONDITIONS)}")
    return [f for f in frames if condition == "all" or f.condition == condition]


def build_frame_inputs(
    index: DatasetIndex,
    detections: Iterable[Detection],
    frames: Sequence[FrameRef],
    protocol: DatasetProtocol = DEFAULT_PROTOCOL,
) -> list[FrameInput]:
    """Group detections per frame and attach reasonable ground truth.

    Each detection is stamped with its position in `detections`, which is
    taken to be file order. Detections on frames outside `frames` are dropped;
    detections on frames the index does not know are an error.
    """
    by_frame: dict[FrameRef, list[Detection]] = defaultdict(list)
    for position, det in enumerate(detections):
        if det.frame not in index:
            raise UnknownFrame(f"detection references unknown frame {det.frame.frame_id}")
        by_frame[det.frame].append(replace(det, file_position=position))
    inputs: list[FrameInput] = []
    for frame in frames:
        kept, ignored = reasonable_split(index, frame, protocol)
        inputs.append(
            FrameInput(
                detections=tuple(by_frame.get(frame, ())),
                kept=tuple(kept),
                ignored=tuple(ignored),
            )
        )
    return inputs


def evaluate(
    index: DatasetIndex,
    detections: Iterable[Detection],
    condition: str,
    frames: Sequence[FrameRef] | None = None,
    protocol: DatasetProtocol = DEFAULT_PROTOCOL,
    iou_thresh: float = 0.5,
    eleven_point: bool = False,
    method: str = "",
) -> EvalReport:
    selected = restrict_to_condition(index.frames if frames is None else frames, condition)
    if not selected:
        raise ValidationError(f"no frames for condition {condition}")
    inputs = build_frame_inputs(index, detections, selected, protocol)
    curve = fppi_missrate_curve(inputs, iou_thresh)
    return EvalReport(
        condition=condition,
        lamr=lamr(curve),
        map=average_precision(inputs, iou_thresh, eleven_point=eleven_point),
        curve=tuple(curve),
        frame_count=len(selected),
        gt_count=sum(len(item.kept) for item in inputs),
        method=method,
    )


def evaluate_conditions(
    index: DatasetIndex,
    detections: Sequence[Detection],
    frames: Sequence[FrameRef] | None = None,
    conditions: Sequence[str] = CONDITIONS,
    protocol: DatasetProtocol = DEFAULT_PROTOCOL,
    iou_thresh: float = 0.5,
    eleven_point: bool = False,
    method: str = "",
) -> list[EvalReport]:
    return [
        evaluate(
            index,
            detections,
            condition,
            frames=frames,
            protocol=protocol,
            iou_thresh=iou_thresh,
            eleven_point=eleven_point,
            method=method,
        )
        for condition in conditions
    ]
