"""Frame sampling, reasonable-condition filtering and saliency-subset selection."""

from __future__ import annotations

from collections import Counter
from collections.abc import Iterable
from typing import Any

from src.dataset.bbgt import Annotation
from src.dataset.kaist_index import DatasetIndex, FrameRef
from src.dataset.protocol_config import DatasetProtocol

DEFAULT_PROTOCOL = DatasetProtocol()


def filter_reasonable(
    anns: Iterable[Annotation],
    img_w: float,
    img_h: float,
    min_height: float = 50,
    person_label: str = "person",
) -> tuple[list[Annotation], list[Annotation]]:
    """Split ground truth into kept boxes and ignore regions.

    Kept: label `person`, height >= min_height, not occluded, not flagged
    ignore, and fully inside the image (anything crossing the border counts
    as truncated). Everything else becomes an ignore region.
    """
    kept: list[Annotation] = []
    ignored: list[Annotation] = []
    for ann in anns:
        inside = ann.x >= 0 and ann.y >= 0 and ann.x + ann.w <= img_w and ann.y + ann.h <= img_h
        if (
            ann.label == person_label
            and ann.h >= min_height
            and ann.occluded == 0
            and ann.ignore == 0
            and inside
        ):
            kept.append(ann)
        else:
            ignored.append(ann)
    return kept, ignored


def reasonable_split(
    index: DatasetIndex, frame: FrameRef, protocol: DatasetProtocol = DEFAULT_PROTOCOL
) -> tuple[list[Annotation], list[Annotation]]:
    return filter_reasonable(
        index.annotations_for(frame),
        protocol.frame_width,
        protocol.frame_height,
        min_height=protocol.min_height,
        person_label=protocol.person_label,
    )


def pedestrian_count(
    index: DatasetIndex, frame: FrameRef, protocol: DatasetProtocol = DEFAULT_PROTOCOL
) -> int:
    return len(reasonable_split(index, frame, protocol)[0])


def sample_split(
    index: DatasetIndex,
    split: str,
    protocol: DatasetProtocol = DEFAULT_PROTOCOL,
    require_pedestrians: bool = False,
) -> list[FrameRef]:
    """Keep every n-th frame per video (n = 3 for train, 20 for test).

    Frames are kept when frame_index is congruent to the configured offset,
    so the phase is anchored at frame 0 by default.
    """
    stride = protocol.stride_for(split)
    phase = protocol.sample_offset % stride
    out = [
        frame
        for frame in index.select(split=split)
        if frame.frame_index % stride == phase
    ]
    if require_pedestrians:
        out = [frame for frame in out if pedestrian_count(index, frame, protocol) > 0]
    return out


def select_annotation_subset(
    index: DatasetIndex,
    protocol: DatasetProtocol = DEFAULT_PROTOCOL,
    split: str = "train",
) -> list[FrameRef]:
    """Every 15th day frame and every 10th night frame among those with pedestrians.

    Strides run over each condition's pedestrian frames in canonical order,
    keeping 0-based positions divisible by the stride.
    """
    strides = {"day": protocol.subset_day_stride, "night": protocol.subset_night_stride}
    selected: list[FrameRef] = []
    for condition, stride in strides.items():
        candidates = [
            frame
            for frame in index.select(split=split, condition=condition)
            if pedestrian_count(index, frame, protocol) > 0
        ]
        selected.extend(candidates[::stride])
    return sorted(selected)


def pedestrian_histogram(
    index: DatasetIndex,
    frames: Iterable[FrameRef],
    protocol: DatasetProtocol = DEFAULT_PROTOCOL,
) -> dict[int, int]:
    counts = Counter(pedestrian_count(index, frame, protocol) for frame in frames)
    return dict(sorted(counts.items()))


def subset_summary(
    index: DatasetIndex,
    frames: Iterable[FrameRef],
    protocol: DatasetProtocol = DEFAULT_PROTOCOL,
) -> dict[str, Any]:
    """Frame and pedestrian-instance totals per condition."""
    summary: dict[str, Any] = {
        "frames": 0,
        "instances": 0,
        "day_frames": 0,
        "night_frames": 0,
        "day_instances": 0,
        "night_instances": 0,
    }
    for frame in frames:
        count = pedestrian_count(index, frame, protocol)
        summary["frames"] += 1
        summary["instances"] += count
        summary[f"{frame.condition}_frames"] += 1
        summary[f"{frame.condition}_instances"] += count
    return summary
