from __future__ import annotations

from src.dataset.kaist_index import FrameRef

BBGT_HEADER = "% bbGt version=3"


def person_line(x: int, y: int, w: int, h: int, occluded: int = 0, label: str = "person") -> str:
    return f"{label} {x} {y} {w} {h} {occluded} 0 0 0 0 0 0"


def make_frame(
    frame_index: int,
    set_id: int = 6,
    video_id: int = 0,
    split: str = "test",
    condition: str = "day",
) -> FrameRef:
    return FrameRef(
        split=split,
        set_id=set_id,
        video_id=video_id,
        frame_index=frame_index,
        condition=condition,
    )
