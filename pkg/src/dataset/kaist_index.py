"""Frame references and the dataset index built from a KAIST directory tree.

Layout:
    ROOT/setXX/VYYY/lwir/IZZZZZ.png
    ROOT/annotations/setXX/VYYY/IZZZZZ.txt
Canonical frame ids read "setXX/VYYY/IZZZZZ".
"""

from __future__ import annotations

import re
from collections.abc import Iterable, Mapping
from dataclasses import dataclass
from pathlib import Path
from types import MappingProxyType

from src.dataset.bbgt import Annotation, read_bbgt_file
from src.dataset.protocol_config import DatasetProtocol
from src.utils.errors import FormatError, IoError, UnknownFrame, ValidationError
from src.utils.log import log_status

FRAME_ID_PATTERN = re.compile(r"^set(\d{2})/V(\d{3})/I(\d{5})$")
SET_DIR_PATTERN = re.compile(r"^set(\d{2})$")
VIDEO_DIR_PATTERN = re.compile(r"^V(\d{3})$")
FRAME_FILE_PATTERN = re.compile(r"^I(\d{5})$")
IMAGE_SUFFIXES = {".png", ".jpg", ".jpeg"}


@dataclass(frozen=True, order=True)
class FrameRef:
    """Field order gives the canonical (split, set, video, frame) sort."""

    split: str
    set_id: int
    video_id: int
    frame_index: int
    condition: str

    @property
    def frame_id(self) -> str:
        return f"set{self.set_id:02d}/V{self.video_id:03d}/I{self.frame_index:05d}"


def parse_frame_id(text: str) -> tuple[int, int, int]:
    match = FRAME_ID_PATTERN.match(text.strip())
    if not match:
        raise FormatError(f"frame id must look like setXX/VYYY/IZZZZZ, got {text!r}")
    return int(match.group(1)), int(match.group(2)), int(match.group(3))


def make_frame_ref(
    set_id: int, video_id: int, frame_index: int, protocol: DatasetProtocol
) -> FrameRef:
    split = protocol.split_of(set_id)
    if split is None:
        raise ValidationError(f"set{set_id:02d} is neither a train nor a test set")
    if frame_index < 0:
        raise ValidationError("frame_index must be >= 0")
    return FrameRef(
        split=split,
        set_id=set_id,
        video_id=video_id,
        frame_index=frame_index,
        condition=protocol.condition_of(set_id),
    )


class DatasetIndex:
    """Immutable ordered frame list plus per-frame ground truth."""

    def __init__(
        self,
        frames: Iterable[FrameRef],
        annotations: Mapping[FrameRef, Iterable[Annotation]] | None = None,
    ) -> None:
        self._frames = tuple(sorted(frames))
        self._by_id: dict[str, FrameRef] = {}
        for frame in self._frames:
            if frame.frame_id in self._by_id:
                raise ValidationError(f"duplicate frame {frame.frame_id}")
            self._by_id[frame.frame_id] = frame
        anns = annotations or {}
        self._annotations = MappingProxyType(
            {frame: tuple(anns.get(frame, ())) for frame in self._frames}
        )

    @property
    def frames(self) -> tuple[FrameRef, ...]:
        return self._frames

    @property
    def annotations(self) -> Mapping[FrameRef, tuple[Annotation, ...]]:
        return self._annotations

    def __len__(self) -> int:
        return len(self._frames)

    def __contains__(self, frame: object) -> bool:
        return frame in self._annotations

    def lookup(self, frame_id: str) -> FrameRef:
        frame = self._by_id.get(frame_id.strip())
        if frame is None:
            raise UnknownFrame(f"frame {frame_id} is not in the dataset index")
        return frame

    def annotations_for(self, frame: FrameRef) -> tuple[Annotation, ...]:
        return self._annotations.get(frame, ())

    def select(self, split: str | None = None, condition: str | None = None) -> list[FrameRef]:
        return [
            frame
            for frame in self._frames
            if (split is None or frame.split == split)
            and (condition is None or frame.condition == condition)
        ]


def _numbered_dirs(parent: Path, pattern: re.Pattern[str]) -> list[tuple[int, Path]]:
    if not parent.is_dir():
        return []
    out: list[tuple[int, Path]] = []
    for child in sorted(parent.iterdir()):
        match = pattern.match(child.name)
        if match and child.is_dir():
            out.append((int(match.group(1)), child))
    return out


def _frame_numbers(directory: Path, suffixes: set[str]) -> dict[int, Path]:
    found: dict[int, Path] = {}
    if not directory.is_dir():
        return found
    for child in sorted(directory.iterdir()):
        match = FRAME_FILE_PATTERN.match(child.stem)
        if match and child.suffix.lower() in suffixes:
            found.setdefault(int(match.group(1)), child)
    return found


def build_index(root: str | Path, protocol: DatasetProtocol) -> DatasetIndex:
    """Index every frame that has a thermal image or an annotation file."""
    root_path = Path(root)
    if not root_path.is_dir():
        raise IoError(f"{root_path}: dataset root is not a directory")

    frames: dict[str, FrameRef] = {}
    annotations: dict[FrameRef, list[Annotation]] = {}
    set_ids = {set_id for set_id, _ in _numbered_dirs(root_path, SET_DIR_PATTERN)}
    for ann_dir in set(protocol.annotation_dirs.values()):
        set_ids |= {s for s, _ in _numbered_dirs(root_path / ann_dir, SET_DIR_PATTERN)}

    skipped_sets = 0
    for set_id in sorted(set_ids):
        split = protocol.split_of(set_id)
        if split is None:
            skipped_sets += 1
            continue
        set_name = f"set{set_id:02d}"
        ann_root = root_path / protocol.annotation_dirs[split] / set_name
        video_ids = {v for v, _ in _numbered_dirs(root_path / set_name, VIDEO_DIR_PATTERN)}
        video_ids |= {v for v, _ in _numbered_dirs(ann_root, VIDEO_DIR_PATTERN)}
        for video_id in sorted(video_ids):
            video_name = f"V{video_id:03d}"
            images = _frame_numbers(
                root_path / set_name / video_name / protocol.image_subdir, IMAGE_SUFFIXES
            )
            ann_files = _frame_numbers(ann_root / video_name, {".txt"})
            for frame_index in sorted(set(images) | set(ann_files)):
                frame = make_frame_ref(set_id, video_id, frame_index, protocol)
                frames[frame.frame_id] = frame
                ann_path = ann_files.get(frame_index)
                annotations[frame] = read_bbgt_file(ann_path) if ann_path else []

    index = DatasetIndex(frames.values(), annotations)
    log_status(
        "dataset",
        "success" if len(index) else "partial",
        root=root_path,
        frames=len(index),
        skipped_sets=skipped_sets,
    )
    return index


def write_frame_list(frames: Iterable[FrameRef], path: str | Path) -> None:
    file_path = Path(path)
    text = "".join(f"{frame.frame_id}\n" for frame in frames)
    try:
        file_path.write_text(text, encoding="utf-8", newline="\n")
    except OSError as exc:
        raise IoError(f"{file_path}: {exc}") from exc


def read_frame_list(path: str | Path, index: DatasetIndex) -> list[FrameRef]:
    file_path = Path(path)
    try:
        lines = file_path.read_text(encoding="utf-8").splitlines()
    except OSError as exc:
        raise IoError(f"{file_path}: {exc}") from exc
    out: list[FrameRef] = []
    for line_no, line in enumerate(lines, start=1):
        text = line.strip()
        if not text:
            continue
        try:
            parse_frame_id(text)
        except FormatError as exc:
            raise FormatError(f"{file_path}: line {line_no}: {exc}") from exc
        out.append(index.lookup(text))
    return out
