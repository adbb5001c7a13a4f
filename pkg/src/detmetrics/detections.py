"""Detection result files: one `frame_id x y w h score` line per box."""

from __future__ import annotations

from pathlib import Path

from src.dataset.kaist_index import DatasetIndex, parse_frame_id
from src.detmetrics.matching import Detection
from src.utils.errors import FormatError, IoError, UnknownFrame, ValidationError


def parse_detections(text: str, index: DatasetIndex) -> list[Detection]:
    out: list[Detection] = []
    for line_no, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        tokens = stripped.split()
        if len(tokens) != 6:
            raise FormatError(f"line {line_no}: expected 6 fields, got {len(tokens)}")
        try:
            parse_frame_id(tokens[0])
        except FormatError as exc:
            raise FormatError(f"line {line_no}: {exc}") from exc
        try:
            x, y, w, h, score = (float(token) for token in tokens[1:])
        except ValueError as exc:
            raise FormatError(f"line {line_no}: non-numeric box or score field") from exc
        try:
            frame = index.lookup(tokens[0])
            out.append(
                Detection(
                    frame=frame, x=x, y=y, w=w, h=h, score=score, file_position=len(out)
                )
            )
        except UnknownFrame as exc:
            raise UnknownFrame(f"line {line_no}: {exc}") from exc
        except ValidationError as exc:
            raise FormatError(f"line {line_no}: {exc}") from exc
    return out


def read_detection_file(path: str | Path, index: DatasetIndex) -> list[Detection]:
    file_path = Path(path)
    try:
        text = file_path.read_text(encoding="utf-8")
    except OSError as exc:
        raise IoError(f"{file_path}: {exc}") from exc
    try:
        return parse_detections(text, index)
    except UnknownFrame as exc:
        raise UnknownFrame(f"{file_path}: {exc}") from exc
    except FormatError as exc:
        raise FormatError(f"{file_path}: {exc}") from exc
