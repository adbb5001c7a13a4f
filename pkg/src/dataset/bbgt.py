"""Caltech-style bbGt annotation files as shipped with KAIST.

Each object line reads:
    label x y w h occluded vx vy vw vh ignore [angle]
where (vx, vy, vw, vh) is the visible part of the box. Version 3 files carry
the trailing angle field.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

from src.utils.errors import FormatError, IoError

HEADER_PREFIX = "% bbGt"
HEADER = "% bbGt version=3"


@dataclass(frozen=True)
class Annotation:
    label: str
    x: float
    y: float
    w: float
    h: float
    occluded: int = 0
    ignore: int = 0
    visible: tuple[float, float, float, float] = (0.0, 0.0, 0.0, 0.0)
    angle: float = 0.0

    def __post_init__(self) -> None:
        if self.w <= 0 or self.h <= 0:
            raise FormatError(f"annotation box needs w > 0 and h > 0, got w={self.w} h={self.h}")

    @property
    def box(self) -> tuple[float, float, float, float]:
        return (self.x, self.y, self.w, self.h)


def _number(token: str, line_no: int, field: str) -> float:
    try:
        return float(token)
    except ValueError as exc:
        raise FormatError(f"line {line_no}: field {field} is not numeric: {token!r}") from exc


def parse_bbgt(text: str) -> list[Annotation]:
    lines = text.splitlines()
    if not lines or not lines[0].strip().startswith(HEADER_PREFIX):
        raise FormatError("line 1: missing '% bbGt version=...' header")
    out: list[Annotation] = []
    for line_no, line in enumerate(lines[1:], start=2):
        tokens = line.split()
        if not tokens:
            continue
        if len(tokens) not in (11, 12):
            raise FormatError(f"line {line_no}: expected 11 or 12 fields, got {len(tokens)}")
        label = tokens[0]
        x, y, w, h = (_number(tokens[i], line_no, name) for i, name in enumerate("xywh", start=1))
        occluded = _number(tokens[5], line_no, "occluded")
        visible = tuple(_number(tokens[i], line_no, "visible") for i in range(6, 10))
        ignore = _number(tokens[10], line_no, "ignore")
        angle = _number(tokens[11], line_no, "angle") if len(tokens) == 12 else 0.0
        if w <= 0 or h <= 0:
            raise FormatError(f"line {line_no}: box needs positive width and height")
        out.append(
            Annotation(
                label=label,
                x=x,
                y=y,
                w=w,
                h=h,
                occluded=int(occluded),
                ignore=int(ignore),
                visible=(visible[0], visible[1], visible[2], visible[3]),
                angle=angle,
            )
        )
    return out


def _fmt(value: float) -> str:
    number = float(value)
    return str(int(number)) if number.is_integer() else repr(number)


def serialize_bbgt(anns: list[Annotation]) -> str:
    rows = [HEADER]
    for ann in anns:
        fields = [
            ann.label,
            *(_fmt(v) for v in ann.box),
            str(ann.occluded),
            *(_fmt(v) for v in ann.visible),
            str(ann.ignore),
            _fmt(ann.angle),
        ]
        rows.append(" ".join(fields))
    return "\n".join(rows) + "\n"


def read_bbgt_file(path: str | Path) -> list[Annotation]:
    file_path = Path(path)
    try:
        text = file_path.read_text(encoding="utf-8")
    except OSError as exc:
        raise IoError(f"{file_path}: {exc}") from exc
    try:
        return parse_bbgt(text)
    except FormatError as exc:
        raise FormatError(f"{file_path}: {exc}") from exc
