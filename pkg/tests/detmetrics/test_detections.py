from __future__ import annotations

from pathlib import Path

import pytest

from src.dataset.kaist_index import DatasetIndex
from src.detmetrics.detections import parse_detections, read_detection_file
from src.utils.errors import FormatError, IoError, UnknownFrame
from tests.helpers import make_frame

INDEX = DatasetIndex([make_frame(0), make_frame(20)])


def test_lines_become_detections_in_file_order():
    text = "# header\n\nset06/V000/I00020 1 2 30 60 0.75\nset06/V000/I00000 5 6 7 8 -1.5\n"
    dets = parse_detections(text, INDEX)
    assert [d.frame.frame_index for d in dets] == [20, 0]
    assert dets[0].box == (1.0, 2.0, 30.0, 60.0)
    assert dets[1].score == -1.5
    assert [d.file_position for d in dets] == [0, 1]


@pytest.mark.parametrize(
    "line",
    [
        "set06/V000/I00000 1 2 3 4",
        "set06/V000/I00000 1 2 three 4 0.5",
        "6/0/0 1 2 3 4 0.5",
        "set06/V000/I00000 1 2 0 4 0.5",
    ],
)
def test_malformed_lines_name_their_position(line: str):
    with pytest.raises(FormatError, match="line 2"):
        parse_detections(f"set06/V000/I00000 1 2 3 4 0.5\n{line}\n", INDEX)


def test_unknown_frame_is_reported():
    with pytest.raises(UnknownFrame):
        parse_detections("set06/V000/I00001 1 2 3 4 0.5\n", INDEX)


def test_missing_file_raises_io_error(tmp_path: Path):
    with pytest.raises(IoError):
        read_detection_file(tmp_path / "dets.txt", INDEX)
