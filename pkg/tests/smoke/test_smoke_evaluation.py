from __future__ import annotations

import pytest

from src.dataset.bbgt import parse_bbgt
from src.dataset.kaist_index import DatasetIndex
from src.detmetrics.detections import parse_detections
from src.detmetrics.evaluate import evaluate_conditions
from tests.helpers import make_frame


@pytest.mark.smoke
def test_detection_file_to_report():
    day, night = make_frame(0), make_frame(0, set_id=9, condition="night")
    anns = parse_bbgt("% bbGt version=3\nperson 100 100 40 100 0 0 0 0 0 0 0\n")
    index = DatasetIndex([day, night], {day: anns, night: anns})
    dets = parse_detections(
        "set06/V000/I00000 100 100 40 100 0.9\nset09/V000/I00000 101 99 40 100 0.8\n", index
    )
    reports = evaluate_conditions(index, dets)
    assert [r.condition for r in reports] == ["day", "night", "all"]
    assert all(r.lamr == pytest.approx(1e-10) for r in reports)
    assert all(r.map == pytest.approx(1.0) for r in reports)
