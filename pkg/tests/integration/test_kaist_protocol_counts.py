from __future__ import annotations

import os
from pathlib import Path

import pytest

from src.dataset.kaist_index import build_index
from src.dataset.protocol import sample_split, select_annotation_subset, subset_summary
from src.dataset.protocol_config import load_protocol

KAIST_ROOT = os.getenv("KAIST_ROOT", "")
SHIPPED_CONFIG = Path(__file__).resolve().parents[2] / "config" / "kaist_protocol.yaml"

pytestmark = [
    pytest.mark.integration,
    pytest.mark.skipif(not KAIST_ROOT, reason="KAIST_ROOT is not set"),
]


@pytest.fixture(scope="module")
def kaist():
    protocol = load_protocol(SHIPPED_CONFIG)
    return build_index(KAIST_ROOT, protocol), protocol


def test_training_frames(kaist):
    index, protocol = kaist
    frames = sample_split(index, "train", protocol, require_pedestrians=True)
    summary = subset_summary(index, frames, protocol)
    assert (summary["day_frames"], summary["night_frames"]) == (4755, 2846)


def test_test_frames(kaist):
    index, protocol = kaist
    summary = subset_summary(index, sample_split(index, "test", protocol), protocol)
    assert (summary["day_frames"], summary["night_frames"]) == (1455, 797)


def test_saliency_annotation_subset(kaist):
    index, protocol = kaist
    summary = subset_summary(index, select_annotation_subset(index, protocol), protocol)
    assert (summary["day_frames"], summary["night_frames"]) == (913, 789)
    assert summary["instances"] == 4170
