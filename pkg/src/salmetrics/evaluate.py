from __future__ import annotations

from collections.abc import Mapping
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from src.imagery.raster import first_plane, load_image, to_float_map
from src.saliency.maps import SaliencyMap, ingest_external_saliency
from src.salmetrics.measures import SaliencyEvalConfig, mae, score_f_beta
from src.utils.errors import IoError, KeyMismatch, ValidationError

GT_BINARIZE_AT = 0.5
MASK_SUFFIXES = {".png", ".jpg", ".jpeg"}


@dataclass(frozen=True)
class SaliencyScores:
    method: str
    f_beta: float
    mae: float
    count: int


def evaluate_saliency(
    preds: Mapping[str, SaliencyMap],
    gts: Mapping[str, SaliencyMap],
    cfg: SaliencyEvalConfig | None = None,
    method: str = "",
) -> SaliencyScores:
    """Per-image F_beta and MAE averaged over images (keys visited in sorted order)."""
    cfg = cfg or SaliencyEvalConfig()
    if not gts:
        raise ValidationError("no ground-truth maps to evaluate against")
    missing = sorted(set(gts) - set(preds))
    extra = sorted(set(preds) - set(gts))
    if missing or extra:
        raise KeyMismatch(
            f"unmatched frames: missing predictions {missing[:10]}, "
            f"predictions without ground truth {extra[:10]}"
        )
    f_scores: list[float] = []
    errors: list[float] = []
    for key in sorted(gts):
        pred, gt = preds[key], gts[key]
        f_scores.append(score_f_beta(pred, gt.values >= GT_BINARIZE_AT, cfg))
        errors.append(mae(pred, gt))
    return SaliencyScores(
        method=method,
        f_beta=float(np.mean(f_scores)),
        mae=float(np.mean(errors)),
        count=len(f_scores),
    )


def _mask_files(directory: str | Path) -> dict[str, Path]:
    root = Path(directory)
    if not root.is_dir():
        raise IoError(f"{root}: not a directory")
    return {
        path.relative_to(root).with_suffix("").as_posix(): path
        for path in sorted(root.rglob("*"))
        if path.is_file() and path.suffix.lower() in MASK_SUFFIXES
    }


def load_ground_truth_dir(directory: str | Path) -> dict[str, SaliencyMap]:
    """Masks are binarized at 0.5 to undo antialiasing in the 8-bit files."""
    out: dict[str, SaliencyMap] = {}
    for key, path in _mask_files(directory).items():
        values = to_float_map(first_plane(load_image(path))).values
        out[key] = SaliencyMap((values >= GT_BINARIZE_AT).astype(np.float64))
    return out


def load_prediction_dir(
    directory: str | Path, reference: Mapping[str, SaliencyMap] | None = None
) -> dict[str, SaliencyMap]:
    """Predictions are min-max normalized and, given a reference, resized to its map sizes."""
    out: dict[str, SaliencyMap] = {}
    for key, path in _mask_files(directory).items():
        ref = reference.get(key) if reference is not None else None
        if ref is None:
            out[key] = ingest_external_saliency(path)
        else:
            out[key] = ingest_external_saliency(path, ref.width, ref.height)
    return out
