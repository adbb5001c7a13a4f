from __future__ import annotations

from dataclasses import dataclass
from typing import Literal

import numpy as np

from src.saliency.maps import SaliencyMap
from src.utils.errors import DimensionMismatch, ValidationError

Thresholding = Literal["adaptive_2x_mean", "max_over_255"]
THRESHOLDINGS: tuple[str, ...] = ("adaptive_2x_mean", "max_over_255")


@dataclass(frozen=True)
class SaliencyEvalConfig:
    beta_squared: float = 0.3
    thresholding: Thresholding = "adaptive_2x_mean"

    def __post_init__(self) -> None:
        if self.beta_squared <= 0:
            raise ValidationError("beta_squared must be > 0")
        if self.thresholding not in THRESHOLDINGS:
            raise ValidationError(f"thresholding must be one of {', '.join(THRESHOLDINGS)}")


def _same_shape(a: np.ndarray, b: np.ndarray) -> None:
    if a.shape != b.shape:
        raise DimensionMismatch(f"shapes differ: {a.shape} vs {b.shape}")


def adaptive_binarize(s: SaliencyMap) -> np.ndarray:
    """Threshold at twice the mean saliency, capped at 1; an all-zero map gives an empty mask."""
    t = min(2.0 * float(s.values.mean()), 1.0)
    if t <= 0.0:
        return np.zeros(s.values.shape, dtype=bool)
    return s.values >= t


def f_beta(pred_mask: np.ndarray, gt_mask: np.ndarray, beta_squared: float = 0.3) -> float:
    pred = np.asarray(pred_mask, dtype=bool)
    gt = np.asarray(gt_mask, dtype=bool)
    _same_shape(pred, gt)
    tp = int(np.count_nonzero(pred & gt))
    if tp == 0:
        return 0.0
    precision = tp / int(np.count_nonzero(pred))
    recall = tp / int(np.count_nonzero(gt))
    return (1.0 + beta_squared) * precision * recall / (beta_squared * precision + recall)


def max_f_beta(s: SaliencyMap, gt_mask: np.ndarray, beta_squared: float = 0.3) -> float:
    """Best F_beta over the thresholds k/255, k = 1..255."""
    levels = s.to_bytes()
    return max(f_beta(levels >= k, gt_mask, beta_squared) for k in range(1, 256))


def mae(s: SaliencyMap, g: SaliencyMap) -> float:
    _same_shape(s.values, g.values)
    return float(np.mean(np.abs(s.values - g.values)))


def score_f_beta(s: SaliencyMap, gt_mask: np.ndarray, cfg: SaliencyEvalConfig) -> float:
    if cfg.thresholding == "max_over_255":
        return max_f_beta(s, gt_mask, cfg.beta_squared)
    return f_beta(adaptive_binarize(s), gt_mask, cfg.beta_squared)
