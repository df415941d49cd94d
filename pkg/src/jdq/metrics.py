"""Segmentation evaluation counts shared by the 2D and 3D pipelines."""

from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class SegMetrics:
    """True/false positive magnitudes plus the recall and error ratios.

    Magnitudes are pixel counts for 2D masks and surface areas for 3D
    labelings.  ``recall = tp / (tp + fn)`` measures how much of the
    ground-truth damage was detected; ``error = fp / (tp + fn)`` measures
    false detections against the same ground-truth magnitude, so it can
    exceed 1.  Both are ``None`` when the ground truth is empty: that
    case is reported explicitly instead of propagating NaNs.
    """

    tp: float
    fp: float
    fn: float

    def __post_init__(self):
        if self.tp < 0 or self.fp < 0 or self.fn < 0:
            raise ValueError("tp/fp/fn magnitudes must be non-negative")

    @property
    def gt_total(self) -> float:
        """Ground-truth positive magnitude (tp + fn)."""
        return self.tp + self.fn

    @property
    def pred_total(self) -> float:
        """Predicted positive magnitude (tp + fp)."""
        return self.tp + self.fp

    @property
    def defined(self) -> bool:
        return self.gt_total > 0

    @property
    def recall(self) -> float | None:
        if not self.defined:
            return None
        return self.tp / self.gt_total

    @property
    def error(self) -> float | None:
        if not self.defined:
            return None
        return self.fp / self.gt_total

    def to_dict(self) -> dict:
        return {
            "tp": self.tp,
            "fp": self.fp,
            "fn": self.fn,
            "gt_total": self.gt_total,
            "pred_total": self.pred_total,
            "defined": self.defined,
            "recall": self.recall,
            "error": self.error,
        }
