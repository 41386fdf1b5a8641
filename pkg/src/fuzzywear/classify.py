"""End-to-end classification of one image against a trained model.

The identify FIS produces a crisp score on [0, 1.5]; half-open bands map it
to a label: [0, 0.5) shirt, [0.5, 1.0) dress, [1.0, 1.5] pants. A zero
aggregate (no rule fired) defuzzifies to the universe midpoint, which lands
in the dress band; the indeterminate flag tells callers not to trust it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .features import FeatureVector
from .pipeline import image_features
from .training import TrainedModel

BANDS = (("shirt", 0.0, 0.5), ("dress", 0.5, 1.0), ("pants", 1.0, 1.5))


def label_for_score(score: float) -> str:
    """Map a crisp identify score to its band label."""
    if math.isnan(score) or score < 0.0 or score > 1.5:
        raise ValueError(f"score {score} falls outside the [0, 1.5] universe")
    if score < 0.5:
        return "shirt"
    if score < 1.0:
        return "dress"
    return "pants"


@dataclass
class Classification:
    """Label, crisp score, the features behind them, and the zero-mass flag."""

    label: str
    score: float
    features: FeatureVector
    indeterminate: bool = False


def classify_features(features: FeatureVector, model: TrainedModel) -> Classification:
    """Score an already-extracted feature vector against the model."""
    value, indeterminate = model.identify_fis.evaluate(
        {"m1": features.m1, "mean_val": features.mean_val}
    )
    return Classification(label_for_score(value), float(value), features, bool(indeterminate))


def classify_image(
    path, model: TrainedModel, image_kind: str = "photo", threads: int = 1
) -> Classification:
    """Run the full pipeline on one image file and score it."""
    features = image_features(path, image_kind, model.pipeline, threads)
    return classify_features(features, model)
