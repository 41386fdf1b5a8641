"""Characteristic-curve extraction and the two scalar silhouette features.

The characteristic curve of a region of interest is the leftmost non-white
column per row of the edge map: the garment's left outline, independent of
interior patterning. Two scalars summarize it: ``m1``, the least-squares
slope of the first region's curve, and ``mean_val``, the mean column of the
first region minus the mean column of the second.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

import numpy as np

from .errors import ConfigurationError, InsufficientDataError

DEFAULT_ROI_ROWS = (400, 800, 1200)
DEFAULT_ROI_HALF_WIDTH = 50
DEFAULT_WHITE_THRESHOLD = 0.98


@dataclass(frozen=True)
class Roi:
    """Horizontal row band centered on ``center_row`` spanning +-``half_width``."""

    index: int
    center_row: int
    half_width: int = DEFAULT_ROI_HALF_WIDTH

    def __post_init__(self):
        if self.half_width < 0:
            raise ConfigurationError(
                f"ROI {self.index}: half_width must be >= 0, got {self.half_width}"
            )

    @property
    def row_range(self) -> Tuple[int, int]:
        """Inclusive (first, last) row of the band."""
        return (self.center_row - self.half_width, self.center_row + self.half_width)


def default_rois(
    rows: Sequence[int] = DEFAULT_ROI_ROWS,
    half_width: int = DEFAULT_ROI_HALF_WIDTH,
) -> Tuple[Roi, ...]:
    """The three scan bands, numbered from 1 top to bottom."""
    return tuple(Roi(i + 1, int(row), half_width) for i, row in enumerate(rows))


@dataclass
class CharacteristicCurve:
    """Leftmost non-white column per row of one ROI; edge-free rows are absent."""

    roi: Roi
    rows: np.ndarray
    cols: np.ndarray

    def __len__(self) -> int:
        return int(self.rows.size)

    @property
    def points(self) -> List[Tuple[int, int]]:
        return list(zip(self.rows.tolist(), self.cols.tolist()))


@dataclass
class FeatureVector:
    """The two classifier inputs plus the usable-row count per ROI."""

    m1: float
    mean_val: float
    valid_rows: Tuple[int, int, int]


def leftmost_edge(
    edge: np.ndarray, roi: Roi, white_threshold: float = DEFAULT_WHITE_THRESHOLD
) -> CharacteristicCurve:
    """Scan each ROI row for the first column strictly darker than the threshold.

    Expects the edge map's border columns to be whitened already, so frame
    artifacts cannot win the scan.
    """
    edge = np.asarray(edge, dtype=float)
    if not 0.0 < white_threshold < 1.0:
        raise ConfigurationError(
            f"white threshold must lie in (0, 1), got {white_threshold}"
        )
    first_row, last_row = roi.row_range
    if first_row < 0 or last_row >= edge.shape[0]:
        raise ConfigurationError(
            f"ROI {roi.index} rows [{first_row}, {last_row}] fall outside an "
            f"image with {edge.shape[0]} rows"
        )
    band = edge[first_row : last_row + 1]
    dark = band < white_threshold
    found = dark.any(axis=1)
    first_col = dark.argmax(axis=1)
    rows = np.arange(first_row, last_row + 1)[found]
    return CharacteristicCurve(roi, rows, first_col[found].astype(int))


def fit_slope(curve: CharacteristicCurve) -> float:
    """Ordinary least-squares slope of curve column against row."""
    if len(curve) < 2 or np.unique(curve.rows).size < 2:
        raise InsufficientDataError(
            f"ROI {curve.roi.index}: need at least 2 rows with a detected edge "
            f"to fit a slope, have {len(curve)}"
        )
    slope, _ = np.polyfit(curve.rows.astype(float), curve.cols.astype(float), 1)
    return float(slope)


def mean_diff(curve_one: CharacteristicCurve, curve_two: CharacteristicCurve) -> float:
    """Mean column of the first curve minus the mean column of the second."""
    for curve in (curve_one, curve_two):
        if len(curve) == 0:
            raise InsufficientDataError(
                f"ROI {curve.roi.index}: no edge points for the mean-column feature"
            )
    return float(curve_one.cols.mean() - curve_two.cols.mean())


def extract_curves(
    edge: np.ndarray,
    rois: Optional[Sequence[Roi]] = None,
    white_threshold: float = DEFAULT_WHITE_THRESHOLD,
) -> Tuple[CharacteristicCurve, CharacteristicCurve, CharacteristicCurve]:
    """All three characteristic curves of an edge map."""
    rois = tuple(rois) if rois is not None else default_rois()
    if len(rois) != 3:
        raise ConfigurationError(f"expected exactly 3 ROIs, got {len(rois)}")
    one, two, three = (leftmost_edge(edge, roi, white_threshold) for roi in rois)
    return one, two, three


def features_from_curves(
    curves: Sequence[CharacteristicCurve],
) -> FeatureVector:
    """Reduce the three curves to the feature vector.

    The third curve is extracted for diagnostics but feeds no feature; it
    carries no information beyond the first band.
    """
    one, two, three = curves
    return FeatureVector(
        m1=fit_slope(one),
        mean_val=mean_diff(one, two),
        valid_rows=(len(one), len(two), len(three)),
    )


def extract_features(
    edge: np.ndarray,
    rois: Optional[Sequence[Roi]] = None,
    white_threshold: float = DEFAULT_WHITE_THRESHOLD,
) -> FeatureVector:
    """Characteristic curves plus reduction in one call."""
    return features_from_curves(extract_curves(edge, rois, white_threshold))
