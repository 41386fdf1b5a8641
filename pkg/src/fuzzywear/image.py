"""Grayscale loading, canonical resize, gradients, and the edge-detection stage.

Images are plain 2-d float arrays with intensities in [0, 1], 1 = white.
The edge stage runs a two-rule inference system per pixel on the horizontal
and vertical intensity gradients and normalizes the result so the whitest
pixel is exactly 1.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np
from PIL import Image

from .errors import ConfigurationError, DegenerateImageError, ImageLoadError
from .fis import Clause, FuzzyRule, FuzzyVariable, GaussianMF, MamdaniFis, TriangularMF

CANONICAL_ROWS = 1536
CANONICAL_COLS = 1024
LUMA_RED, LUMA_GREEN, LUMA_BLUE = 0.299, 0.587, 0.114


@dataclass
class EdgeFisConfig:
    """Parameters of the per-pixel edge-detection inference system.

    ``sigma`` is the spread of the zero-gradient membership shared by both
    gradient inputs; smaller values flag fainter intensity changes as edges.
    The output triangles are (a, b, c) vertices on the [0, 1] edge universe.
    """

    sigma: float = 0.1
    white_triangle: Tuple[float, float, float] = (0.1, 1.0, 1.0)
    black_triangle: Tuple[float, float, float] = (0.0, 0.0, 0.7)
    resolution: int = 1001

    def build_fis(self) -> MamdaniFis:
        """The two-rule system: both gradients zero -> white, else -> black."""
        grad_x = FuzzyVariable(
            "grad_x", (-1.0, 1.0), {"zero": GaussianMF(0.0, self.sigma)}
        )
        grad_y = FuzzyVariable(
            "grad_y", (-1.0, 1.0), {"zero": GaussianMF(0.0, self.sigma)}
        )
        edge = FuzzyVariable(
            "edge",
            (0.0, 1.0),
            {
                "white": TriangularMF(*self.white_triangle),
                "black": TriangularMF(*self.black_triangle),
            },
        )
        rules = (
            FuzzyRule(
                (Clause("grad_x", "zero"), Clause("grad_y", "zero")), "white", "and"
            ),
            FuzzyRule(
                (
                    Clause("grad_x", "zero", negated=True),
                    Clause("grad_y", "zero", negated=True),
                ),
                "black",
                "or",
            ),
        )
        return MamdaniFis((grad_x, grad_y), edge, rules, self.resolution)


def load_grayscale(path) -> np.ndarray:
    """Decode an image file to a float grayscale matrix in [0, 1].

    Color inputs are reduced with the standard luminance weights
    0.299 R + 0.587 G + 0.114 B; grayscale inputs pass through scaled by 1/255.
    """
    try:
        with Image.open(path) as im:
            im.load()
            if im.width == 0 or im.height == 0:
                raise ImageLoadError(f"image {path} has a zero dimension")
            if im.mode == "L":
                return np.asarray(im, dtype=float) / 255.0
            if im.mode == "LA":
                return np.asarray(im.convert("L"), dtype=float) / 255.0
            rgb = np.asarray(im.convert("RGB"), dtype=float)
    except (OSError, ValueError) as exc:
        raise ImageLoadError(f"cannot read image {path}: {exc}") from exc
    return (LUMA_RED * rgb[..., 0] + LUMA_GREEN * rgb[..., 1] + LUMA_BLUE * rgb[..., 2]) / 255.0


def write_grayscale_png(img: np.ndarray, path) -> None:
    """Save a [0, 1] grayscale matrix as an 8-bit PNG (255 = white)."""
    data = np.rint(np.clip(np.asarray(img, dtype=float), 0.0, 1.0) * 255.0)
    Image.fromarray(data.astype(np.uint8), mode="L").save(path, format="PNG")


def _check_gray(img) -> np.ndarray:
    img = np.asarray(img, dtype=float)
    if img.ndim != 2 or img.shape[0] < 1 or img.shape[1] < 1:
        raise ConfigurationError(f"expected a non-empty 2-d image, got shape {img.shape}")
    return img


def resize_canonical(
    img: np.ndarray, rows: int = CANONICAL_ROWS, cols: int = CANONICAL_COLS
) -> np.ndarray:
    """Bilinear resample to the canonical portrait frame.

    An already-canonical image is returned value-identical. Output pixel
    centers are mapped into the source grid and blended from the four
    surrounding samples, with edge clamping.
    """
    img = _check_gray(img)
    if img.shape == (rows, cols):
        return img.copy()
    in_rows, in_cols = img.shape
    r = np.clip((np.arange(rows) + 0.5) * (in_rows / rows) - 0.5, 0, in_rows - 1)
    c = np.clip((np.arange(cols) + 0.5) * (in_cols / cols) - 0.5, 0, in_cols - 1)
    r0 = np.floor(r).astype(int)
    c0 = np.floor(c).astype(int)
    r1 = np.minimum(r0 + 1, in_rows - 1)
    c1 = np.minimum(c0 + 1, in_cols - 1)
    fr = (r - r0)[:, None]
    fc = (c - c0)[None, :]
    top = img[np.ix_(r0, c0)] * (1.0 - fc) + img[np.ix_(r0, c1)] * fc
    bottom = img[np.ix_(r1, c0)] * (1.0 - fc) + img[np.ix_(r1, c1)] * fc
    return np.clip(top * (1.0 - fr) + bottom * fr, 0.0, 1.0)


def gradients(img: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """Backward first differences along columns (ix) and rows (iy).

    Replicate padding keeps the first column and first row at zero gradient,
    so a [0, 1] image yields gradients in [-1, 1].
    """
    img = _check_gray(img)
    ix = np.diff(img, axis=1, prepend=img[:, :1])
    iy = np.diff(img, axis=0, prepend=img[:1, :])
    return ix, iy


def edge_response(
    img: np.ndarray, config: Optional[EdgeFisConfig] = None, threads: int = 1
) -> np.ndarray:
    """Raw per-pixel output of the edge FIS, before whiteness normalization.

    ``threads`` > 1 partitions the evaluation by row bands against the one
    shared immutable FIS; the result does not depend on the partitioning.
    """
    config = config or EdgeFisConfig()
    fis = config.build_fis()
    img = _check_gray(img)
    ix, iy = gradients(img)
    if threads and threads > 1 and img.shape[0] >= threads:
        bounds = np.linspace(0, img.shape[0], threads + 1).astype(int)
        bands = [(bounds[i], bounds[i + 1]) for i in range(threads)]

        def run(band):
            lo, hi = band
            return fis.evaluate_batch({"grad_x": ix[lo:hi], "grad_y": iy[lo:hi]})[0]

        with ThreadPoolExecutor(max_workers=threads) as pool:
            parts = list(pool.map(run, bands))
        return np.vstack(parts)
    return fis.evaluate_batch({"grad_x": ix, "grad_y": iy})[0]


def edge_map(
    img: np.ndarray, config: Optional[EdgeFisConfig] = None, threads: int = 1
) -> np.ndarray:
    """Edge FIS response normalized so the whitest pixel is exactly 1."""
    response = edge_response(img, config, threads)
    peak = float(response.max())
    if peak == 0.0:
        raise DegenerateImageError("edge response is identically zero; cannot normalize")
    return response / peak


def whiten_border(edge: np.ndarray, margin: int = 50) -> np.ndarray:
    """Force the first and last ``margin`` columns of an edge map to white."""
    edge = _check_gray(edge)
    margin = int(margin)
    if margin < 0:
        raise ConfigurationError(f"border margin must be >= 0, got {margin}")
    cols = edge.shape[1]
    if margin > 0 and 2 * margin >= cols:
        raise ConfigurationError(
            f"border margin {margin} too large for image width {cols}"
        )
    out = edge.copy()
    if margin > 0:
        out[:, :margin] = 1.0
        out[:, cols - margin :] = 1.0
    return out
