"""Synthetic clothing silhouettes with known left-boundary ground truth.

Each generator renders a white frame and a dark garment whose left outline
is a piecewise-linear function of the row (mirrored on the right), built so
the extracted features carry the class signature: shirts slope negative
through the first scan band and sit wider there than below; dresses slope
positive and sit narrower above than at the skirt; pants slope positive and
sit wider at the hip band than along the leg. Seeded jitter and optional
interior stripes keep fixtures from being trivially clean.

The realized outline is returned (and written) per row so tests can score
the pipeline against an independent ground truth.
"""

from __future__ import annotations

from pathlib import Path
from typing import Optional, Tuple

import numpy as np
from PIL import Image

CLASSES = ("shirt", "dress", "pants")
_CLASS_CODE = {"shirt": 1, "dress": 2, "pants": 3}

# Boundary columns are kept inside these limits so the whitened border can
# never swallow the outline and the mirrored garment keeps positive width.
_COL_LO = 70
_COL_HI_MARGIN = 20

_STRIPE_CONTRAST = 0.22


def _segments_shirt(rng):
    slope = rng.uniform(-0.60, -0.35)
    roi1_mean = rng.uniform(200.0, 250.0)
    roi2_mean = roi1_mean - rng.uniform(-220.0, -120.0)
    body_slope = rng.uniform(-0.05, -0.01)
    top = int(rng.integers(200, 261))
    sleeve_end = int(rng.integers(455, 476))
    bottom = int(rng.integers(880, 951))

    def sleeve(r):
        return roi1_mean + slope * (r - 400)

    def body(r):
        return roi2_mean + body_slope * (r - 800)

    return [
        (top, sleeve_end, sleeve(top), sleeve(sleeve_end)),
        (sleeve_end + 1, bottom, body(sleeve_end + 1), body(bottom)),
    ]


def _segments_dress(rng):
    slope = rng.uniform(0.28, 0.50)
    roi1_mean = rng.uniform(380.0, 415.0)
    roi2_mean = roi1_mean - rng.uniform(80.0, 130.0)
    skirt_slope = rng.uniform(-0.10, -0.04)
    top = int(rng.integers(80, 141))
    bodice_start = int(rng.integers(290, 311))
    waist = int(rng.integers(530, 561))
    flare_end = int(rng.integers(700, 731))
    hem = int(rng.integers(1280, 1381))

    def bodice(r):
        return roi1_mean + slope * (r - 400)

    def skirt(r):
        return roi2_mean + skirt_slope * (r - 800)

    return [
        (top, bodice_start, bodice(bodice_start), bodice(bodice_start)),
        (bodice_start, waist, bodice(bodice_start), bodice(waist)),
        (waist, flare_end, bodice(waist), skirt(flare_end)),
        (flare_end, hem, skirt(flare_end), skirt(hem)),
    ]


def _segments_pants(rng):
    slope = rng.uniform(0.25, 0.50)
    roi1_mean = rng.uniform(255.0, 300.0)
    roi2_mean = roi1_mean - rng.uniform(-80.0, -35.0)
    leg_slope = rng.uniform(0.01, 0.05)
    top = int(rng.integers(240, 301))
    hip_end = int(rng.integers(530, 561))
    bottom = int(rng.integers(1400, 1481))

    def hip(r):
        return roi1_mean + slope * (r - 400)

    def leg(r):
        return roi2_mean + leg_slope * (r - 800)

    return [
        (top, hip_end, hip(top), hip(hip_end)),
        (hip_end + 1, bottom, leg(hip_end + 1), leg(bottom)),
    ]


_SEGMENT_BUILDERS = {
    "shirt": _segments_shirt,
    "dress": _segments_dress,
    "pants": _segments_pants,
}


def generate_silhouette(
    kind: str, seed: int, rows: int = 1536, cols: int = 1024
) -> Tuple[np.ndarray, np.ndarray]:
    """Render one fixture deterministically from (kind, seed).

    Returns ``(image, boundary)``: the image is rows x cols in [0, 1]; the
    boundary holds the realized left-outline column per row, -1 where the
    garment is absent.
    """
    if kind not in CLASSES:
        raise ValueError(f"unknown fixture class {kind!r}; expected one of {CLASSES}")
    rng = np.random.default_rng([_CLASS_CODE[kind], int(seed)])
    segments = _SEGMENT_BUILDERS[kind](rng)

    amp1 = rng.uniform(0.5, 1.5)
    amp2 = rng.uniform(0.3, 1.0)
    period1 = rng.uniform(150.0, 260.0)
    period2 = rng.uniform(300.0, 500.0)
    phase1, phase2 = rng.uniform(0.0, 2.0 * np.pi, size=2)

    boundary = np.full(rows, -1, dtype=int)
    col_hi = cols // 2 - _COL_HI_MARGIN
    for row_start, row_end, col_start, col_end in segments:
        rr = np.arange(row_start, min(row_end, rows - 1) + 1)
        if rr.size == 0:
            continue
        span = max(row_end - row_start, 1)
        base = col_start + (col_end - col_start) * (rr - row_start) / span
        jitter = amp1 * np.sin(2.0 * np.pi * rr / period1 + phase1)
        jitter += amp2 * np.sin(2.0 * np.pi * rr / period2 + phase2)
        boundary[rr] = np.clip(np.rint(base + jitter), _COL_LO, col_hi).astype(int)

    fill = rng.uniform(0.08, 0.35)
    pattern = rng.choice(["plain", "vstripes", "hstripes"], p=[0.4, 0.3, 0.3])
    stripe_period = int(rng.integers(28, 80))

    col_idx = np.arange(cols)[None, :]
    left = boundary[:, None]
    right = (cols - 1) - left
    garment = (left >= 0) & (col_idx >= left) & (col_idx <= right)
    image = np.ones((rows, cols))
    image[garment] = fill
    if pattern != "plain":
        # Stripes stay clear of the outline so the leftmost edge is untouched.
        inner = garment & (col_idx >= left + 3) & (col_idx <= right - 3)
        if pattern == "vstripes":
            stripes = ((col_idx // stripe_period) % 2).astype(bool)
            stripes = np.broadcast_to(stripes, image.shape)
        else:
            stripes = ((np.arange(rows)[:, None] // stripe_period) % 2).astype(bool)
            stripes = np.broadcast_to(stripes, image.shape)
        image[inner & stripes] = fill + _STRIPE_CONTRAST
    return image, boundary


def write_fixture(
    kind: str,
    seed: int,
    png_path,
    truth_path=None,
    rows: int = 1536,
    cols: int = 1024,
) -> Path:
    """Render a fixture to an 8-bit PNG and dump its outline ground truth.

    The truth file lists ``row col`` per garment row after a comment header;
    it is the oracle input for feature tests.
    """
    image, boundary = generate_silhouette(kind, seed, rows, cols)
    png_path = Path(png_path)
    data = np.rint(image * 255.0).astype(np.uint8)
    Image.fromarray(data, mode="L").save(png_path, format="PNG")
    if truth_path is not None:
        lines = [f"# class {kind} seed {seed}"]
        present = np.flatnonzero(boundary >= 0)
        lines.extend(f"{r} {boundary[r]}" for r in present)
        Path(truth_path).write_text("\n".join(lines) + "\n")
    return png_path


def read_truth(path) -> Tuple[np.ndarray, np.ndarray]:
    """Load a ground-truth outline file back as (rows, cols) arrays."""
    rows = []
    cols = []
    for line in Path(path).read_text().splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        r, c = line.split()
        rows.append(int(r))
        cols.append(int(c))
    return np.asarray(rows, dtype=int), np.asarray(cols, dtype=int)
