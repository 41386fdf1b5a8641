"""Per-class feature statistics, the classification FIS, and model persistence.

Training runs the image pipeline over labeled samples, summarizes each
class's slope (and, for dress and pants, mean-difference) distribution as a
Gaussian, and wires the four-rule identification system around those terms.
The persisted model carries the complete pipeline configuration so
classification needs no external state.
"""

from __future__ import annotations

import json
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from .errors import FuzzywearError, ModelFormatError, TrainingError
from .features import FeatureVector
from .fis import Clause, FuzzyRule, FuzzyVariable, GaussianMF, MamdaniFis, TriangularMF
from .pipeline import IMAGE_KINDS, PipelineConfig, image_features

log = logging.getLogger(__name__)

LABELS = ("shirt", "dress", "pants")
FORMAT_VERSION = 1
SIGMA_FLOOR = 1e-6

M1_UNIVERSE = (-100.0, 100.0)
MEANVAL_UNIVERSE = (-1000.0, 1000.0)
ITEM_UNIVERSE = (0.0, 1.5)
OUTPUT_BANDS = {
    "shirt": (0.0, 0.25, 0.5),
    "dress": (0.5, 0.75, 1.0),
    "pants": (1.0, 1.25, 1.5),
}
# Pinned subtraction order behind mean_val; persisted so a loaded model can
# never silently disagree with the feature extractor that feeds it.
MEANVAL_ORDER = "roi1_minus_roi2"


@dataclass
class LabeledSample:
    """One training observation: extracted features plus the known label."""

    label: str
    features: FeatureVector
    source: str
    image_kind: str


@dataclass
class ClassStats:
    """Gaussian term parameters: slope for every class, mean difference for
    dress and pants (shirts resolve on slope alone)."""

    m1_mean: Dict[str, float]
    m1_std: Dict[str, float]
    meanval_mean: Dict[str, float]
    meanval_std: Dict[str, float]


def class_stats(samples: Sequence[LabeledSample]) -> ClassStats:
    """Sample mean and (n-1) standard deviation of the features per class.

    The mean-difference spread is |mean| per class so the sign separation of
    dresses and pants carries into the memberships. Degenerate spreads are
    floored at 1e-6 and logged.
    """
    groups: Dict[str, List[FeatureVector]] = {label: [] for label in LABELS}
    for sample in samples:
        if sample.label not in groups:
            raise TrainingError(f"unknown label {sample.label!r} for {sample.source}")
        groups[sample.label].append(sample.features)
    for label in LABELS:
        count = len(groups[label])
        if count < 2:
            raise TrainingError(f"class {label} has {count} sample(s), need >= 2")

    m1_mean: Dict[str, float] = {}
    m1_std: Dict[str, float] = {}
    for label in LABELS:
        values = np.array([f.m1 for f in groups[label]], dtype=float)
        m1_mean[label] = float(values.mean())
        spread = float(values.std(ddof=1))
        if spread < SIGMA_FLOOR:
            log.warning(
                "class %s m1 spread %.3g degenerate; floored to %g",
                label,
                spread,
                SIGMA_FLOOR,
            )
            spread = SIGMA_FLOOR
        m1_std[label] = spread

    meanval_mean: Dict[str, float] = {}
    meanval_std: Dict[str, float] = {}
    for label in ("dress", "pants"):
        values = np.array([f.mean_val for f in groups[label]], dtype=float)
        center = float(values.mean())
        spread = abs(center)
        if spread < SIGMA_FLOOR:
            log.warning(
                "class %s mean_val center %.3g too close to zero; spread floored to %g",
                label,
                center,
                SIGMA_FLOOR,
            )
            spread = SIGMA_FLOOR
        meanval_mean[label] = center
        meanval_std[label] = spread
    return ClassStats(m1_mean, m1_std, meanval_mean, meanval_std)


def build_identify_fis(stats: ClassStats, resolution: int = 1001) -> MamdaniFis:
    """The four-rule classifier over the slope and mean-difference features.

    Slope separates shirts from the rest; the mean difference splits dresses
    (positive) from pants (negative), with a recovery rule for shirt-sloped
    items that sit dress-wide below.
    """
    m1 = FuzzyVariable(
        "m1",
        M1_UNIVERSE,
        {label: GaussianMF(stats.m1_mean[label], stats.m1_std[label]) for label in LABELS},
    )
    mean_val = FuzzyVariable(
        "mean_val",
        MEANVAL_UNIVERSE,
        {
            label: GaussianMF(stats.meanval_mean[label], stats.meanval_std[label])
            for label in ("dress", "pants")
        },
    )
    item = FuzzyVariable(
        "item",
        ITEM_UNIVERSE,
        {label: TriangularMF(*OUTPUT_BANDS[label]) for label in LABELS},
    )
    rules = (
        FuzzyRule((Clause("m1", "shirt"),), "shirt"),
        FuzzyRule(
            (Clause("m1", "shirt", negated=True), Clause("mean_val", "dress")), "dress"
        ),
        FuzzyRule(
            (Clause("m1", "shirt", negated=True), Clause("mean_val", "pants")), "pants"
        ),
        FuzzyRule((Clause("m1", "shirt"), Clause("mean_val", "dress")), "dress"),
    )
    return MamdaniFis((m1, mean_val), item, rules, resolution)


@dataclass
class TrainedModel:
    """Everything classification needs: statistics, the identify FIS, and the
    pipeline configuration the features were extracted under."""

    stats: ClassStats
    identify_fis: MamdaniFis
    pipeline: PipelineConfig
    format_version: int = FORMAT_VERSION
    meanval_order: str = MEANVAL_ORDER


def model_to_dict(model: TrainedModel) -> dict:
    pipeline = model.pipeline
    return {
        "format_version": model.format_version,
        "meanval_order": model.meanval_order,
        "pipeline": {
            "sigma_template": pipeline.sigma_template,
            "sigma_photo": pipeline.sigma_photo,
            "white_triangle": list(pipeline.white_triangle),
            "black_triangle": list(pipeline.black_triangle),
            "roi_rows": list(pipeline.roi_rows),
            "roi_half_width": pipeline.roi_half_width,
            "white_threshold": pipeline.white_threshold,
            "border_margin": pipeline.border_margin,
            "resolution": pipeline.resolution,
        },
        "stats": {
            "m1_mean": dict(model.stats.m1_mean),
            "m1_std": dict(model.stats.m1_std),
            "meanval_mean": dict(model.stats.meanval_mean),
            "meanval_std": dict(model.stats.meanval_std),
        },
        "identify_fis": model.identify_fis.to_dict(),
    }


def _require(mapping, key, context):
    try:
        return mapping[key]
    except (KeyError, TypeError):
        raise ModelFormatError(f"model file is missing {context} field {key!r}") from None


def model_from_dict(data: dict) -> TrainedModel:
    """Validate and rebuild a model from its serialized form."""
    version = data.get("format_version")
    if version != FORMAT_VERSION:
        raise ModelFormatError(
            f"unsupported model format version {version!r}, expected {FORMAT_VERSION}"
        )
    order = data.get("meanval_order")
    if order != MEANVAL_ORDER:
        raise ModelFormatError(
            f"unsupported mean_val subtraction order {order!r}, expected {MEANVAL_ORDER!r}"
        )
    raw_pipeline = _require(data, "pipeline", "top-level")
    try:
        pipeline = PipelineConfig(
            sigma_template=float(_require(raw_pipeline, "sigma_template", "pipeline")),
            sigma_photo=float(_require(raw_pipeline, "sigma_photo", "pipeline")),
            white_triangle=tuple(_require(raw_pipeline, "white_triangle", "pipeline")),
            black_triangle=tuple(_require(raw_pipeline, "black_triangle", "pipeline")),
            roi_rows=tuple(_require(raw_pipeline, "roi_rows", "pipeline")),
            roi_half_width=int(_require(raw_pipeline, "roi_half_width", "pipeline")),
            white_threshold=float(_require(raw_pipeline, "white_threshold", "pipeline")),
            border_margin=int(_require(raw_pipeline, "border_margin", "pipeline")),
            resolution=int(_require(raw_pipeline, "resolution", "pipeline")),
        )
    except (TypeError, ValueError) as exc:
        raise ModelFormatError(f"invalid pipeline configuration: {exc}") from exc
    raw_stats = _require(data, "stats", "top-level")
    stats = ClassStats(
        m1_mean={k: float(v) for k, v in _require(raw_stats, "m1_mean", "stats").items()},
        m1_std={k: float(v) for k, v in _require(raw_stats, "m1_std", "stats").items()},
        meanval_mean={
            k: float(v) for k, v in _require(raw_stats, "meanval_mean", "stats").items()
        },
        meanval_std={
            k: float(v) for k, v in _require(raw_stats, "meanval_std", "stats").items()
        },
    )
    for label in LABELS:
        if label not in stats.m1_mean or label not in stats.m1_std:
            raise ModelFormatError(f"stats are missing class {label!r}")
    for label in ("dress", "pants"):
        if label not in stats.meanval_mean or label not in stats.meanval_std:
            raise ModelFormatError(f"mean_val stats are missing class {label!r}")
    try:
        fis = MamdaniFis.from_dict(_require(data, "identify_fis", "top-level"))
    except FuzzywearError as exc:
        raise ModelFormatError(f"invalid identify FIS: {exc}") from exc
    universes = {v.name: v.universe for v in fis.inputs}
    if universes.get("m1") != M1_UNIVERSE:
        raise ModelFormatError(
            f"invalid m1 universe {universes.get('m1')}, expected {M1_UNIVERSE}"
        )
    if universes.get("mean_val") != MEANVAL_UNIVERSE:
        raise ModelFormatError(
            f"invalid mean_val universe {universes.get('mean_val')}, "
            f"expected {MEANVAL_UNIVERSE}"
        )
    if fis.output.universe != ITEM_UNIVERSE:
        raise ModelFormatError(
            f"invalid output universe {fis.output.universe}, expected {ITEM_UNIVERSE}"
        )
    return TrainedModel(stats, fis, pipeline, int(version), order)


def save_model(model: TrainedModel, path) -> None:
    """Write the model as an indented, versioned JSON document."""
    Path(path).write_text(json.dumps(model_to_dict(model), indent=2) + "\n")


def load_model(path) -> TrainedModel:
    """Read a model file back, re-validating every invariant."""
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ModelFormatError(f"cannot read model file {path}: {exc}") from exc
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ModelFormatError(f"model file {path} is not valid JSON: {exc}") from exc
    if not isinstance(data, dict):
        raise ModelFormatError(f"model file {path} must hold a JSON object")
    return model_from_dict(data)


@dataclass
class TrainingRecord:
    """Per-image report row emitted by training."""

    source: str
    label: str
    image_kind: str
    m1: float
    mean_val: float
    valid_rows: Tuple[int, int, int]


@dataclass
class TrainingReport:
    """All per-image outcomes of one training run."""

    records: List[TrainingRecord] = field(default_factory=list)
    failures: List[Tuple[str, str]] = field(default_factory=list)


def train(
    images: Sequence[Tuple[str, str, str]],
    config: Optional[PipelineConfig] = None,
    threads: int = 1,
) -> Tuple[TrainedModel, TrainingReport]:
    """Fit a model from (path, label, image_kind) triples.

    Every image runs the full pipeline with the sigma matching its kind.
    Per-image failures are collected and reported; training aborts only when
    a class ends up with fewer than two usable samples.
    """
    config = config or PipelineConfig()
    entries = list(images)
    for path, label, kind in entries:
        if label not in LABELS:
            raise TrainingError(f"unknown label {label!r} for {path}")
        if kind not in IMAGE_KINDS:
            raise TrainingError(f"unknown image kind {kind!r} for {path}")

    def run(entry):
        path, label, kind = entry
        return image_features(path, kind, config)

    outcomes: List = [None] * len(entries)
    if threads and threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            futures = [pool.submit(run, entry) for entry in entries]
            for i, future in enumerate(futures):
                try:
                    outcomes[i] = future.result()
                except FuzzywearError as exc:
                    outcomes[i] = exc
    else:
        for i, entry in enumerate(entries):
            try:
                outcomes[i] = run(entry)
            except FuzzywearError as exc:
                outcomes[i] = exc

    report = TrainingReport()
    samples: List[LabeledSample] = []
    for (path, label, kind), outcome in zip(entries, outcomes):
        if isinstance(outcome, FuzzywearError):
            report.failures.append((str(path), str(outcome)))
            continue
        samples.append(LabeledSample(label, outcome, str(path), kind))
        report.records.append(
            TrainingRecord(str(path), label, kind, outcome.m1, outcome.mean_val, outcome.valid_rows)
        )

    try:
        stats = class_stats(samples)
    except TrainingError as exc:
        if report.failures:
            failed = "; ".join(f"{src}: {msg}" for src, msg in report.failures)
            raise TrainingError(f"{exc} (failed images: {failed})") from exc
        raise
    fis = build_identify_fis(stats, config.resolution)
    return TrainedModel(stats, fis, config), report
