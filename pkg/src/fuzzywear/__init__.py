"""Clothing-image classification with a two-stage Mamdani fuzzy pipeline.

Stage one runs a per-pixel edge-detection inference system over intensity
gradients; stage two reduces each garment's left outline to two scalar
features and scores them with a statistics-trained identification FIS.
"""

from .classify import BANDS, Classification, classify_features, classify_image, label_for_score
from .errors import (
    ConfigurationError,
    DegenerateImageError,
    FuzzywearError,
    ImageLoadError,
    InsufficientDataError,
    ManifestError,
    ModelFormatError,
    TrainingError,
)
from .features import (
    CharacteristicCurve,
    FeatureVector,
    Roi,
    default_rois,
    extract_curves,
    extract_features,
    features_from_curves,
    fit_slope,
    leftmost_edge,
    mean_diff,
)
from .fis import (
    Clause,
    CrispOutput,
    FuzzyRule,
    FuzzyVariable,
    GaussianMF,
    MamdaniFis,
    TriangularMF,
    defuzz_centroid,
    membership_from_dict,
)
from .fixtures import CLASSES, generate_silhouette, read_truth, write_fixture
from .image import (
    CANONICAL_COLS,
    CANONICAL_ROWS,
    EdgeFisConfig,
    edge_map,
    edge_response,
    gradients,
    load_grayscale,
    resize_canonical,
    whiten_border,
    write_grayscale_png,
)
from .pipeline import IMAGE_KINDS, PipelineConfig, image_curves, image_features
from .training import (
    LABELS,
    ClassStats,
    LabeledSample,
    TrainedModel,
    TrainingRecord,
    TrainingReport,
    build_identify_fis,
    class_stats,
    load_model,
    model_from_dict,
    model_to_dict,
    save_model,
    train,
)

__version__ = "0.1.0"

__all__ = [
    "BANDS",
    "CANONICAL_COLS",
    "CANONICAL_ROWS",
    "CLASSES",
    "CharacteristicCurve",
    "Classification",
    "ClassStats",
    "Clause",
    "ConfigurationError",
    "CrispOutput",
    "DegenerateImageError",
    "EdgeFisConfig",
    "FeatureVector",
    "FuzzyRule",
    "FuzzyVariable",
    "FuzzywearError",
    "GaussianMF",
    "IMAGE_KINDS",
    "ImageLoadError",
    "InsufficientDataError",
    "LABELS",
    "LabeledSample",
    "MamdaniFis",
    "ManifestError",
    "ModelFormatError",
    "PipelineConfig",
    "Roi",
    "TrainedModel",
    "TrainingError",
    "TrainingRecord",
    "TrainingReport",
    "TriangularMF",
    "build_identify_fis",
    "class_stats",
    "classify_features",
    "classify_image",
    "default_rois",
    "defuzz_centroid",
    "edge_map",
    "edge_response",
    "extract_curves",
    "extract_features",
    "features_from_curves",
    "fit_slope",
    "generate_silhouette",
    "gradients",
    "image_curves",
    "image_features",
    "label_for_score",
    "leftmost_edge",
    "load_grayscale",
    "load_model",
    "mean_diff",
    "membership_from_dict",
    "model_from_dict",
    "model_to_dict",
    "read_truth",
    "resize_canonical",
    "save_model",
    "train",
    "whiten_border",
    "write_fixture",
    "write_grayscale_png",
]
