"""Exception types shared across the package."""


class FuzzywearError(Exception):
    """Base class for all package errors."""


class ConfigurationError(FuzzywearError):
    """A fuzzy system or pipeline parameter is inconsistent or unresolvable."""


class ImageLoadError(FuzzywearError):
    """An input image could not be read or decoded."""


class DegenerateImageError(FuzzywearError):
    """An image produced an edge response that cannot be normalized."""


class InsufficientDataError(FuzzywearError):
    """A region of interest did not yield enough points for a feature."""


class ModelFormatError(FuzzywearError):
    """A model file is missing, malformed, or from an unsupported version."""


class TrainingError(FuzzywearError):
    """Training could not produce a usable model."""


class ManifestError(FuzzywearError):
    """A training manifest could not be parsed."""
