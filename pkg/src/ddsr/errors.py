"""Exception types raised by the ddsr package."""


class DdsrError(Exception):
    """Base class for all ddsr errors."""


class DimensionError(DdsrError, ValueError):
    """Image, kernel, or matrix dimensions are incompatible with an operation."""


class CoverageError(DdsrError, ValueError):
    """A pixel is covered by no patch during reassembly."""


class ConfigurationError(DdsrError, ValueError):
    """A configuration value is invalid or inconsistent with the data."""


class ImageIOError(DdsrError, IOError):
    """An image file could not be read or written."""


class ModelFormatError(DdsrError, IOError):
    """A model file is corrupt, truncated, or has an unsupported version."""
