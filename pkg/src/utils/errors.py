"""Exception hierarchy shared by every thermsal module.

ValidationError subclasses map to CLI exit status 1, IoError to exit status 2.
"""

from __future__ import annotations


class ThermsalError(Exception):
    """Base class for all thermsal errors."""


class ValidationError(ThermsalError, ValueError):
    """Input violates a documented precondition."""


class FormatError(ValidationError):
    """Malformed file contents (image, annotation, detection or curve file)."""


class DimensionError(ValidationError):
    """Requested or supplied dimensions are out of range."""


class DimensionMismatch(ValidationError):
    """Two rasters that must share a shape do not."""


class EmptyGroundTruth(ValidationError):
    """An evaluation needs at least one kept ground-truth box."""


class KeyMismatch(ValidationError):
    """Prediction and ground-truth key sets differ."""


class EmptyCurve(ValidationError):
    """A curve to plot has no operating points."""


class UnknownFrame(ValidationError):
    """A frame id is not present in the dataset index."""


class IoError(ThermsalError, OSError):
    """A file could not be read or written."""
