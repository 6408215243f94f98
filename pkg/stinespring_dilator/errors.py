"""Custom exceptions for constructions, verifications and file parsing."""
from __future__ import annotations

from typing import Optional


class DilationError(Exception):
    """Base class for every error raised by the package."""


class MathematicalFailure(DilationError):
    """Raised when the input is well-formed but fails a mathematical requirement."""


class NotHermitian(DilationError):
    """Raised when a matrix expected to be Hermitian is not (within tolerance)."""


class NonSquare(DilationError):
    """Raised when a square matrix is required."""


class ShapeMismatch(DilationError):
    """Raised when matrix shapes are incompatible."""


class NonFiniteEntries(DilationError):
    """Raised when a matrix contains NaN or Inf."""


class ModuleMismatch(DilationError):
    """Raised when module elements or maps live over different modules."""


class InvalidRank(DilationError):
    """Raised when a requested Kraus rank cannot exist."""


class DimensionTooSmall(DilationError):
    """Raised when a requested dimension cannot host the required isometry."""


class ConfigError(DilationError):
    """Raised when the YAML configuration file cannot be read or has the wrong structure."""


class NotCompletelyPositive(MathematicalFailure):
    """Raised when a construction needs a completely positive map."""


class NotAPhiMap(MathematicalFailure):
    """Raised when a map fails the φ-map identity or its well-definedness certificate."""


class NotMinimal(MathematicalFailure):
    """Raised when a representation does not span its dilation space."""


class NotEquivalent(MathematicalFailure):
    """Raised when two representations cannot be intertwined by unitaries."""


class IllConditioned(MathematicalFailure):
    """Raised when a rank decision sits on a spectral gap below tolerance."""


class InstanceFormatError(DilationError):
    """Raised when an instance or representation file is malformed.

    ``field`` names the offending entry (e.g. ``"Phi[3]"``) when known.
    """

    def __init__(self, message: str, field: Optional[str] = None):
        self.field = field
        super().__init__(f"{field}: {message}" if field else message)
