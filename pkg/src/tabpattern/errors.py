"""Exception hierarchy shared across the package."""


class TabPatternError(Exception):
    """Base class for all package errors."""


class ValidationError(TabPatternError):
    """Invalid argument or precondition violation."""


class SizeError(TabPatternError):
    """Input dimensions incompatible with the requested output shape."""


class ShapeError(TabPatternError):
    """Tensor/matrix shape mismatch."""


class NumericalError(TabPatternError):
    """Non-finite values encountered during computation."""


class ConvergenceError(TabPatternError):
    """An iterative solver exhausted its iteration budget."""


class IngestionError(TabPatternError):
    """A delimited input file could not be parsed."""


class ArtifactError(TabPatternError):
    """Base class for model artifact I/O failures."""


class ArtifactFormatError(ArtifactError):
    """Truncated or malformed artifact file."""


class ArtifactVersionError(ArtifactError):
    """Artifact written by an unsupported format version."""


class ArtifactChecksumError(ArtifactError):
    """Artifact checksum verification failed."""
