"""Exceptions shared across the package."""


class CadnashError(Exception):
    """Base class for package errors."""


class DimensionMismatchError(CadnashError):
    """Point/box dimension does not match the polynomial's variable count."""


class ParseError(CadnashError):
    """Malformed input file or literal."""


class NoCandidateError(CadnashError):
    """All root candidates were eliminated at the given precision."""


class EmbeddingBoundError(CadnashError):
    """A coefficient exceeded its declared magnitude bound during embedding."""
