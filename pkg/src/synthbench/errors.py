"""Exception hierarchy shared across the package.

CLI exit-code mapping: any SynthBenchError is a user-facing validation or
input problem (exit 2); anything else is a runtime failure (exit 1).
"""


class SynthBenchError(Exception):
    """Base class for all errors raised by this package."""


class ConfigError(SynthBenchError):
    """Invalid configuration, grid axis, or precondition violation."""


class CensusError(ConfigError):
    """Component census that cannot be assigned (infeasible counts)."""


class DegenerateSeriesError(SynthBenchError):
    """A series with (near-)zero variance where variation is required."""


class IntegrityError(SynthBenchError):
    """Checksum mismatch, truncated file, or malformed on-disk data."""


class FormatVersionError(IntegrityError):
    """On-disk format version is not supported by this build."""


class NotFittedError(SynthBenchError):
    """Model used before a successful fit."""
