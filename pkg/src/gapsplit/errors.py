"""Exception types shared across the package."""


class GapsplitError(Exception):
    """Base class for all errors raised by this package."""


class CsvFormatError(GapsplitError):
    """CSV header is malformed (missing or unexpected columns)."""


class InsufficientDataError(GapsplitError):
    """Too few bars or return pairs to compute the requested quantity."""


class DataError(GapsplitError):
    """A price ratio or value is out of the valid domain; names the date."""


class DegenerateDataError(GapsplitError):
    """A statistic is undefined because a return leg has zero variance."""


class ConfigError(GapsplitError):
    """Invalid or unsatisfiable parameters, manifest, or scenario file."""


class SimulationBlowUpError(GapsplitError):
    """Simulated price went nonpositive; reports the day index."""


class RenderError(GapsplitError):
    """A curve cannot be drawn under the requested axis scale."""
