"""Exception types raised across the package."""


class DriftTrapError(Exception):
    """Base class for all errors raised by drifttrap."""


class ConfigurationError(DriftTrapError, ValueError):
    """A scenario, drift, or policy description is invalid."""


class DataError(DriftTrapError, ValueError):
    """Input data are unusable (non-finite values, unparseable cells, missing columns)."""


class EstimatorNotReadyError(DriftTrapError, RuntimeError):
    """An estimate was requested before the estimator absorbed any data."""


class InsufficientDataError(DriftTrapError, ValueError):
    """Too few observations for the requested statistic."""


class DegenerateResultError(DriftTrapError, ValueError):
    """The statistic is undefined for this input (e.g. trend of a constant sequence)."""
