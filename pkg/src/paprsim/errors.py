"""Exception types used across the package."""


class PaprSimError(Exception):
    """Base class for all package errors."""


class ConfigError(PaprSimError):
    """A parameter, design spec, or config file violates a constraint."""


class ShapeError(PaprSimError):
    """An input array has the wrong length, shape, or content."""


class DesignError(PaprSimError):
    """A filter design failed to converge."""


class MetricError(PaprSimError):
    """A metric is undefined or queried outside its achievable range."""


class ExperimentError(PaprSimError):
    """A sub-run of an experiment failed; carries the grid-cell context."""
