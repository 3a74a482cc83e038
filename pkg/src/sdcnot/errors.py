"""Exception hierarchy.

The CLI maps these onto exit codes: configuration problems exit with 2,
physics/parameter problems with 3, and integrator non-convergence with 4.
"""

__all__ = [
    "SdcnotError",
    "ConfigError",
    "ParameterError",
    "TruncationError",
    "LabelingError",
    "LabelLookupError",
    "DegeneracyError",
    "PhaseExtractionError",
    "ConvergenceError",
]


class SdcnotError(Exception):
    """Base class for all package errors."""


class ConfigError(SdcnotError):
    """Malformed or inconsistent run configuration."""


class ParameterError(SdcnotError):
    """Physically invalid input parameter."""


class TruncationError(SdcnotError):
    """Requested level count too close to the working basis size."""


class LabelingError(SdcnotError):
    """Dressed state cannot be assigned a bare product label."""


class LabelLookupError(SdcnotError):
    """Bare label not present in a coupled system's label map."""


class DegeneracyError(SdcnotError):
    """Near-degenerate transition makes a formula ill-conditioned."""


class PhaseExtractionError(SdcnotError):
    """Propagator anchors too small for virtual-Z phase extraction."""


class ConvergenceError(SdcnotError):
    """Time-step refinement failed to converge."""
