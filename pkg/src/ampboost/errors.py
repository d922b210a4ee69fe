"""Exception types shared across the package."""


class AmpboostError(Exception):
    """Base class for all domain errors."""


class InvalidProblemError(AmpboostError, ValueError):
    """Problem construction violated an invariant (bad edges, sizes, kinds)."""


class InvalidAssignmentError(AmpboostError, ValueError):
    """Assignment length or digit radix does not match the problem."""


class CapacityError(AmpboostError, MemoryError):
    """Requested enumeration/state size exceeds the configured cap."""


class DimensionError(AmpboostError, ValueError):
    """State length does not match the solution space."""


class DegenerateSpectrumError(AmpboostError, ValueError):
    """Constant cost function: c_min == c_max, scaling undefined."""


class EstimationError(AmpboostError, ValueError):
    """Sampling-based estimation failed (zero variance, model violation)."""


class GaussianModelViolation(EstimationError):
    """Sample spread too wide for the unit-height gaussian model (alpha <= 1)."""


class FitError(AmpboostError, ValueError):
    """Histogram/regression fit is undefined for the given data."""


class NotFoundError(AmpboostError, ValueError):
    """Requested target (cost value) is absent from the space."""


class PredictionFailure(AmpboostError, ValueError):
    """Fit inversion produced no usable scale value in the window."""


class OutOfReachError(AmpboostError, ValueError):
    """Subset-sum target lies outside the boostable band near the extrema."""


class CircuitError(AmpboostError, ValueError):
    """Circuit construction or analysis error (non-diagonal gates, caps)."""


class BudgetError(AmpboostError, ValueError):
    """Iteration/measurement budget too small for the requested run."""
