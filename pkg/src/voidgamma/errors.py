"""Exception types shared across the fitting and geometry modules."""

from __future__ import annotations


class VoidGammaError(Exception):
    """Base class for all library-specific errors."""


class DegenerateSampleError(VoidGammaError, ValueError):
    """Sample carries no usable dispersion (all values equal, or a single
    histogram class holds all the weight), so no finite shape exists."""


class InconsistentSampleError(VoidGammaError, ValueError):
    """Sample statistics violate an identity every genuine positive sample
    satisfies (log of the mean below the mean of the logs), which points to
    corrupted input rather than an unlucky draw."""


class CVOutOfRangeError(VoidGammaError, ValueError):
    """Requested coefficient of variation lies outside the band attainable
    by the diameter law over the supported shape bracket."""

    def __init__(self, cv: float, attainable_low: float, attainable_high: float):
        self.cv = cv
        self.attainable_low = attainable_low
        self.attainable_high = attainable_high
        super().__init__(
            f"coefficient of variation {cv:.6g} is outside the attainable "
            f"interval [{attainable_low:.6g}, {attainable_high:.6g}]"
        )


class ChartBoundaryError(VoidGammaError, RuntimeError):
    """Numerical path left the open chart mu > 0, beta > 0.  Carries the
    last state that was still inside."""

    def __init__(self, message: str, t: float, state: tuple[float, float, float, float]):
        self.t = t
        self.state = state
        super().__init__(
            f"{message} (last valid sample at t={t:.6g}: "
            f"mu={state[0]:.6g}, beta={state[1]:.6g})"
        )


class GeodesicConvergenceError(VoidGammaError, RuntimeError):
    """Boundary-value solve for a connecting geodesic did not meet the
    endpoint tolerance within the iteration budget."""

    def __init__(self, message: str, endpoint_gap: float, iterations: int):
        self.endpoint_gap = endpoint_gap
        self.iterations = iterations
        super().__init__(message)
