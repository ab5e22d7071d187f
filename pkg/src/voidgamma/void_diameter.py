"""Diameter law for spherical voids whose volumes follow the gamma law.

With V = pi D^3 / 6, the induced diameter density keeps the volume-law
parameters (mu, beta) but its own moments; the coefficient of variation of
the diameter depends on beta alone, which is what makes the two-stage
moment fit possible: read beta off the sample CV, then scale mu from the
sample mean in closed form.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import specfun
from .errors import CVOutOfRangeError, DegenerateSampleError
from .gamma_model import FitReport, GammaParams, classify_shape, shannon_entropy

__all__ = [
    "DiameterSample",
    "HistogramData",
    "DiameterMoments",
    "volume_from_diameter",
    "diameter_from_volume",
    "diameter_pdf",
    "diameter_log_pdf",
    "diameter_moments",
    "cv_of_beta",
    "beta_from_cv",
    "fit_diameter_data",
    "bernardeau_log_p0_ratio",
]

_SPHERE = math.pi / 6.0
_ONE_THIRD = 1.0 / 3.0
_TWO_THIRDS = 2.0 / 3.0

_CV_TOL = 1e-10
_CV_BETA_LO = 1e-6
_CV_BETA_HI = 1e6
_MAX_BISECT = 200

# Relative sample CV below this is indistinguishable from zero variance.
_DEGENERATE_CV = 1e-12


def volume_from_diameter(diameter):
    """Volume of a sphere with the given diameter."""
    d = np.asarray(diameter, dtype=float)
    out = _SPHERE * d**3
    return float(out) if out.ndim == 0 else out


def diameter_from_volume(volume):
    """Diameter of a sphere with the given volume."""
    v = np.asarray(volume, dtype=float)
    out = (v / _SPHERE) ** _ONE_THIRD
    return float(out) if out.ndim == 0 else out


@dataclass(frozen=True)
class DiameterSample:
    """One-dimensional sample of strictly positive void diameters."""

    values: np.ndarray

    def __post_init__(self) -> None:
        arr = np.asarray(self.values, dtype=float)
        if arr.ndim != 1 or arr.size == 0:
            raise ValueError("sample must be a non-empty one-dimensional array")
        if not np.all(np.isfinite(arr)) or np.any(arr <= 0.0):
            raise ValueError("diameters must be finite and strictly positive")
        object.__setattr__(self, "values", arr)

    @property
    def count(self) -> int:
        return int(self.values.size)


@dataclass(frozen=True)
class HistogramData:
    """Binned diameters: class centres with the fraction of voids in each.

    Fractions are rescaled to sum to 1 on construction; callers who care
    about the raw normalisation should inspect raw_total.
    """

    class_centers: np.ndarray
    fractions: np.ndarray
    raw_total: float = 0.0

    def __post_init__(self) -> None:
        centers = np.asarray(self.class_centers, dtype=float)
        fractions = np.asarray(self.fractions, dtype=float)
        if centers.ndim != 1 or centers.size == 0:
            raise ValueError("class centres must form a non-empty 1-d array")
        if fractions.shape != centers.shape:
            raise ValueError("fractions must match class centres in length")
        if not np.all(np.isfinite(centers)) or np.any(centers <= 0.0):
            raise ValueError("class centres must be finite and strictly positive")
        if np.any(np.diff(centers) == 0.0):
            raise DegenerateSampleError("repeated class centres carry no spread")
        if np.any(np.diff(centers) < 0.0):
            raise ValueError("class centres must be strictly increasing")
        if not np.all(np.isfinite(fractions)) or np.any(fractions < 0.0):
            raise ValueError("fractions must be finite and non-negative")
        total = float(np.sum(fractions))
        if total <= 0.0:
            raise ValueError("fractions must not all be zero")
        object.__setattr__(self, "class_centers", centers)
        object.__setattr__(self, "fractions", fractions / total)
        object.__setattr__(self, "raw_total", total)

    @property
    def count(self) -> int:
        return int(self.class_centers.size)


@dataclass(frozen=True)
class DiameterMoments:
    """Mean, variance and coefficient of variation of the diameter law."""

    mean: float
    variance: float
    cv: float


def diameter_log_pdf(diameter, params: GammaParams):
    """Log-density of the diameter law at strictly positive diameters."""
    d = np.asarray(diameter, dtype=float)
    if not np.all(np.isfinite(d)) or np.any(d <= 0.0):
        raise ValueError("diameter must be finite and strictly positive")
    b, mu = params.beta, params.mu
    rate = _SPHERE * b / mu
    const = math.log(3.0) + b * math.log(rate) - specfun.log_gamma(b)
    out = const + (3.0 * b - 1.0) * np.log(d) - rate * d**3
    return float(out) if out.ndim == 0 else out


def diameter_pdf(diameter, params: GammaParams):
    """Density of the diameter law: the volume law pushed through
    V = pi D^3 / 6, surface-area Jacobian included."""
    out = np.exp(diameter_log_pdf(diameter, params))
    return float(out) if np.ndim(out) == 0 else out


def _log_cv_squared(beta: float) -> float:
    """log(1 + cv^2) of the diameter law as a function of beta alone."""
    return (
        specfun.log_gamma(beta)
        + specfun.log_gamma(beta + _TWO_THIRDS)
        - 2.0 * specfun.log_gamma(beta + _ONE_THIRD)
    )


def cv_of_beta(beta: float) -> float:
    """Coefficient of variation of the diameter law; strictly decreasing."""
    beta = float(beta)
    if not (math.isfinite(beta) and beta > 0.0):
        raise ValueError(f"beta must be a positive finite real, got {beta!r}")
    return math.sqrt(math.expm1(_log_cv_squared(beta)))


def diameter_moments(params: GammaParams) -> DiameterMoments:
    """Closed-form mean, variance and CV of the diameter law."""
    b, mu = params.beta, params.mu
    log_rate_cbrt = (math.log(_SPHERE) + math.log(b) - math.log(mu)) / 3.0
    mean = math.exp(
        specfun.log_gamma(b + _ONE_THIRD) - specfun.log_gamma(b) - log_rate_cbrt
    )
    cv = math.sqrt(math.expm1(_log_cv_squared(b)))
    variance = (cv * mean) ** 2
    return DiameterMoments(mean=mean, variance=variance, cv=cv)


def _attainable_cv_interval() -> tuple[float, float]:
    return cv_of_beta(_CV_BETA_HI), cv_of_beta(_CV_BETA_LO)


def _solve_beta_from_cv(cv: float) -> tuple[float, float, int]:
    cv = float(cv)
    if not (math.isfinite(cv) and cv > 0.0):
        raise ValueError(f"coefficient of variation must be positive, got {cv!r}")
    low, high = _attainable_cv_interval()
    if cv <= low or cv >= high:
        raise CVOutOfRangeError(cv, low, high)
    # Bisection in log(beta); cv_of_beta falls as beta grows.
    la, lb = math.log(_CV_BETA_LO), math.log(_CV_BETA_HI)
    best_beta = math.exp(0.5 * (la + lb))
    best_residual = math.inf
    iterations = 0
    for iterations in range(1, _MAX_BISECT + 1):
        mid = 0.5 * (la + lb)
        beta = math.exp(mid)
        value = cv_of_beta(beta) - cv
        residual = abs(value)
        if residual < best_residual:
            best_beta, best_residual = beta, residual
        if residual <= _CV_TOL or (lb - la) < 1e-15:
            break
        if value > 0.0:
            la = mid
        else:
            lb = mid
    return best_beta, best_residual, iterations


def beta_from_cv(cv: float) -> float:
    """Invert cv_of_beta.  Raises CVOutOfRangeError when no shape in
    [1e-6, 1e6] reproduces the requested CV."""
    beta, _, _ = _solve_beta_from_cv(cv)
    return beta


def _sample_moments(data) -> tuple[float, float, int]:
    """Weighted mean and variance plus the observation count analogue."""
    if isinstance(data, DiameterSample):
        values = data.values
        if values.size < 2:
            raise ValueError("need at least two diameters to fit a shape")
        mean = float(np.mean(values))
        variance = float(np.var(values))
        return mean, variance, values.size
    if isinstance(data, HistogramData):
        weights, centers = data.fractions, data.class_centers
        if np.count_nonzero(weights) < 2:
            raise DegenerateSampleError(
                "histogram concentrates all weight in one class"
            )
        mean = float(np.dot(weights, centers))
        variance = float(np.dot(weights, (centers - mean) ** 2))
        return mean, variance, data.count
    raise TypeError(f"expected DiameterSample or HistogramData, got {type(data)!r}")


def fit_diameter_data(data) -> FitReport:
    """Two-stage moment fit of the diameter law.

    The sample CV pins down beta (CV depends on beta only), then mu follows
    from the sample mean in closed form.  Reported parameters are those of
    the underlying volume law.
    """
    mean, variance, _ = _sample_moments(data)
    cv = math.sqrt(variance) / mean
    if cv <= _DEGENERATE_CV:
        raise DegenerateSampleError("sample variance is numerically zero")
    beta, residual, iterations = _solve_beta_from_cv(cv)
    log_mu = (
        math.log(_SPHERE)
        + math.log(beta)
        + 3.0
        * (math.log(mean) + specfun.log_gamma(beta) - specfun.log_gamma(beta + _ONE_THIRD))
    )
    params = GammaParams(mu=math.exp(log_mu), beta=beta)
    if isinstance(data, DiameterSample):
        loglik = float(np.sum(diameter_log_pdf(data.values, params)))
    else:
        loglik = float(
            np.dot(data.fractions, diameter_log_pdf(data.class_centers, params))
        )
    entropy = shannon_entropy(params)
    deficit = shannon_entropy(GammaParams(mu=params.mu, beta=1.0)) - entropy
    return FitReport(
        params=params,
        label=classify_shape(beta),
        entropy=entropy,
        entropy_deficit=max(0.0, deficit),
        log_likelihood=loglik,
        solver_residual=residual,
        iterations=iterations,
    )


def bernardeau_log_p0_ratio(n_v: float, sigma_squared: float) -> float:
    """Gaussian-field comparator for the void probability: the scaling
    log(P0)/(n V) = -(n V sigma^2)^(-3/7), valid for large n V sigma^2."""
    n_v = float(n_v)
    sigma_squared = float(sigma_squared)
    if not (math.isfinite(n_v) and n_v > 0.0):
        raise ValueError("n V must be a positive finite real")
    if not (math.isfinite(sigma_squared) and sigma_squared > 0.0):
        raise ValueError("sigma^2 must be a positive finite real")
    return -((n_v * sigma_squared) ** (-3.0 / 7.0))
