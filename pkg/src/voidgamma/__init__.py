"""Gamma-family modelling of cosmic void sizes.

Core pieces: the volume law and its maximum-likelihood fit (gamma_model),
the induced diameter law with the two-stage CV/mean fit (void_diameter),
the Fisher-metric geometry of the parameter surface (info_geometry), the
underlying special functions (specfun), an HTTP service (service) and a
command-line client (cli).
"""

__version__ = "0.1.0"

from .errors import (
    ChartBoundaryError,
    CVOutOfRangeError,
    DegenerateSampleError,
    GeodesicConvergenceError,
    InconsistentSampleError,
    VoidGammaError,
)
from .gamma_model import (
    FitReport,
    GammaParams,
    PoissonModel,
    VolumeSample,
    classify_shape,
    gamma_pdf,
    log_likelihood,
    mle_fit,
    poisson_void_probability,
    sample_gamma,
    shannon_entropy,
)
from .info_geometry import (
    CurveSpec,
    GeodesicPath,
    ManifoldPoint,
    TangentVector,
    christoffel,
    curve_energy,
    curve_length,
    gaussian_curvature,
    geodesic_distance,
    geodesic_shoot,
    metric_tensor,
    tangent_norm,
)
from .void_diameter import (
    DiameterMoments,
    DiameterSample,
    HistogramData,
    bernardeau_log_p0_ratio,
    beta_from_cv,
    cv_of_beta,
    diameter_moments,
    diameter_pdf,
    fit_diameter_data,
)

__all__ = [
    "__version__",
    "VoidGammaError",
    "DegenerateSampleError",
    "InconsistentSampleError",
    "CVOutOfRangeError",
    "ChartBoundaryError",
    "GeodesicConvergenceError",
    "GammaParams",
    "PoissonModel",
    "VolumeSample",
    "FitReport",
    "classify_shape",
    "gamma_pdf",
    "poisson_void_probability",
    "shannon_entropy",
    "log_likelihood",
    "mle_fit",
    "sample_gamma",
    "DiameterSample",
    "HistogramData",
    "DiameterMoments",
    "diameter_pdf",
    "diameter_moments",
    "cv_of_beta",
    "beta_from_cv",
    "fit_diameter_data",
    "bernardeau_log_p0_ratio",
    "ManifoldPoint",
    "TangentVector",
    "CurveSpec",
    "GeodesicPath",
    "metric_tensor",
    "tangent_norm",
    "curve_length",
    "curve_energy",
    "christoffel",
    "geodesic_shoot",
    "geodesic_distance",
    "gaussian_curvature",
]
