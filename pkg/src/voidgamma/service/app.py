"""FastAPI service exposing the fitting and geometry library.

Domain failures map to HTTP 400 with a machine-readable detail payload
{"code": ..., "message": ...}; clients key their exit statuses off code.
"""

from __future__ import annotations

import datetime
import math

import numpy as np
from fastapi import FastAPI, HTTPException

from .. import __version__
from ..errors import (
    ChartBoundaryError,
    CVOutOfRangeError,
    DegenerateSampleError,
    GeodesicConvergenceError,
    InconsistentSampleError,
)
from ..gamma_model import GammaParams, VolumeSample, gamma_pdf, mle_fit, shannon_entropy
from ..info_geometry import (
    ManifoldPoint,
    TangentVector,
    chart_line,
    curve_length,
    gaussian_curvature,
    geodesic_distance,
    geodesic_shoot,
)
from ..void_diameter import DiameterSample, HistogramData, diameter_pdf, fit_diameter_data
from .schemas import (
    CurvatureRequest,
    DistanceRequest,
    DistanceResponse,
    EntropyRequest,
    FitReportDocument,
    FitRequest,
    PdfTableRequest,
    PdfTableResponse,
    ShootRequest,
    ShootResponse,
    ValueResponse,
)

TOOL_NAME = "voidgamma"


def _bad_request(code: str, message: str, **extra) -> HTTPException:
    detail = {"code": code, "message": message}
    detail.update(extra)
    return HTTPException(status_code=400, detail=detail)


def _utc_now() -> str:
    return datetime.datetime.now(datetime.timezone.utc).isoformat(timespec="seconds")


def _run_fit(req: FitRequest) -> FitReportDocument:
    scale = req.unit_scale
    if req.format == "histogram":
        if req.method != "cv":
            raise _bad_request(
                "bad_request", "histogram input fits with method 'cv'"
            )
        if not req.class_centers or req.fractions is None:
            raise _bad_request(
                "bad_request", "histogram input needs class_centers and fractions"
            )
        data = HistogramData(
            class_centers=np.asarray(req.class_centers, dtype=float) * scale,
            fractions=req.fractions,
        )
        report = fit_diameter_data(data)
        weights, centers = data.fractions, data.class_centers
        mean = float(np.dot(weights, centers))
        var = float(np.dot(weights, (centers - mean) ** 2))
        n_values = data.count
        sample_cv: float | None = math.sqrt(var) / mean
        gap: float | None = None
    elif req.format == "diameters":
        if req.method != "cv":
            raise _bad_request(
                "bad_request", "raw diameters fit with method 'cv'"
            )
        if not req.values:
            raise _bad_request("bad_request", "raw input needs values")
        arr = np.asarray(req.values, dtype=float) * scale
        data = DiameterSample(values=arr)
        report = fit_diameter_data(data)
        mean = float(np.mean(arr))
        n_values = arr.size
        sample_cv = float(np.std(arr)) / mean
        gap = None
    else:
        if req.method != "mle":
            raise _bad_request("bad_request", "raw volumes fit with method 'mle'")
        if not req.values:
            raise _bad_request("bad_request", "raw input needs values")
        arr = np.asarray(req.values, dtype=float) * scale**3
        sample = VolumeSample(values=arr)
        report = mle_fit(sample)
        mean = float(np.mean(arr))
        n_values = arr.size
        sample_cv = float(np.std(arr)) / mean
        gap = math.log(mean) - float(np.mean(np.log(arr)))
    return FitReportDocument(
        tool=TOOL_NAME,
        version=__version__,
        timestamp=_utc_now(),
        source=req.source,
        format=req.format,
        method=req.method,
        unit_scale=req.unit_scale,
        seed=req.seed,
        n_values=int(n_values),
        sample_mean=mean,
        sample_cv=sample_cv,
        log_moment_gap=gap,
        mu=report.params.mu,
        beta=report.params.beta,
        label=report.label,
        entropy=report.entropy,
        entropy_deficit=report.entropy_deficit,
        log_likelihood=report.log_likelihood,
        solver_residual=report.solver_residual,
        iterations=report.iterations,
    )


def create_app() -> FastAPI:
    app = FastAPI(title=TOOL_NAME, version=__version__)

    @app.get("/healthz")
    def healthz() -> dict:
        return {"status": "ok", "tool": TOOL_NAME, "version": __version__}

    @app.post("/fit", response_model=FitReportDocument)
    def fit(req: FitRequest) -> FitReportDocument:
        try:
            return _run_fit(req)
        except DegenerateSampleError as exc:
            raise _bad_request("degenerate_data", str(exc)) from None
        except InconsistentSampleError as exc:
            raise _bad_request("inconsistent_data", str(exc)) from None
        except CVOutOfRangeError as exc:
            raise _bad_request(
                "cv_out_of_range",
                str(exc),
                attainable_low=exc.attainable_low,
                attainable_high=exc.attainable_high,
            ) from None
        except ValueError as exc:
            raise _bad_request("invalid_data", str(exc)) from None

    @app.post("/pdf-table", response_model=PdfTableResponse)
    def pdf_table(req: PdfTableRequest) -> PdfTableResponse:
        params = GammaParams(mu=req.mu, beta=req.beta)
        xs = np.linspace(req.lo, req.hi, req.points)
        try:
            if req.variable == "volume":
                densities = gamma_pdf(xs, params)
            else:
                densities = diameter_pdf(xs, params)
        except ValueError as exc:
            raise _bad_request("invalid_data", str(exc)) from None
        if not np.all(np.isfinite(densities)):
            raise _bad_request(
                "invalid_data",
                "density overflows double precision on this grid",
            )
        return PdfTableResponse(
            variable=req.variable,
            mu=req.mu,
            beta=req.beta,
            xs=xs.tolist(),
            densities=np.asarray(densities).tolist(),
        )

    @app.post("/geometry/entropy", response_model=ValueResponse)
    def entropy(req: EntropyRequest) -> ValueResponse:
        return ValueResponse(value=shannon_entropy(GammaParams(mu=req.mu, beta=req.beta)))

    @app.post("/geometry/curvature", response_model=ValueResponse)
    def curvature(req: CurvatureRequest) -> ValueResponse:
        return ValueResponse(value=gaussian_curvature(req.beta))

    @app.post("/geometry/distance", response_model=DistanceResponse)
    def distance(req: DistanceRequest) -> DistanceResponse:
        p = ManifoldPoint(mu=req.p.mu, beta=req.p.beta)
        q = ManifoldPoint(mu=req.q.mu, beta=req.q.beta)
        try:
            value = geodesic_distance(p, q, steps=req.steps, max_iter=req.max_iter)
        except GeodesicConvergenceError as exc:
            upper = curve_length(chart_line(p, q))
            # the gap is inf when the first shot already left the chart;
            # strict JSON cannot carry that, so report it as null
            gap = exc.endpoint_gap if math.isfinite(exc.endpoint_gap) else None
            raise _bad_request(
                "no_convergence",
                f"{exc}; coordinate straight line gives an upper bound",
                upper_bound=upper,
                endpoint_gap=gap,
            ) from None
        except ChartBoundaryError as exc:
            raise _bad_request("chart_boundary", str(exc)) from None
        return DistanceResponse(distance=value)

    @app.post("/geometry/shoot", response_model=ShootResponse)
    def shoot(req: ShootRequest) -> ShootResponse:
        start = ManifoldPoint(mu=req.start.mu, beta=req.start.beta)
        velocity = TangentVector(d_mu=req.velocity.d_mu, d_beta=req.velocity.d_beta)
        try:
            path = geodesic_shoot(start, velocity, req.t_end, req.steps)
        except ChartBoundaryError as exc:
            raise _bad_request(
                "chart_boundary", str(exc), t=exc.t, last_state=list(exc.state)
            ) from None
        return ShootResponse(
            ts=path.times.tolist(),
            mus=[pt.mu for pt in path.points],
            betas=[pt.beta for pt in path.points],
            d_mus=[v.d_mu for v in path.velocities],
            d_betas=[v.d_beta for v in path.velocities],
            length=path.length,
            energy=path.energy,
        )

    return app


app = create_app()


if __name__ == "__main__":
    import uvicorn

    uvicorn.run(app, host="127.0.0.1", port=8000)
