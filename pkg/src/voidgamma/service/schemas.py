"""Request and response models for the HTTP service."""

from __future__ import annotations

from typing import Literal, Optional

from pydantic import BaseModel, Field, model_validator


class FitRequest(BaseModel):
    """One fitting job.

    Raw inputs ('volumes' or 'diameters') travel in values; binned input
    ('histogram') travels as class_centers plus fractions.  unit_scale
    multiplies lengths, so volumes pick up its cube.
    """

    format: Literal["volumes", "diameters", "histogram"]
    method: Literal["mle", "cv"]
    values: Optional[list[float]] = None
    class_centers: Optional[list[float]] = None
    fractions: Optional[list[float]] = None
    unit_scale: float = Field(default=1.0, gt=0)
    seed: Optional[int] = None
    source: Optional[str] = None


class FitReportDocument(BaseModel):
    """Structured fit report; every run of the same input reproduces every
    field except timestamp."""

    tool: str
    version: str
    timestamp: str
    source: Optional[str]
    format: str
    method: str
    unit_scale: float
    seed: Optional[int]
    n_values: int
    sample_mean: float
    sample_cv: Optional[float]
    log_moment_gap: Optional[float]
    mu: float
    beta: float
    label: str
    entropy: float
    entropy_deficit: float
    log_likelihood: float
    solver_residual: float
    iterations: int


class PdfTableRequest(BaseModel):
    """Uniform-grid density table for one parameter point."""

    mu: float = Field(gt=0)
    beta: float = Field(gt=0)
    variable: Literal["volume", "diameter"] = "volume"
    lo: float = Field(gt=0)
    hi: float = Field(gt=0)
    points: int = Field(ge=2, le=1_000_000)

    @model_validator(mode="after")
    def _ordered_range(self) -> "PdfTableRequest":
        if not self.lo < self.hi:
            raise ValueError("lo must be strictly below hi")
        return self


class PdfTableResponse(BaseModel):
    variable: str
    mu: float
    beta: float
    xs: list[float]
    densities: list[float]


class PointModel(BaseModel):
    mu: float = Field(gt=0)
    beta: float = Field(gt=0)


class TangentModel(BaseModel):
    d_mu: float
    d_beta: float


class EntropyRequest(BaseModel):
    mu: float = Field(gt=0)
    beta: float = Field(gt=0)


class CurvatureRequest(BaseModel):
    beta: float = Field(gt=0)


class ValueResponse(BaseModel):
    value: float


class DistanceRequest(BaseModel):
    p: PointModel
    q: PointModel
    steps: int = Field(default=256, ge=1, le=100_000)
    max_iter: int = Field(default=50, ge=1, le=1000)


class DistanceResponse(BaseModel):
    distance: float


class ShootRequest(BaseModel):
    start: PointModel
    velocity: TangentModel
    t_end: float = Field(default=1.0, gt=0)
    steps: int = Field(default=1000, ge=1, le=1_000_000)


class ShootResponse(BaseModel):
    """Sampled geodesic as parallel arrays, plus its length and energy."""

    ts: list[float]
    mus: list[float]
    betas: list[float]
    d_mus: list[float]
    d_betas: list[float]
    length: float
    energy: float
