"""Riemannian machinery on the (mu, beta) half-plane of the volume law.

The metric is the Fisher information of the gamma family in mean/shape
coordinates, which is diagonal: g = diag(beta/mu^2, trigamma(beta) - 1/beta).
All routines work in the open chart mu > 0, beta > 0.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np
from scipy.integrate import quad

from . import specfun
from .errors import ChartBoundaryError, GeodesicConvergenceError

__all__ = [
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
    "chart_line",
]

# Paths that dip below this in either coordinate have left the chart.
_CHART_FLOOR = 1e-9

_QUAD_OPTS = {"epsabs": 1e-10, "epsrel": 1e-10, "limit": 200}


@dataclass(frozen=True)
class ManifoldPoint:
    """Point of the parameter surface, mu > 0, beta > 0."""

    mu: float
    beta: float

    def __post_init__(self) -> None:
        for name in ("mu", "beta"):
            value = float(getattr(self, name))
            if not (math.isfinite(value) and value > 0.0):
                raise ValueError(f"{name} must be a positive finite real, got {value!r}")
            object.__setattr__(self, name, value)


@dataclass(frozen=True)
class TangentVector:
    """Coordinate components (d_mu, d_beta) of a tangent vector."""

    d_mu: float
    d_beta: float

    def __post_init__(self) -> None:
        for name in ("d_mu", "d_beta"):
            value = float(getattr(self, name))
            if not math.isfinite(value):
                raise ValueError(f"{name} must be finite, got {value!r}")
            object.__setattr__(self, name, value)


@dataclass(frozen=True)
class CurveSpec:
    """Parametrised curve t -> (mu(t), beta(t)) on a closed interval.

    The derivative callable must return the coordinate velocity; consistency
    with finite differences of evaluate can be spot-checked via
    check_derivative.
    """

    evaluate: Callable[[float], ManifoldPoint]
    derivative: Callable[[float], TangentVector]
    domain: tuple[float, float]

    def __post_init__(self) -> None:
        a, b = (float(self.domain[0]), float(self.domain[1]))
        if not (math.isfinite(a) and math.isfinite(b)) or a > b:
            raise ValueError(f"domain must be a finite interval [a, b], got {self.domain!r}")
        object.__setattr__(self, "domain", (a, b))

    def check_derivative(self, samples: int = 9, tol: float = 1e-5) -> None:
        """Raise if the declared derivative disagrees with a central
        difference of evaluate at interior sample points."""
        a, b = self.domain
        if a == b:
            return
        h = (b - a) * 1e-7
        for t in np.linspace(a + 2 * h, b - 2 * h, samples):
            ahead = self.evaluate(t + h)
            behind = self.evaluate(t - h)
            declared = self.derivative(t)
            fd_mu = (ahead.mu - behind.mu) / (2 * h)
            fd_beta = (ahead.beta - behind.beta) / (2 * h)
            scale = max(1.0, abs(declared.d_mu), abs(declared.d_beta))
            err = max(abs(fd_mu - declared.d_mu), abs(fd_beta - declared.d_beta))
            if err > tol * scale:
                raise ValueError(
                    f"derivative mismatch at t={t:.6g}: finite difference "
                    f"({fd_mu:.6g}, {fd_beta:.6g}) vs declared "
                    f"({declared.d_mu:.6g}, {declared.d_beta:.6g})"
                )


@dataclass(frozen=True)
class GeodesicPath:
    """Discrete geodesic: samples of (t, point, velocity) plus the path
    length and energy accumulated by the integrator."""

    times: np.ndarray
    points: tuple[ManifoldPoint, ...]
    velocities: tuple[TangentVector, ...]
    length: float
    energy: float

    @property
    def endpoint(self) -> ManifoldPoint:
        return self.points[-1]

    def speeds(self) -> np.ndarray:
        """Metric speed at every stored sample."""
        return np.array(
            [tangent_norm(p, v) for p, v in zip(self.points, self.velocities)]
        )


def _metric_components(mu: float, beta: float) -> tuple[float, float]:
    return beta / (mu * mu), specfun.trigamma(beta) - 1.0 / beta


def metric_tensor(point: ManifoldPoint) -> np.ndarray:
    """2x2 Fisher metric at the point, in (mu, beta) coordinates."""
    g_mu, g_beta = _metric_components(point.mu, point.beta)
    return np.array([[g_mu, 0.0], [0.0, g_beta]])


def tangent_norm(point: ManifoldPoint, vector: TangentVector) -> float:
    """Metric norm of a tangent vector."""
    g_mu, g_beta = _metric_components(point.mu, point.beta)
    return math.sqrt(g_mu * vector.d_mu**2 + g_beta * vector.d_beta**2)


def curve_length(curve: CurveSpec) -> float:
    """Arc length of the curve under the Fisher metric.

    Evaluation off the chart (mu or beta reaching 0 inside the domain)
    surfaces as the ValueError raised by ManifoldPoint.
    """
    a, b = curve.domain
    if a == b:
        return 0.0
    value, _ = quad(
        lambda t: tangent_norm(curve.evaluate(t), curve.derivative(t)),
        a,
        b,
        **_QUAD_OPTS,
    )
    return value


def curve_energy(curve: CurveSpec) -> float:
    """Dirichlet energy of the curve: the integral of the squared speed."""
    a, b = curve.domain
    if a == b:
        return 0.0

    def integrand(t: float) -> float:
        point = curve.evaluate(t)
        vector = curve.derivative(t)
        g_mu, g_beta = _metric_components(point.mu, point.beta)
        return g_mu * vector.d_mu**2 + g_beta * vector.d_beta**2

    value, _ = quad(integrand, a, b, **_QUAD_OPTS)
    return value


def christoffel(point: ManifoldPoint) -> np.ndarray:
    """Christoffel symbols at the point, indexed [k, i, j] for
    Gamma^k_{ij}; symmetric in (i, j).  Coordinate order is (mu, beta)."""
    mu, beta = point.mu, point.beta
    phi = specfun.trigamma(beta) - 1.0 / beta
    psi2 = specfun.tetragamma(beta)
    gamma = np.zeros((2, 2, 2))
    gamma[0, 0, 0] = -1.0 / mu
    gamma[0, 0, 1] = gamma[0, 1, 0] = 1.0 / (2.0 * beta)
    gamma[1, 0, 0] = -1.0 / (2.0 * mu * mu * phi)
    gamma[1, 1, 1] = (psi2 + 1.0 / (beta * beta)) / (2.0 * phi)
    return gamma


def _geodesic_rhs(state: np.ndarray) -> np.ndarray:
    mu, beta, v_mu, v_beta = (float(s) for s in state)
    if (
        not all(map(math.isfinite, (mu, beta, v_mu, v_beta)))
        or mu < _CHART_FLOOR
        or beta < _CHART_FLOOR
    ):
        raise _BoundaryHit()
    try:
        phi = specfun.trigamma(beta) - 1.0 / beta
        psi2 = specfun.tetragamma(beta)
        a_mu = v_mu * v_mu / mu - v_mu * v_beta / beta
        a_beta = v_mu * v_mu / (2.0 * mu * mu * phi) - (
            (psi2 + 1.0 / (beta * beta)) / (2.0 * phi)
        ) * v_beta * v_beta
    except (OverflowError, ZeroDivisionError):
        raise _BoundaryHit() from None
    if not (math.isfinite(a_mu) and math.isfinite(a_beta)):
        raise _BoundaryHit()
    return np.array([v_mu, v_beta, a_mu, a_beta])


class _BoundaryHit(Exception):
    pass


def geodesic_shoot(
    start: ManifoldPoint,
    velocity: TangentVector,
    t_end: float,
    steps: int,
) -> GeodesicPath:
    """Integrate the geodesic equation from an initial point and velocity.

    Classical fixed-step fourth-order Runge-Kutta with steps equal
    subintervals of [0, t_end].  Raises ChartBoundaryError if the path (or
    an internal stage) leaves the chart; the error carries the last sample
    that was still valid.
    """
    t_end = float(t_end)
    if not (math.isfinite(t_end) and t_end > 0.0):
        raise ValueError("t_end must be a positive finite real")
    steps = int(steps)
    if steps < 1:
        raise ValueError("steps must be at least 1")

    h = t_end / steps
    state = np.array([start.mu, start.beta, velocity.d_mu, velocity.d_beta])
    times = np.linspace(0.0, t_end, steps + 1)
    points = [start]
    velocities = [velocity]
    for i in range(steps):
        t = times[i]
        try:
            k1 = _geodesic_rhs(state)
            k2 = _geodesic_rhs(state + 0.5 * h * k1)
            k3 = _geodesic_rhs(state + 0.5 * h * k2)
            k4 = _geodesic_rhs(state + h * k3)
            state = state + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
            if (
                not np.all(np.isfinite(state))
                or state[0] < _CHART_FLOOR
                or state[1] < _CHART_FLOOR
            ):
                raise _BoundaryHit()
        except _BoundaryHit:
            raise ChartBoundaryError(
                "geodesic left the chart mu > 0, beta > 0",
                t=float(t),
                state=(
                    points[-1].mu,
                    points[-1].beta,
                    velocities[-1].d_mu,
                    velocities[-1].d_beta,
                ),
            ) from None
        points.append(ManifoldPoint(mu=state[0], beta=state[1]))
        velocities.append(TangentVector(d_mu=state[2], d_beta=state[3]))

    speeds = np.array([tangent_norm(p, v) for p, v in zip(points, velocities)])
    length = float(np.trapezoid(speeds, times))
    energy = float(np.trapezoid(speeds**2, times))
    return GeodesicPath(
        times=times,
        points=tuple(points),
        velocities=tuple(velocities),
        length=length,
        energy=energy,
    )


def chart_line(p: ManifoldPoint, q: ManifoldPoint) -> CurveSpec:
    """Coordinate straight line from p to q on [0, 1].  Its length is an
    upper bound for the geodesic distance."""
    d_mu = q.mu - p.mu
    d_beta = q.beta - p.beta
    return CurveSpec(
        evaluate=lambda t: ManifoldPoint(mu=p.mu + t * d_mu, beta=p.beta + t * d_beta),
        derivative=lambda t: TangentVector(d_mu=d_mu, d_beta=d_beta),
        domain=(0.0, 1.0),
    )


def _shoot_endpoint(
    start: ManifoldPoint, v: Sequence[float], steps: int
) -> tuple[np.ndarray, GeodesicPath]:
    path = geodesic_shoot(start, TangentVector(d_mu=v[0], d_beta=v[1]), 1.0, steps)
    end = path.endpoint
    return np.array([end.mu, end.beta]), path


def geodesic_distance(
    p: ManifoldPoint,
    q: ManifoldPoint,
    steps: int = 256,
    max_iter: int = 50,
    tol: float = 1e-8,
) -> float:
    """Length of the connecting geodesic, found by shooting.

    The initial velocity is the coordinate difference; a damped Newton
    iteration with finite-difference Jacobian drives the endpoint of the
    unit-time geodesic onto q.  Raises GeodesicConvergenceError when the
    endpoint gap cannot be brought below tol within max_iter iterations;
    the coordinate straight line (chart_line) still gives an upper bound.
    """
    if (p.mu, p.beta) == (q.mu, q.beta):
        return 0.0
    target = np.array([q.mu, q.beta])
    scale = np.maximum(np.abs(target), [p.mu, p.beta])

    def gap_of(v: np.ndarray) -> tuple[float, np.ndarray | None, GeodesicPath | None]:
        try:
            end, path = _shoot_endpoint(p, v, steps)
        except ChartBoundaryError:
            return math.inf, None, None
        residual = end - target
        return float(np.max(np.abs(residual) / scale)), residual, path

    v = np.array([q.mu - p.mu, q.beta - p.beta])
    gap, residual, path = gap_of(v)
    if residual is None:
        raise GeodesicConvergenceError(
            "initial shot leaves the chart", endpoint_gap=math.inf, iterations=0
        )
    for iteration in range(1, max_iter + 1):
        if gap <= tol:
            return path.length
        jac = np.empty((2, 2))
        for j in range(2):
            h = 1e-6 * max(1.0, abs(v[j]))
            bumped = v.copy()
            bumped[j] += h
            try:
                end_b, _ = _shoot_endpoint(p, bumped, steps)
            except ChartBoundaryError:
                try:
                    bumped[j] -= 2 * h
                    end_b, _ = _shoot_endpoint(p, bumped, steps)
                    h = -h
                except ChartBoundaryError:
                    raise GeodesicConvergenceError(
                        "Jacobian probe leaves the chart",
                        endpoint_gap=gap,
                        iterations=iteration,
                    ) from None
            jac[:, j] = (end_b - (residual + target)) / h
        try:
            step = np.linalg.solve(jac, -residual)
        except np.linalg.LinAlgError:
            raise GeodesicConvergenceError(
                "endpoint Jacobian is singular", endpoint_gap=gap, iterations=iteration
            ) from None
        damp = 1.0
        improved = False
        while damp >= 1.0 / 64.0:
            trial = v + damp * step
            trial_gap, trial_residual, trial_path = gap_of(trial)
            if trial_gap < gap:
                v, gap, residual, path = trial, trial_gap, trial_residual, trial_path
                improved = True
                break
            damp *= 0.5
        if not improved:
            raise GeodesicConvergenceError(
                f"no descent step at endpoint gap {gap:.3e}",
                endpoint_gap=gap,
                iterations=iteration,
            )
    if gap <= tol:
        return path.length
    raise GeodesicConvergenceError(
        f"endpoint gap {gap:.3e} after {max_iter} iterations (tolerance {tol:.1e})",
        endpoint_gap=gap,
        iterations=max_iter,
    )


def gaussian_curvature(beta: float) -> float:
    """Gaussian curvature of the surface.  Depends on beta alone, is
    negative everywhere, and runs from -1/4 near beta = 0 to -1/2 for
    large beta."""
    beta = float(beta)
    if not (math.isfinite(beta) and beta > 0.0):
        raise ValueError(f"beta must be a positive finite real, got {beta!r}")
    psi1 = specfun.trigamma(beta)
    psi2 = specfun.tetragamma(beta)
    return (psi1 + beta * psi2) / (4.0 * (beta * psi1 - 1.0) ** 2)
