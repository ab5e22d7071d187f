"""Independent numerical oracles shared across test modules.

These deliberately avoid the library's own closed forms: quadrature for
integrals and moments, finite differences of the metric for Christoffel
symbols and curvature, and an exact two-point histogram builder for moment
round trips.
"""

from __future__ import annotations

import math

import numpy as np
from scipy.integrate import quad

# Shared (mu, beta) test grid.
GRID_BETA = (0.2, 0.37, 1.0, 2.0, 5.0)
GRID_MU = (0.5, 1.0, 1.244, 3.0)

_QUAD = {"epsabs": 1e-10, "epsrel": 1e-10, "limit": 300}


def integrate_half_line(f, split: float) -> float:
    """Two-piece adaptive quadrature of f over (0, inf), split at an
    interior point to tame endpoint singularities."""
    left, _ = quad(f, 0.0, split, **_QUAD)
    right, _ = quad(f, split, np.inf, **_QUAD)
    return left + right


def quadrature_moments(pdf, split: float) -> tuple[float, float]:
    """(mean, variance) of a density on (0, inf) by adaptive quadrature."""
    mean = integrate_half_line(lambda x: x * pdf(x), split)
    second = integrate_half_line(lambda x: x * x * pdf(x), split)
    return mean, second - mean * mean


def fd_christoffel(metric_fn, mu: float, beta: float, step: float = 1e-5) -> np.ndarray:
    """Christoffel symbols from central finite differences of the metric.

    metric_fn(mu, beta) must return the 2x2 metric matrix; output is
    indexed [k, i, j] like the library's christoffel.
    """
    coords = (mu, beta)
    dg = []
    for axis in range(2):
        h = step * max(1.0, abs(coords[axis]))
        up = list(coords)
        dn = list(coords)
        up[axis] += h
        dn[axis] -= h
        dg.append((metric_fn(*up) - metric_fn(*dn)) / (2.0 * h))
    ginv = np.linalg.inv(metric_fn(mu, beta))
    gamma = np.zeros((2, 2, 2))
    for k in range(2):
        for i in range(2):
            for j in range(2):
                total = 0.0
                for l in range(2):
                    total += ginv[k, l] * (dg[i][l, j] + dg[j][l, i] - dg[l][i, j])
                gamma[k, i, j] = 0.5 * total
    return gamma


def brioschi_curvature(metric_fn, mu: float, beta: float, rel_step: float = 1e-3) -> float:
    """Gaussian curvature of a diagonal metric by the Brioschi formula,
    with nested central differences of the metric components only."""

    def e_comp(m, b):
        return metric_fn(m, b)[0, 0]

    def g_comp(m, b):
        return metric_fn(m, b)[1, 1]

    def root_eg(m, b):
        return math.sqrt(e_comp(m, b) * g_comp(m, b))

    h_mu = rel_step * mu
    h_beta = rel_step * beta

    def term_mu(m, b):
        dg_dmu = (g_comp(m + h_mu, b) - g_comp(m - h_mu, b)) / (2.0 * h_mu)
        return dg_dmu / root_eg(m, b)

    def term_beta(m, b):
        de_dbeta = (e_comp(m, b + h_beta) - e_comp(m, b - h_beta)) / (2.0 * h_beta)
        return de_dbeta / root_eg(m, b)

    d_mu = (term_mu(mu + h_mu, beta) - term_mu(mu - h_mu, beta)) / (2.0 * h_mu)
    d_beta = (term_beta(mu, beta + h_beta) - term_beta(mu, beta - h_beta)) / (2.0 * h_beta)
    return -(d_mu + d_beta) / (2.0 * root_eg(mu, beta))


def two_point_histogram(mean: float, cv: float) -> tuple[np.ndarray, np.ndarray]:
    """Two strictly positive class centres and weights with exactly the
    requested mean and coefficient of variation."""
    sd = cv * mean
    a = min(1.0, 0.5 / cv)
    centers = np.array([mean - sd * a, mean + sd / a])
    weights = np.array([1.0, a * a]) / (1.0 + a * a)
    assert centers[0] > 0.0
    return centers, weights
