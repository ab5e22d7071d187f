"""Riemannian layer: metric, curve functionals, Christoffel symbols,
geodesics and curvature.

Independent oracles: central-difference Christoffels assembled from the
metric alone, the Brioschi curvature formula on nested finite differences,
closed-form lengths/energies of coordinate curves, and the Cauchy-Schwarz
and reparametrisation identities.
"""

import math

import numpy as np
import pytest

from _oracles import brioschi_curvature, fd_christoffel
from voidgamma.errors import ChartBoundaryError, GeodesicConvergenceError
from voidgamma.info_geometry import (
    CurveSpec,
    GeodesicPath,
    ManifoldPoint,
    TangentVector,
    chart_line,
    christoffel,
    curve_energy,
    curve_length,
    gaussian_curvature,
    geodesic_distance,
    geodesic_shoot,
    metric_tensor,
    tangent_norm,
)

TRIGAMMA_1_MINUS_1 = 0.64493406684822644  # pi^2/6 - 1
CURVATURE_AT_1 = -0.45630369144019213
# Length of the constant-mu segment beta: 1 -> 2, integral of
# sqrt(trigamma(b) - 1/b); frozen from 30-digit quadrature.
BETA_SEGMENT_LENGTH = 0.54127798527596472
# Energy of the same segment: (psi(2) - psi(1)) - ln 2 = 1 - ln 2.
BETA_SEGMENT_ENERGY = 0.30685281944005469


def metric_fn(mu, beta):
    return metric_tensor(ManifoldPoint(mu, beta))


def mu_segment(a, b):
    """Coordinate curve (t, 1) traversed at unit parameter speed."""
    return CurveSpec(
        evaluate=lambda t: ManifoldPoint(mu=t, beta=1.0),
        derivative=lambda t: TangentVector(d_mu=1.0, d_beta=0.0),
        domain=(a, b),
    )


def beta_segment(a, b):
    return CurveSpec(
        evaluate=lambda t: ManifoldPoint(mu=1.0, beta=t),
        derivative=lambda t: TangentVector(d_mu=0.0, d_beta=1.0),
        domain=(a, b),
    )


class TestMetric:
    def test_at_unit_point(self):
        g = metric_tensor(ManifoldPoint(1.0, 1.0))
        assert g[0, 0] == pytest.approx(1.0, abs=1e-14)
        assert g[1, 1] == pytest.approx(TRIGAMMA_1_MINUS_1, abs=1e-14)
        assert g[0, 1] == g[1, 0] == 0.0

    def test_mean_component_scales_inverse_square(self):
        g = metric_tensor(ManifoldPoint(2.0, 1.0))
        assert g[0, 0] == pytest.approx(0.25, abs=1e-14)

    def test_positive_definite_on_grid(self):
        for beta in (1e-3, 0.37, 1.0, 10.0, 1e3):
            for mu in (0.5, 3.0):
                g = metric_tensor(ManifoldPoint(mu, beta))
                assert g[0, 0] > 0.0 and g[1, 1] > 0.0, (mu, beta)

    def test_tangent_norms(self):
        p = ManifoldPoint(1.0, 1.0)
        assert tangent_norm(p, TangentVector(1.0, 0.0)) == pytest.approx(1.0, abs=1e-14)
        assert tangent_norm(p, TangentVector(0.0, 1.0)) == pytest.approx(
            math.sqrt(TRIGAMMA_1_MINUS_1), abs=1e-14
        )
        assert tangent_norm(p, TangentVector(0.0, 0.0)) == 0.0

    def test_point_validation(self):
        for bad in (0.0, -1.0, math.inf, math.nan):
            with pytest.raises(ValueError):
                ManifoldPoint(bad, 1.0)
            with pytest.raises(ValueError):
                ManifoldPoint(1.0, bad)
        with pytest.raises(ValueError):
            TangentVector(math.nan, 0.0)


class TestCurveFunctionals:
    def test_mu_line_length_is_log_ratio(self):
        assert curve_length(mu_segment(1.0, math.e)) == pytest.approx(1.0, abs=1e-9)

    def test_empty_domain(self):
        assert curve_length(mu_segment(2.0, 2.0)) == 0.0
        assert curve_energy(mu_segment(2.0, 2.0)) == 0.0

    def test_beta_segment_length(self):
        assert curve_length(beta_segment(1.0, 2.0)) == pytest.approx(
            BETA_SEGMENT_LENGTH, abs=1e-9
        )

    def test_mu_line_energy(self):
        # integral of 1/t^2
        assert curve_energy(mu_segment(1.0, 2.0)) == pytest.approx(0.5, abs=1e-9)
        assert curve_energy(mu_segment(2.0, 6.0)) == pytest.approx(1.0 / 3.0, abs=1e-9)

    def test_beta_segment_energy(self):
        assert curve_energy(beta_segment(1.0, 2.0)) == pytest.approx(
            BETA_SEGMENT_ENERGY, abs=1e-9
        )

    def test_cauchy_schwarz_length_energy(self):
        for curve in (mu_segment(1.0, 3.0), beta_segment(0.5, 4.0)):
            a, b = curve.domain
            length = curve_length(curve)
            energy = curve_energy(curve)
            assert length**2 <= (b - a) * energy + 1e-12

    def test_constant_speed_curve_saturates_cauchy_schwarz(self):
        curve = CurveSpec(
            evaluate=lambda t: ManifoldPoint(mu=math.exp(t), beta=1.0),
            derivative=lambda t: TangentVector(d_mu=math.exp(t), d_beta=0.0),
            domain=(0.0, 1.0),
        )
        length = curve_length(curve)
        energy = curve_energy(curve)
        assert length == pytest.approx(1.0, abs=1e-9)
        assert length**2 == pytest.approx(energy, rel=1e-6)

    def test_length_is_reparametrisation_invariant_energy_is_not(self):
        straight = CurveSpec(
            evaluate=lambda t: ManifoldPoint(mu=1.0 + t, beta=1.0),
            derivative=lambda t: TangentVector(d_mu=1.0, d_beta=0.0),
            domain=(0.0, 1.0),
        )
        squared = CurveSpec(
            evaluate=lambda s: ManifoldPoint(mu=1.0 + s * s, beta=1.0),
            derivative=lambda s: TangentVector(d_mu=2.0 * s, d_beta=0.0),
            domain=(0.0, 1.0),
        )
        assert curve_length(squared) == pytest.approx(curve_length(straight), abs=1e-7)
        assert abs(curve_energy(squared) - curve_energy(straight)) > 1e-3

    def test_curve_leaving_chart_raises(self):
        dive = CurveSpec(
            evaluate=lambda t: ManifoldPoint(mu=t, beta=2.0 - t),
            derivative=lambda t: TangentVector(d_mu=1.0, d_beta=-1.0),
            domain=(0.5, 3.0),
        )
        with pytest.raises(ValueError):
            curve_length(dive)

    def test_check_derivative(self):
        good = mu_segment(1.0, 2.0)
        good.check_derivative()
        bad = CurveSpec(
            evaluate=lambda t: ManifoldPoint(mu=t, beta=1.0),
            derivative=lambda t: TangentVector(d_mu=2.0, d_beta=0.0),
            domain=(1.0, 2.0),
        )
        with pytest.raises(ValueError):
            bad.check_derivative()

    def test_domain_validation(self):
        with pytest.raises(ValueError):
            mu_segment(2.0, 1.0)
        with pytest.raises(ValueError):
            mu_segment(0.0, math.inf)


class TestChristoffel:
    def test_closed_forms(self):
        g = christoffel(ManifoldPoint(2.0, 1.0))
        assert g[0, 0, 0] == pytest.approx(-0.5, abs=1e-14)
        g = christoffel(ManifoldPoint(1.0, 2.0))
        assert g[0, 0, 1] == pytest.approx(0.25, abs=1e-14)

    def test_symmetry_and_zeros(self):
        for mu, beta in ((1.0, 1.0), (2.0, 0.37), (0.5, 5.0)):
            g = christoffel(ManifoldPoint(mu, beta))
            assert np.array_equal(g[:, 0, 1], g[:, 1, 0])
            assert g[0, 1, 1] == 0.0
            assert g[1, 0, 1] == g[1, 1, 0] == 0.0

    @pytest.mark.parametrize("mu,beta", [(1.0, 1.0), (2.0, 0.37), (0.5, 5.0)])
    def test_against_finite_difference_oracle(self, mu, beta):
        expected = fd_christoffel(metric_fn, mu, beta)
        actual = christoffel(ManifoldPoint(mu, beta))
        assert np.max(np.abs(actual - expected)) <= 1e-7


class TestGeodesicShoot:
    def test_zero_velocity_stays_put(self):
        path = geodesic_shoot(ManifoldPoint(1.5, 0.8), TangentVector(0.0, 0.0), 1.0, 32)
        assert path.endpoint.mu == 1.5 and path.endpoint.beta == 0.8
        assert path.length == pytest.approx(0.0, abs=1e-15)
        assert path.energy == pytest.approx(0.0, abs=1e-15)

    def test_speed_is_conserved(self):
        path = geodesic_shoot(ManifoldPoint(1.0, 1.0), TangentVector(1.0, 0.3), 1.0, 1000)
        speeds = path.speeds()
        initial = speeds[0]
        assert np.max(np.abs(speeds - initial)) <= 1e-6 * initial

    def test_fourth_order_convergence(self):
        start = ManifoldPoint(1.0, 1.0)
        vel = TangentVector(1.0, 0.3)
        ref = geodesic_shoot(start, vel, 1.0, 6400).endpoint

        def endpoint_error(steps):
            end = geodesic_shoot(start, vel, 1.0, steps).endpoint
            return math.hypot(end.mu - ref.mu, end.beta - ref.beta)

        # Halving the step must cut the endpoint error by about 2^4.
        assert endpoint_error(50) / endpoint_error(100) >= 8.0

    def test_length_energy_consistency(self):
        # Geodesics have constant speed, so length^2 = t_end * energy.
        path = geodesic_shoot(ManifoldPoint(1.0, 1.0), TangentVector(0.5, -0.2), 1.0, 500)
        assert path.length**2 == pytest.approx(path.energy, rel=1e-9)
        assert isinstance(path, GeodesicPath)
        assert len(path.points) == len(path.velocities) == path.times.size == 501

    def test_boundary_exit_reports_last_valid_sample(self):
        with pytest.raises(ChartBoundaryError) as excinfo:
            geodesic_shoot(ManifoldPoint(1.0, 1.0), TangentVector(0.0, -50.0), 1.0, 10)
        err = excinfo.value
        assert 0.0 <= err.t < 1.0
        assert len(err.state) == 4
        assert all(math.isfinite(x) for x in err.state)
        assert err.state[1] > 0.0

    def test_argument_validation(self):
        p, v = ManifoldPoint(1.0, 1.0), TangentVector(1.0, 0.0)
        with pytest.raises(ValueError):
            geodesic_shoot(p, v, 0.0, 10)
        with pytest.raises(ValueError):
            geodesic_shoot(p, v, 1.0, 0)


class TestGeodesicDistance:
    def test_coincident_points(self):
        assert geodesic_distance(ManifoldPoint(1.0, 1.0), ManifoldPoint(1.0, 1.0)) == 0.0

    def test_bounded_by_straight_mu_line(self):
        d = geodesic_distance(ManifoldPoint(1.0, 1.0), ManifoldPoint(1.1, 1.0))
        assert 0.0 < d <= math.log(1.1) + 1e-9

    def test_small_displacement_asymptotics(self):
        # To leading order the distance is the metric norm of the gap.
        eps = 1e-3
        d_mu = geodesic_distance(ManifoldPoint(1.0, 1.0), ManifoldPoint(1.0 + eps, 1.0))
        assert d_mu == pytest.approx(math.log1p(eps), abs=1e-9)
        d_beta = geodesic_distance(ManifoldPoint(1.0, 1.0), ManifoldPoint(1.0, 1.0 + eps))
        assert d_beta == pytest.approx(eps * math.sqrt(TRIGAMMA_1_MINUS_1), abs=5e-6)

    def test_symmetry(self):
        p, q = ManifoldPoint(1.0, 1.0), ManifoldPoint(1.2, 0.8)
        assert geodesic_distance(p, q) == pytest.approx(geodesic_distance(q, p), abs=1e-6)

    @pytest.mark.parametrize(
        "p,q",
        [
            ((1.0, 1.0), (2.0, 0.37)),
            ((1.0, 0.5), (3.0, 2.0)),
            ((0.5, 3.0), (1.244, 0.37)),
        ],
    )
    def test_never_exceeds_chart_line(self, p, q):
        p = ManifoldPoint(*p)
        q = ManifoldPoint(*q)
        d = geodesic_distance(p, q)
        assert 0.0 < d <= curve_length(chart_line(p, q)) + 1e-9

    def test_exhausted_iterations(self):
        with pytest.raises(GeodesicConvergenceError) as excinfo:
            geodesic_distance(ManifoldPoint(1.0, 1.0), ManifoldPoint(3.0, 1.0), max_iter=1)
        err = excinfo.value
        assert err.iterations == 1
        assert err.endpoint_gap > 1e-8

    def test_initial_shot_off_chart(self):
        with pytest.raises(GeodesicConvergenceError) as excinfo:
            geodesic_distance(ManifoldPoint(1.0, 1.0), ManifoldPoint(1e4, 1e-3))
        err = excinfo.value
        assert err.iterations == 0
        assert math.isinf(err.endpoint_gap)


class TestGaussianCurvature:
    def test_frozen_value_at_one(self):
        assert gaussian_curvature(1.0) == pytest.approx(CURVATURE_AT_1, abs=1e-12)

    def test_limits(self):
        assert gaussian_curvature(1e-4) == pytest.approx(-0.25, abs=0.01)
        assert gaussian_curvature(1e4) == pytest.approx(-0.5, abs=1e-3)

    def test_pinched_between_limits(self):
        # Analytically -1/2 < K < -1/4.  Near beta = 1e6 the denominator
        # beta*trigamma(beta) - 1 is ~5e-7 and its cancellation noise lets
        # the computed value cross -1/2 by a few 1e-10, hence the slack.
        for beta in np.geomspace(1e-6, 1e6, 60):
            k = gaussian_curvature(float(beta))
            assert -0.5 - 1e-8 < k < -0.25, beta

    @pytest.mark.parametrize("beta", [0.1, 0.37, 1.0, 5.0, 50.0])
    def test_against_brioschi_oracle(self, beta):
        for mu in (0.7, 1.0, 2.0):
            oracle = brioschi_curvature(metric_fn, mu, beta)
            assert gaussian_curvature(beta) == pytest.approx(oracle, rel=1e-6), mu

    def test_domain_errors(self):
        for bad in (0.0, -1.0, math.inf, math.nan):
            with pytest.raises(ValueError):
                gaussian_curvature(bad)
