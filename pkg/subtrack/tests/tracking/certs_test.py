# -*- coding: utf-8 -*-
"""Tests for the certificates: noise bound, decay, feasibility, tubes and step-size tuning.

The soundness tests draw seeded random instances and check that every inequality the tube certificates rest on holds
on each of them.

"""
import numpy

import pytest

from subtrack.tests.tracking.tracking_test_case import SubspaceTrackingTestCase
from subtrack.tracking.certs import CertificateParams, assumption4_check, check_tube_entry, delta_bound, feasible_step_sizes, max_rate_step_size, minimize_ultimate_bound, optimize_step_size, rho, rho_curve, rho_tilde, signal_bounds, signal_requirement, single_step_bound, squared_distance_trajectory, step_size_upper_limit, theorem1_bound, tube_bound, tube_violations, ultimate_bound
from subtrack.tracking.constant import MAX_RATE, MIN_ULTIMATE
from subtrack.tracking.exceptions import AssumptionViolated, DimensionMismatch, Infeasible, InvalidRho
from subtrack.tracking.grassmann import chordal_distance, exp_map, squared_distance_gradient, tangent_project
from subtrack.tracking.great import gd_step
from subtrack.tracking.simgen import perturbed_initial_estimate, synthetic_dataset


#: Number of random instances per soundness check
NUM_INSTANCES = 200


def geodesic_experiment_params(step_size=1.0e-3):
    """Constants of the Gr(5, 3) geodesic experiment."""
    return CertificateParams(
        noise_bound=1.0e-3,
        drift_bound=5.0e-5,
        sigma_lower=8.49,
        sigma_upper=11.28,
        tube_radius=0.1,
        step_size=step_size,
        window_length=100,
        inner_iters=10,
        dim=3,
    )


def _with_sigma_lower(params, sigma_lower):
    """Copy of ``params`` with ``sigma_lower`` replaced."""
    return CertificateParams(**dict(params._asdict(), sigma_lower=sigma_lower))


class TestStepSizes(SubspaceTrackingTestCase):

    """Test the step-size tuning against the geodesic experiment constants."""

    @classmethod
    @pytest.fixture(autouse=True, scope='class')
    def base_setup(cls):
        """Set up the experiment constants and worst noise bound."""
        cls.params = geodesic_experiment_params()
        cls.delta_sup = 0.067

    def test_max_rate_closed_form(self):
        """Test alpha = sigma_lower^2 / (4 sigma_upper^4) = 1.11e-3."""
        step_size = optimize_step_size(MAX_RATE, self.delta_sup, self.params)
        assert '{0:.2e}'.format(step_size) == '1.11e-03'
        self.assert_scalar_within_relative(step_size, max_rate_step_size(8.49, 11.28), 0.0)

    def test_max_rate_maximizes_rho(self):
        """Test that rho is largest at the closed-form step and vanishes at the upper limit."""
        step_size = max_rate_step_size(8.49, 11.28)
        for factor in (0.5, 0.9, 1.1, 1.5):
            assert rho(factor * step_size, 8.49, 11.28) < rho(step_size, 8.49, 11.28)
        self.assert_scalar_within_absolute(rho(step_size_upper_limit(8.49, 11.28), 8.49, 11.28), 0.0, 1.0e-15)

    def test_min_ultimate(self):
        """Test that the ultimate bound is minimized at 4.20e-5 (within 5%) in fewer than 100 reductions."""
        result = minimize_ultimate_bound(self.delta_sup, self.params)
        self.assert_scalar_within_relative(result.minimizer, 4.20e-5, 0.05)
        assert result.num_steps < 100
        self.assert_scalar_within_relative(optimize_step_size(MIN_ULTIMATE, self.delta_sup, self.params), result.minimizer, 1.0e-12)

        best = ultimate_bound(self.delta_sup, self.params.with_step_size(result.minimizer))
        for factor in (0.8, 1.25):
            assert ultimate_bound(self.delta_sup, self.params.with_step_size(factor * result.minimizer)) >= best

    def test_feasible_interval(self):
        """Test that the feasible interval contains both tuned steps and its endpoints have nonnegative slack."""
        interval = feasible_step_sizes(self.delta_sup, self.params)
        assert interval.is_inside(max_rate_step_size(8.49, 11.28))
        assert interval.is_inside(minimize_ultimate_bound(self.delta_sup, self.params).minimizer)
        for endpoint in (interval.min, interval.max):
            assert assumption4_check(self.params.with_step_size(endpoint), self.delta_sup).slack >= 0.0

    def test_infeasible(self):
        """Test that a huge noise bound leaves no feasible step size."""
        with pytest.raises(Infeasible):
            feasible_step_sizes(10.0, self.params)

    def test_rho_curve(self):
        """Test the tabulated (alpha, rho, rho_tilde) columns."""
        step_sizes = numpy.geomspace(1.0e-6, 1.0e-3, 7)
        table = rho_curve(step_sizes, 8.49, 11.28, 0.1)
        assert table.shape == (7, 3)
        numpy.testing.assert_array_equal(table[:, 0], step_sizes)
        numpy.testing.assert_allclose(table[:, 2], 1.0 - 4.0 * 0.99 * table[:, 1], rtol=1.0e-14)


class TestAssumption4(SubspaceTrackingTestCase):

    """Test the feasibility check."""

    def test_geodesic_experiment_feasible(self):
        """Test that the rate-maximizing step passes at the experiment constants."""
        params = geodesic_experiment_params(max_rate_step_size(8.49, 11.28))
        report = assumption4_check(params, 0.067)
        assert report.holds
        self.assert_scalar_within_relative(report.slack, report.rhs - report.lhs, 1.0e-14)
        self.assert_scalar_within_relative(report.rho_tilde, rho_tilde(params.step_size, 8.49, 11.28, 0.1), 1.0e-14)

    def test_violation(self):
        """Test that an infeasible configuration reports negative slack and refuses to produce bounds."""
        params = geodesic_experiment_params(max_rate_step_size(8.49, 11.28))
        report = assumption4_check(params, 1.0)
        assert not report.holds
        assert report.slack < 0.0
        with pytest.raises(AssumptionViolated) as excinfo:
            tube_bound(10, 0.01, 1.0, params)
        assert excinfo.value.report.slack == report.slack

    def test_invalid_rho(self):
        """Test that step sizes beyond the upper limit are refused."""
        params = geodesic_experiment_params(2.0 * step_size_upper_limit(8.49, 11.28))
        with pytest.raises(InvalidRho):
            assumption4_check(params, 0.0)

    def test_signal_requirement_by_hand(self):
        """Test the K = 1 signal requirement at r_b = 0.5, c = 0.01, alpha = 0.02, sigma_upper = 2, delta = 0.

        The requirement is 0.0099 / 0.015 + 0.64 = 1.30, and the feasibility check with K = 1 flips exactly there.

        """
        params = CertificateParams(0.0, 0.01, 1.0, 2.0, 0.5, 0.02, 10, 1, 3)
        self.assert_scalar_within_relative(signal_requirement(0.0, params), 1.30, 1.0e-14)

        below = assumption4_check(_with_sigma_lower(params, numpy.sqrt(1.30 * (1.0 - 1.0e-6))), 0.0)
        above = assumption4_check(_with_sigma_lower(params, numpy.sqrt(1.30 * (1.0 + 1.0e-6))), 0.0)
        assert not below.holds
        assert above.holds
        self.assert_scalar_within_relative(above.slack, 0.015 * 1.30e-6, 1.0e-6)

    def test_signal_requirement_matches_check(self):
        """Test that the feasibility slack with K = 1 is zero at the signal requirement for several noise bounds."""
        base = CertificateParams(**dict(geodesic_experiment_params(max_rate_step_size(8.49, 11.28))._asdict(), inner_iters=1))
        for delta in (0.0, 1.0e-4, 1.0e-3):
            required = signal_requirement(delta, base)
            report = assumption4_check(_with_sigma_lower(base, numpy.sqrt(required)), delta)
            self.assert_scalar_within_absolute(report.slack, 0.0, 1.0e-12 * report.rhs + 1.0e-15)

    def test_params_validated(self):
        """Test the CertificateParams invariants."""
        with pytest.raises(ValueError):
            geodesic_experiment_params().with_step_size(-1.0)
        with pytest.raises(ValueError):
            CertificateParams(1.0e-3, 0.2, 8.49, 11.28, 0.1, 1.0e-3, 100, 10, 3)
        with pytest.raises(ValueError):
            CertificateParams(1.0e-3, 0.0, 11.28, 8.49, 0.1, 1.0e-3, 100, 10, 3)


class TestTube(SubspaceTrackingTestCase):

    """Test the tube and its limit."""

    @classmethod
    @pytest.fixture(autouse=True, scope='class')
    def base_setup(cls):
        """Set up a feasible configuration."""
        cls.params = geodesic_experiment_params(max_rate_step_size(8.49, 11.28))
        cls.delta_sup = 0.067

    def test_starts_at_initial_distance(self):
        """Test that the tube starts at d0^2 and matches the pointwise bound."""
        tube = tube_bound(50, 0.01, self.delta_sup, self.params)
        assert tube.per_step.shape == (51,)
        self.assert_scalar_within_relative(tube.per_step[0], 0.01, 1.0e-15)
        for t in (1, 7, 50):
            self.assert_scalar_within_relative(tube.per_step[t], theorem1_bound(t, 0.01, self.delta_sup, self.params), 1.0e-14)

    def test_monotone_towards_ultimate(self):
        """Test that the tube decreases to the ultimate bound from above."""
        tube = tube_bound(400, 0.01, self.delta_sup, self.params)
        assert tube.ultimate < 0.01
        assert numpy.all(numpy.diff(tube.per_step) <= 1.0e-15)
        assert numpy.all(tube.per_step >= tube.ultimate * (1.0 - 1.0e-12))
        self.assert_scalar_within_relative(tube.per_step[-1], tube.ultimate, 1.0e-6)

    def test_noise_free_tube_is_geometric(self):
        """Test that with c = eps = 0 the tube is rho_tilde^{K t} d0^2."""
        params = CertificateParams(0.0, 0.0, 3.0, 4.0, 0.1, max_rate_step_size(3.0, 4.0), 20, 3, 3)
        tube = tube_bound(30, 0.01, 0.0, params)
        expected = 0.01 * tube.rho_tilde ** (3.0 * numpy.arange(31))
        numpy.testing.assert_allclose(tube.per_step, expected, rtol=1.0e-12)
        self.assert_scalar_within_absolute(tube.ultimate, 0.0, 0.0)

    def test_entry_on_boundary(self):
        """Test that an initial estimate exactly r_b away enters the tube at (r_b + c)^2."""
        d0_sq = check_tube_entry(0.1, self.params)
        self.assert_scalar_within_relative(d0_sq, (0.1 + 5.0e-5) ** 2, 1.0e-15)
        tube = tube_bound(5, d0_sq, self.delta_sup, self.params)
        self.assert_scalar_within_relative(tube.per_step[0], d0_sq, 1.0e-15)

    def test_entry_outside_radius(self):
        """Test that an initial estimate farther than r_b is refused."""
        with pytest.raises(AssumptionViolated) as excinfo:
            check_tube_entry(0.1 * (1.0 + 1.0e-6), self.params)
        assert excinfo.value.report is None

    def test_initial_distance_beyond_reach(self):
        """Test that tubes cannot start farther than r_b + c from the first subspace."""
        with pytest.raises(AssumptionViolated):
            tube_bound(5, 0.04, self.delta_sup, self.params)
        with pytest.raises(AssumptionViolated):
            theorem1_bound(3, 0.04, self.delta_sup, self.params)

    def test_violations(self):
        """Test that only excesses beyond the relative tolerance and the rounding floor count."""
        bound = numpy.array([1.0e-2, 1.0e-3, 0.0, 0.0])
        measured = numpy.array([1.0e-2 * (1.0 + 1.0e-12), 1.1e-3, 1.0e-26, 1.0e-20])
        numpy.testing.assert_array_equal(tube_violations(measured, bound), [1, 3])
        assert tube_violations(bound, bound).size == 0


class TestSignalAndNoise(SubspaceTrackingTestCase):

    """Test the noise bound and the signal singular values."""

    def test_noise_bound_sound(self):
        """Test ||P_{U_t}^perp W_t||_F <= delta_t on every window of random synthetic datasets."""
        rng = self.make_rng(20)
        window_length = 12
        for instance in range(NUM_INSTANCES):
            noise_norm = 10.0 ** rng.uniform(-4.0, -1.0)
            drift = 10.0 ** rng.uniform(-4.0, -2.0)
            dataset = synthetic_dataset(5, 2, noise_norm, drift, 20, instance)
            params = CertificateParams(noise_norm, drift, 1.0, 1.0, 0.1, 1.0e-3, window_length, 1, 2)
            for t in range(window_length, dataset.num_steps + 1):
                window = dataset.window(t, window_length)
                residual = window - numpy.dot(dataset.truths[t].basis, numpy.dot(dataset.truths[t].basis.T, window))
                assert numpy.linalg.norm(residual) <= delta_bound(window, params)

    def test_noise_bound_monotone(self):
        """Test that delta grows with eps and with c, and that the window length is checked."""
        data = self.make_rng(21).standard_normal((4, 6))
        base = CertificateParams(1.0e-3, 1.0e-3, 1.0, 1.0, 0.1, 1.0e-3, 6, 1, 2)
        assert delta_bound(data, base._replace(noise_bound=2.0e-3)) > delta_bound(data, base)
        assert delta_bound(data, base._replace(drift_bound=2.0e-3)) > delta_bound(data, base)
        self.assert_scalar_within_absolute(delta_bound(data, base._replace(noise_bound=0.0, drift_bound=0.0)), 0.0, 0.0)
        with pytest.raises(DimensionMismatch):
            delta_bound(data[:, :5], base)

    def test_signal_bounds(self):
        """Test the extreme singular values of P_U W, with sigma_d = 0 for too few columns."""
        rng = self.make_rng(22)
        truth = self.random_subspace(5, 2, rng)
        coefficients = numpy.diag([3.0, 0.5])
        lower, upper = signal_bounds(numpy.dot(truth.basis, coefficients), truth)
        self.assert_scalar_within_relative(lower, 0.5, 1.0e-12)
        self.assert_scalar_within_relative(upper, 3.0, 1.0e-12)
        lower, _ = signal_bounds(truth.basis[:, :1], truth)
        assert lower == 0.0

    def test_squared_distance_trajectory(self):
        """Test the pairwise squared distances."""
        rng = self.make_rng(23)
        truths = [self.random_subspace(5, 2, rng) for _ in range(3)]
        estimates = [self.random_subspace(5, 2, rng) for _ in range(3)]
        expected = [chordal_distance(estimate, truth) ** 2 for estimate, truth in zip(estimates, truths)]
        numpy.testing.assert_allclose(squared_distance_trajectory(estimates, truths), expected, rtol=1.0e-12)


class TestDecaySoundness(SubspaceTrackingTestCase):

    """Monte-Carlo checks of the inequalities behind the tube certificates."""

    def test_single_step_decay(self):
        """Test d_2(U_hat+, U)^2 <= d_2^2 - rho ||grad d_2^2||^2 + gamma_r(delta) for one gradient step."""
        rng = self.make_rng(30)
        radius = 0.3
        for instance in range(NUM_INSTANCES):
            truth = self.random_subspace(6, 2, rng)
            data = numpy.dot(truth.basis, rng.standard_normal((2, 8))) + 10.0 ** rng.uniform(-4.0, -1.0) * rng.standard_normal((6, 8))
            estimate = perturbed_initial_estimate(truth, radius * rng.uniform(), instance)
            sigma_lower, sigma_upper = signal_bounds(data, truth)
            step_size = rng.uniform(0.05, 1.0) * step_size_upper_limit(sigma_lower, sigma_upper)
            params = CertificateParams(0.0, 0.0, sigma_lower, sigma_upper, radius, step_size, 8, 1, 2)
            noise = numpy.linalg.norm(data - numpy.dot(truth.basis, numpy.dot(truth.basis.T, data)))

            d_sq = chordal_distance(estimate, truth) ** 2
            grad_norm_sq = squared_distance_gradient(estimate, truth).norm ** 2
            bound = single_step_bound(d_sq, noise, params, grad_norm_sq, radius=radius)
            moved = gd_step(estimate, numpy.dot(data, data.T), step_size)
            assert chordal_distance(moved, truth) ** 2 <= bound + 1.0e-12

    def test_gradient_dominance(self):
        """Test ||grad d_2^2||^2 >= 4 (1 - r_b^2) d_2^2 inside the ball of radius r_b."""
        rng = self.make_rng(31)
        for instance in range(NUM_INSTANCES):
            tube_radius = rng.uniform(0.01, 0.9)
            truth = self.random_subspace(7, 3, rng)
            estimate = perturbed_initial_estimate(truth, tube_radius * rng.uniform(), instance)
            d_sq = chordal_distance(estimate, truth) ** 2
            grad_norm_sq = squared_distance_gradient(estimate, truth).norm ** 2
            assert grad_norm_sq >= 4.0 * (1.0 - tube_radius ** 2) * d_sq - 1.0e-14

    def test_curvature_bounded(self):
        """Test |f''(s)| <= 4 for f(s) = d_2(Exp_X(s H), U)^2 along unit-speed geodesics."""
        rng = self.make_rng(32)
        step = 1.0e-4
        for _ in range(NUM_INSTANCES):
            truth = self.random_subspace(6, 2, rng)
            estimate = self.random_subspace(6, 2, rng)
            direction = tangent_project(estimate, rng.standard_normal((6, 2)))
            direction = direction.scaled(1.0 / direction.norm)
            at = rng.uniform(-1.0, 1.0)

            def squared_distance(s):
                return chordal_distance(exp_map(direction, s), truth) ** 2

            second = (squared_distance(at + step) - 2.0 * squared_distance(at) + squared_distance(at - step)) / step ** 2
            assert abs(second) <= 4.0 + 1.0e-3
