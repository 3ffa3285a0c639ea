# -*- coding: utf-8 -*-
"""End-to-end tests of the experiments: certified synthetic tracking, certificates, identification and validation."""
import io
import os

import numpy

import pytest

from subtrack.tests.tracking.tracking_test_case import SubspaceTrackingTestCase
from subtrack.tracking.certs import CertificateParams, signal_requirement
from subtrack.tracking.data_containers import read_csv, read_manifest
from subtrack.tracking.exceptions import AssumptionViolated, EmptyGrid, Infeasible
from subtrack.tracking.experiments import CERTIFICATE_COLUMNS, CERTIFIED_TRAJECTORY_COLUMNS, Candidate, MEASURED_TRAJECTORY_COLUMNS, RHO_CURVE_POINTS, VALIDATION_COLUMNS, _candidate_key, certify, run_synthetic, run_sysid, validate, validation_grid
from subtrack.tracking.schemas import build_config


#: A first order plant: x_{t+1} = 0.8 x_t + v_t, y_t = x_t
SMALL_PLANT = '\n'.join([
    '[system]',
    'state_dim = 1',
    'input_dim = 1',
    'output_dim = 1',
    'horizon = 200',
    'mode = constant',
    '[start]',
    'a = 0.8',
    'b = 1',
    'c = 1',
    'd = 0',
])


def geodesic_sections(output_dir):
    """The Gr(5, 3) geodesic experiment with three step sizes and both baselines."""
    return {
        'experiment': {'seed': '0', 'output_dir': output_dir, 'max_num_threads': '3'},
        'tracker': {'dim': '3', 'window_length': '100', 'inner_iters': '10', 'step_sizes': 'cvg, mid, ub'},
        'certificates': {'noise_bound': '1e-3', 'drift_bound': '5e-5', 'tube_radius': '0.1'},
        'synthetic': {'ambient_dim': '5', 'steps': '150', 'init_radius': '0.09', 'baselines': 'grouse, past'},
    }


def sysid_sections(tmpdir, **tracker):
    """Identification of :data:`SMALL_PLANT` with t_ini = t_fut = 2 (behavior dimension 5 in R^8)."""
    plant = tmpdir.join('plant.ini')
    plant.write(SMALL_PLANT)
    tracker_section = {'dim': '5', 'window_length': '20', 'inner_iters': '2', 'step_sizes': '1e-3'}
    tracker_section.update(tracker)
    return {
        'experiment': {'mode': 'sysid', 'seed': '3', 'output_dir': str(tmpdir.join('out'))},
        'tracker': tracker_section,
        'sysid': {'plant_file': str(plant), 't_ini': '2', 't_fut': '2', 'repetitions': '2', 'trackers': 'great, grouse, past'},
    }


class TestSynthetic(SubspaceTrackingTestCase):

    """Test certified tracking of a drifting subspace."""

    @classmethod
    @pytest.fixture(autouse=True, scope='class')
    def base_setup(cls, tmpdir_factory):
        """Run the geodesic experiment once."""
        cls.output_dir = str(tmpdir_factory.mktemp('geodesic'))
        cls.result = run_synthetic(build_config(geodesic_sections(cls.output_dir)))

    def test_tube_is_never_violated(self):
        """Test that the measured squared distance stays inside the tube at every step, for every step size."""
        assert list(self.result.step_sizes.keys()) == ['cvg', 'mid', 'ub']
        for label, distances in self.result.trajectories.items():
            tube = self.result.tubes[label]
            bound = tube.per_step[1:]
            assert distances.shape == bound.shape == (51,)
            assert numpy.all(distances ** 2 <= bound)
            assert numpy.all(bound >= tube.ultimate)

    def test_step_sizes_ordered(self):
        """Test ub < mid < cvg, with mid the midpoint and every step feasible."""
        step_sizes = self.result.step_sizes
        assert step_sizes['ub'] < step_sizes['mid'] < step_sizes['cvg']
        self.assert_scalar_within_relative(step_sizes['mid'], 0.5 * (step_sizes['ub'] + step_sizes['cvg']), 1.0e-15)
        assert all(report.holds for report in self.result.reports.values())

    def test_artifacts(self):
        """Test the trajectory, report and dataset files."""
        columns, rows = read_csv(os.path.join(self.output_dir, 'synthetic_great_alpha_cvg.csv'))
        assert columns == CERTIFIED_TRAJECTORY_COLUMNS
        numpy.testing.assert_array_equal(rows[:, 0], numpy.arange(100, 151))
        numpy.testing.assert_allclose(rows[:, 1], self.result.trajectories['cvg'], rtol=1.0e-15)
        assert numpy.all(rows[:, 1] <= rows[:, 2])

        for name in ('grouse', 'past'):
            columns, rows = read_csv(os.path.join(self.output_dir, 'synthetic_{0}.csv'.format(name)))
            assert columns == MEASURED_TRAJECTORY_COLUMNS
            assert rows.shape == (51, 3)

        columns, rows = read_csv(os.path.join(self.output_dir, 'assumption4_report.csv'))
        assert columns[:3] == ['alpha', 'holds', 'slack']
        numpy.testing.assert_array_equal(rows[:, 1], 1.0)

        manifest = read_manifest(os.path.join(self.output_dir, 'manifest.json'))
        assert (manifest['ambient_dim'], manifest['dim'], manifest['num_steps']) == (5, 3, 150)
        _, bases = read_csv(os.path.join(self.output_dir, 'true_bases.csv'))
        assert bases.shape == (151, 15)

    def test_deterministic(self, tmpdir):
        """Test that rerunning with the same seed writes byte-identical files."""
        rerun = run_synthetic(build_config(geodesic_sections(str(tmpdir))))
        assert len(rerun.artifacts) == len(self.result.artifacts)
        for first, second in zip(self.result.artifacts, rerun.artifacts):
            assert os.path.basename(first) == os.path.basename(second)
            with io.open(first, 'rb') as one, io.open(second, 'rb') as two:
                assert one.read() == two.read()


class TestSyntheticVariants(SubspaceTrackingTestCase):

    """Test the exact-data and uncertified variants of the synthetic experiment."""

    def test_noise_free_static_subspace(self, tmpdir):
        """Test exponential convergence inside the tube on exact, balanced samples of a static subspace."""
        config = build_config({
            'experiment': {'seed': '1', 'output_dir': str(tmpdir)},
            'tracker': {'dim': '3', 'window_length': '20', 'inner_iters': '3', 'step_sizes': 'cvg'},
            'certificates': {'noise_bound': '0', 'drift_bound': '0', 'tube_radius': '0.1'},
            'synthetic': {'ambient_dim': '8', 'steps': '120', 'excitation': 'balanced'},
        })
        result = run_synthetic(config)
        assert result.delta_sup == 0.0
        assert result.sigma_lower / result.sigma_upper >= 0.866
        tube = result.tubes['cvg']
        assert tube.ultimate == 0.0

        distances = result.trajectories['cvg']
        assert distances.shape == (101,)
        bound = numpy.sqrt(tube.per_step[1:]) * (1.0 + 1.0e-9)
        assert numpy.all(distances <= numpy.maximum(bound, 1.0e-12))
        assert distances[-1] < 1.0e-8

    def test_line_search_is_uncertified(self, tmpdir):
        """Test that line search runs write measured distances only."""
        sections = geodesic_sections(str(tmpdir))
        sections['tracker'].update({'line_search': 'true', 'step_sizes': '1e-3'})
        sections['synthetic'].update({'steps': '110', 'baselines': ''})
        result = run_synthetic(build_config(sections))
        assert not result.tubes
        columns, rows = read_csv(os.path.join(str(tmpdir), 'synthetic_great_alpha_1e-3.csv'))
        assert columns == MEASURED_TRAJECTORY_COLUMNS
        assert rows.shape == (11, 3)

    def test_refuses_infeasible_step(self, tmpdir):
        """Test that a step size failing the feasibility condition is refused after writing the report."""
        sections = geodesic_sections(str(tmpdir))
        sections['tracker']['step_sizes'] = '1e-8'
        sections['synthetic']['baselines'] = ''
        with pytest.raises(AssumptionViolated) as excinfo:
            run_synthetic(build_config(sections))
        assert excinfo.value.report.slack < 0.0
        _, rows = read_csv(os.path.join(str(tmpdir), 'assumption4_report.csv'))
        numpy.testing.assert_array_equal(rows[:, 1], 0.0)

    def test_start_on_tube_boundary(self, tmpdir):
        """Test that the default initial estimate, exactly r_b from the first tracked subspace, is certified."""
        sections = geodesic_sections(str(tmpdir))
        del sections['synthetic']['init_radius']
        sections['tracker']['step_sizes'] = 'cvg'
        sections['synthetic'].update({'steps': '110', 'baselines': ''})
        result = run_synthetic(build_config(sections))
        tube = result.tubes['cvg']
        assert result.initial_distance_sq <= (0.1 + 5.0e-5) ** 2 * (1.0 + 1.0e-9)
        assert numpy.all(result.trajectories['cvg'] ** 2 <= tube.per_step[1:] * (1.0 + 1.0e-9))

    def test_refuses_start_outside_tube(self, tmpdir):
        """Test that an initial estimate placed beyond r_b is refused before tracking."""
        sections = geodesic_sections(str(tmpdir))
        sections['synthetic'].update({'init_radius': '0.5', 'baselines': ''})
        with pytest.raises(AssumptionViolated) as excinfo:
            run_synthetic(build_config(sections))
        assert excinfo.value.report is None
        assert not os.path.exists(os.path.join(str(tmpdir), 'synthetic_great_alpha_cvg.csv'))

    def test_tube_violation_raises(self, tmpdir):
        """Test that a run whose noise bound is understated leaves the tube and raises after writing its files."""
        config = build_config({
            'experiment': {'seed': '2', 'output_dir': str(tmpdir)},
            'tracker': {'dim': '3', 'window_length': '20', 'inner_iters': '3', 'step_sizes': 'cvg'},
            'certificates': {'noise_bound': '1e-2', 'drift_bound': '0', 'tube_radius': '0.1', 'delta_sup': '0'},
            'synthetic': {'ambient_dim': '8', 'steps': '60', 'excitation': 'balanced', 'baselines': ''},
        })
        with pytest.raises(AssumptionViolated) as excinfo:
            run_synthetic(config)
        assert excinfo.value.report.holds
        columns, rows = read_csv(os.path.join(str(tmpdir), 'synthetic_great_alpha_cvg.csv'))
        assert columns == CERTIFIED_TRAJECTORY_COLUMNS
        # squared distance against its bound
        assert numpy.any(rows[:, 4] > rows[:, 5])


class TestCertify(SubspaceTrackingTestCase):

    """Test certificate evaluation from configured constants."""

    @staticmethod
    def sections(output_dir, **certificates):
        """The constants of the geodesic experiment."""
        values = {
            'noise_bound': '1e-3',
            'drift_bound': '5e-5',
            'sigma_lower': '8.49',
            'sigma_upper': '11.28',
            'delta_sup': '0.067',
            'initial_distance': '0.1',
            'horizon': '150',
        }
        values.update(certificates)
        return {
            'experiment': {'output_dir': output_dir},
            'tracker': {'dim': '3', 'window_length': '100', 'inner_iters': '10', 'step_sizes': 'cvg, mid, ub'},
            'certificates': values,
        }

    def test_step_sizes_and_files(self, tmpdir):
        """Test the tuned step sizes and the written tubes."""
        result = certify(build_config(self.sections(str(tmpdir))))
        assert '{0:.2e}'.format(result.step_sizes['cvg']) == '1.11e-03'
        self.assert_scalar_within_relative(result.step_sizes['ub'], 4.20e-5, 0.05)

        columns, rows = read_csv(os.path.join(str(tmpdir), 'certificate_alpha_ub.csv'))
        assert columns == CERTIFICATE_COLUMNS
        assert rows.shape == (151, 3)
        # the tube starts from the entry distance plus one drift step
        self.assert_scalar_within_relative(rows[0, 1], 0.1 + 5.0e-5, 1.0e-14)
        numpy.testing.assert_allclose(rows[:, 1] ** 2, result.tubes['ub'].per_step, rtol=1.0e-14)

        _, curve = read_csv(os.path.join(str(tmpdir), 'rho_curve.csv'))
        assert curve.shape == (RHO_CURVE_POINTS, 3)
        _, report = read_csv(os.path.join(str(tmpdir), 'assumption4_report.csv'))
        assert report.shape == (3, 9)
        for alpha, requirement in report[:, [0, 8]]:
            params = CertificateParams(1.0e-3, 5.0e-5, 8.49, 11.28, 0.1, alpha, 100, 10, 3)
            self.assert_scalar_within_relative(requirement, signal_requirement(0.067, params), 1.0e-15)

    def test_violation(self, tmpdir):
        """Test that a noise bound beyond the feasible range is refused."""
        sections = self.sections(str(tmpdir), delta_sup='1.0')
        sections['tracker']['step_sizes'] = 'cvg'
        with pytest.raises(AssumptionViolated):
            certify(build_config(sections))
        assert os.path.isfile(os.path.join(str(tmpdir), 'assumption4_report.csv'))

    def test_no_feasible_step(self, tmpdir):
        """Test that the ultimate-bound step cannot be tuned when nothing is feasible."""
        with pytest.raises(Infeasible):
            certify(build_config(self.sections(str(tmpdir), delta_sup='10')))

    def test_initial_distance_outside_tube(self, tmpdir):
        """Test that an initial distance beyond r_b is refused."""
        with pytest.raises(AssumptionViolated):
            certify(build_config(self.sections(str(tmpdir), initial_distance='0.2')))


class TestSysid(SubspaceTrackingTestCase):

    """Test online identification of a small plant."""

    def test_exact_identification(self, tmpdir):
        """Test that GREAT predicts noise-free outputs of a time-invariant plant almost exactly."""
        result = run_sysid(build_config(sysid_sections(tmpdir)))
        numpy.testing.assert_array_equal(result.times, numpy.arange(80, 198))
        assert set(result.errors.keys()) == set(['great', 'grouse', 'past'])
        for errors in result.errors.values():
            assert errors.shape == (2, 118)
            assert numpy.all(numpy.isfinite(errors))
        assert numpy.mean(result.errors['great']) < 1.0e-6

        columns, rows = read_csv(os.path.join(str(tmpdir.join('out')), 'sysid_errors.csv'))
        assert columns == ['t', 'great_mean', 'great_std', 'grouse_mean', 'grouse_std', 'past_mean', 'past_std']
        assert rows.shape == (118, 7)

    def test_disturbance_raises_errors(self, tmpdir):
        """Test that a measurement error inside the test split shows up in the prediction error."""
        sections = sysid_sections(tmpdir)
        sections['sysid'].update({'noise_std': '0', 'disturbance_step': '20', 'trackers': 'great'})
        result = run_sysid(build_config(sections))
        errors = result.errors['great'].mean(axis=0)
        # the measurement error enters the regressor at t = test_start + 20, index 20
        assert numpy.max(errors[20:22]) > 1.0e3 * numpy.max(errors[:20])


class TestValidate(SubspaceTrackingTestCase):

    """Test the hyperparameter grid search."""

    def test_picks_behavior_dimension(self, tmpdir):
        """Test that d = k + m (L + 1) = 5 wins and a rank deficient d = 6 scores inf."""
        sections = sysid_sections(tmpdir)
        sections['validate'] = {'dims': '4, 5, 6', 'window_lengths': '10, 20'}
        result = validate(build_config(sections))
        assert result.best.dim == 5
        scores = dict(result.table)
        assert numpy.isinf(scores[Candidate(6, 10, None)])
        assert scores[Candidate(4, 10, None)] > scores[Candidate(5, 10, None)]

        with io.open(os.path.join(str(tmpdir.join('out')), 'validation.csv'), 'r') as csv_file:
            lines = csv_file.read().splitlines()
        assert lines[0] == ','.join(VALIDATION_COLUMNS)
        assert len(lines) == 7
        assert lines[1].startswith('great,4,10,nan,')

    def test_grid_falls_back_to_tracker(self):
        """Test that unset grid lists take the [tracker] values."""
        config = build_config({'tracker': {'dim': '7', 'window_length': '30'}, 'validate': {'dims': '2, 3'}})
        assert validation_grid(config) == [Candidate(2, 30, None), Candidate(3, 30, None)]

    def test_grid_collapses_unused_axes(self):
        """Test that GROUSE validates only over d and PAST over d and the forgetting factor."""
        sections = {
            'tracker': {'window_length': '30'},
            'validate': {'tracker': 'grouse', 'dims': '2, 3', 'window_lengths': '10, 20', 'forgetting_factors': '0.9, 0.99'},
        }
        assert validation_grid(build_config(sections)) == [Candidate(2, 30, None), Candidate(3, 30, None)]

        sections['validate']['tracker'] = 'past'
        assert validation_grid(build_config(sections)) == [
            Candidate(2, 30, 0.9), Candidate(2, 30, 0.99), Candidate(3, 30, 0.9), Candidate(3, 30, 0.99),
        ]

    def test_empty_grid(self, tmpdir):
        """Test that an explicitly empty list leaves nothing to validate."""
        sections = sysid_sections(tmpdir)
        sections['validate'] = {'window_lengths': ''}
        with pytest.raises(EmptyGrid):
            validate(build_config(sections))

    def test_tie_breaks(self):
        """Test that equal errors go to the smaller dimension, then the shorter window."""
        table = [
            (Candidate(6, 10, None), 0.5),
            (Candidate(5, 20, None), 0.5),
            (Candidate(5, 10, None), 0.5),
            (Candidate(4, 10, None), 0.7),
        ]
        assert min(table, key=lambda entry: _candidate_key(*entry))[0] == Candidate(5, 10, None)
