# -*- coding: utf-8 -*-
"""Tests for experiment configuration validation."""
import os

import colander

import pytest

from subtrack.tracking.constant import DEFAULT_REFRESH_INTERVAL, GREAT_TRACKER, SYNTHETIC_GEODESIC_MODE
from subtrack.tracking.schemas import build_config, load_experiment_config, numeric_step_sizes


CONFIG_DIR = os.path.join(os.path.dirname(os.path.abspath(__file__)), os.pardir, os.pardir, os.pardir, 'configs')


class TestBuildConfig(object):

    """Test defaults, conversions and cross-key checks."""

    def test_defaults(self):
        """Test that an empty configuration takes every default."""
        config = build_config({})
        assert config.experiment['mode'] == SYNTHETIC_GEODESIC_MODE
        assert config.experiment['seed'] == 0
        assert config.tracker['name'] == GREAT_TRACKER
        assert config.tracker['step_sizes'] == ['cvg', 'mid', 'ub']
        assert config.tracker['forgetting_factor'] is None
        assert config.certificates['noise_bound'] is None
        assert config.synthetic['baselines'] == []
        assert config.validate['dims'] is None
        assert config.numerics['refresh_interval'] == DEFAULT_REFRESH_INTERVAL
        assert config.path is None

    def test_conversions(self):
        """Test ints, floats, booleans and comma separated lists."""
        config = build_config({
            'tracker': {'dim': '4', 'line_search': 'true', 'step_sizes': '1e-3, cvg'},
            'certificates': {'noise_bound': '1e-3'},
            'synthetic': {'baselines': 'grouse,past'},
            'validate': {'dims': '2, 3', 'window_lengths': ''},
        })
        assert config.tracker['dim'] == 4
        assert config.tracker['line_search'] is True
        assert config.tracker['step_sizes'] == ['1e-3', 'cvg']
        assert config.certificates['noise_bound'] == 1.0e-3
        assert config.synthetic['baselines'] == ['grouse', 'past']
        assert config.validate['dims'] == [2, 3]
        assert config.validate['window_lengths'] == []

    @pytest.mark.parametrize('sections', [
        {'tracker': {'dim': '0'}},
        {'tracker': {'step_sizes': 'fast'}},
        {'tracker': {'step_sizes': '-1e-3'}},
        {'tracker': {'window_mode': 'discounted'}},
        {'tracker': {'name': 'oja'}},
        {'synthetic': {'baselines': 'great, oja'}},
        {'certificates': {'tube_radius': '1.5'}},
        {'sysid': {'init_fraction': '0.6', 'validate_fraction': '0.5'}},
        {'experiment': {'mode': 'sysid'}},
        {'experiment': {'max_num_threads': '0'}},
    ])
    def test_invalid(self, sections):
        """Test that out of range and inconsistent values are refused."""
        with pytest.raises(colander.Invalid):
            build_config(sections)

    def test_numeric_step_sizes(self):
        """Test that symbolic step sizes are refused where no certificate constants exist."""
        assert numeric_step_sizes(build_config({'tracker': {'step_sizes': '1e-5, 2e-5'}})) == [1.0e-5, 2.0e-5]
        with pytest.raises(colander.Invalid):
            numeric_step_sizes(build_config({'tracker': {'step_sizes': 'cvg'}}))


class TestLoadExperimentConfig(object):

    """Test reading experiment files."""

    def test_shipped_configs(self):
        """Test that every shipped experiment file validates; logging sections are ignored."""
        for name in ('synthetic_geodesic.ini', 'static_balanced.ini', 'sysid.ini', 'validate.ini', 'certify.ini'):
            config = load_experiment_config(os.path.join(CONFIG_DIR, name))
            assert config.path.endswith(name)

    def test_plant_file_resolved_next_to_config(self):
        """Test that a relative plant file is found next to the experiment file."""
        config = load_experiment_config(os.path.join(CONFIG_DIR, 'sysid.ini'))
        assert os.path.isfile(config.sysid['plant_file'])
        assert os.path.isabs(config.sysid['plant_file'])

    def test_overrides(self, tmpdir):
        """Test that seed and output directory given on the command line win over the file."""
        config = load_experiment_config(os.path.join(CONFIG_DIR, 'static_balanced.ini'), seed=17, output_dir=str(tmpdir))
        assert config.experiment['seed'] == 17
        assert config.experiment['output_dir'] == str(tmpdir)

    def test_missing_file(self, tmpdir):
        """Test that an unreadable file raises IOError."""
        with pytest.raises(IOError):
            load_experiment_config(str(tmpdir.join('missing.ini')))
