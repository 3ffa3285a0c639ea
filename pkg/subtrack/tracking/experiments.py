# -*- coding: utf-8 -*-
r"""Config-driven experiments: synthetic tracking with certificates, online identification of LTV behaviors,
hyperparameter validation and stand-alone certificate evaluation.

Every experiment reads an :class:`~subtrack.tracking.schemas.ExperimentConfig`, writes its CSV artifacts below
``[experiment] output_dir`` and returns an in-memory summary of what it wrote. Runs are deterministic in the
configured seed: all randomness is drawn from child streams of that seed, and independent runs (step sizes,
trackers, test repetitions) write separate files, so executing them on a thread pool changes nothing.

"""
from __future__ import division
import collections
import concurrent.futures
import copy
import logging

import colander
import numpy

from subtrack.tracking import behavior, certs, simgen
from subtrack.tracking.constant import DISCOUNTED_WINDOW, GREAT_TRACKER, GROUSE_TRACKER, MAX_RATE, MIN_ULTIMATE, PAST_TRACKER, STEP_SIZE_CONVERGENCE, STEP_SIZE_MIDPOINT, STEP_SIZE_ULTIMATE
from subtrack.tracking.data_containers import ArtifactLog
from subtrack.tracking.exceptions import AssumptionViolated, EmptyGrid, InvalidRho, RankDeficient, TooShort
from subtrack.tracking.grassmann import chordal_distance
from subtrack.tracking.great import TrackerConfig, initialize
from subtrack.tracking.linkers import TRACKER_TYPES_TO_TRACKER_CLASSES
from subtrack.tracking.schemas import ExperimentConfigSchema, numeric_step_sizes
from subtrack.tracking.timing import timing_context


_log = logging.getLogger(__name__)

ASSUMPTION_REPORT_COLUMNS = ['alpha', 'holds', 'slack', 'rho', 'rho_tilde', 'delta_sup', 'sigma_lower', 'sigma_upper', 'signal_requirement_k1']
CERTIFIED_TRAJECTORY_COLUMNS = ['t', 'd2_measured', 'bound_eq11', 'bound_eq12', 'd2_squared', 'bound_eq11_squared', 'bound_eq12_squared']
MEASURED_TRAJECTORY_COLUMNS = ['t', 'd2_measured', 'd2_squared']
CERTIFICATE_COLUMNS = ['t', 'bound_eq11', 'bound_eq12']
RHO_CURVE_COLUMNS = ['alpha', 'rho', 'rho_tilde']
VALIDATION_COLUMNS = ['tracker', 'dim', 'window_length', 'forgetting_factor', 'mean_error']

#: Number of step sizes tabulated in ``rho_curve.csv``
RHO_CURVE_POINTS = 200

SyntheticResult = collections.namedtuple('SyntheticResult', [
    'step_sizes',
    'reports',
    'trajectories',
    'tubes',
    'baselines',
    'delta_sup',
    'sigma_lower',
    'sigma_upper',
    'initial_distance_sq',
    'artifacts',
])

SysidResult = collections.namedtuple('SysidResult', [
    'times',
    'errors',
    'artifacts',
])

#: One point of the validation grid; ``forgetting_factor`` is None for undiscounted trackers
Candidate = collections.namedtuple('Candidate', [
    'dim',
    'window_length',
    'forgetting_factor',
])

ValidationResult = collections.namedtuple('ValidationResult', [
    'best',
    'mean_error',
    'table',
    'artifacts',
])

CertifyResult = collections.namedtuple('CertifyResult', [
    'step_sizes',
    'reports',
    'tubes',
    'artifacts',
])


def _run_parallel(jobs, max_num_threads):
    """Run the zero-argument callables in ``jobs`` (an ordered mapping) on a thread pool; results keep the order."""
    with concurrent.futures.ThreadPoolExecutor(max_workers=max_num_threads) as executor:
        futures = collections.OrderedDict((key, executor.submit(job)) for key, job in jobs.items())
        return collections.OrderedDict((key, future.result()) for key, future in futures.items())


def _config_error(section, key, message):
    """Build the colander.Invalid reported for an inconsistent configuration value."""
    return colander.Invalid(ExperimentConfigSchema()[section][key], message)


def _required(config, section, key):
    """Return a configuration value that this experiment cannot do without."""
    value = getattr(config, section)[key]
    if value is None:
        raise _config_error(section, key, '[{0}] {1} is required for this experiment'.format(section, key))
    return value


def _great_forgetting_factor(config):
    """Forgetting factor of the GREAT window, None for a sliding window."""
    if config.tracker['window_mode'] == DISCOUNTED_WINDOW:
        return config.tracker['forgetting_factor']
    return None


def build_tracker(name, initial_estimate, config, step_size=None, window_length=None, forgetting_factor=None):
    """Construct the tracker ``name`` starting from ``initial_estimate``.

    GREAT takes its window and inner iterations from ``[tracker]`` (``window_length`` and ``forgetting_factor``
    override them); GROUSE and PAST take their parameters from ``[baselines]`` (``forgetting_factor`` overrides the
    PAST forgetting factor).

    :rtype: SubspaceTrackerInterface

    """
    tracker_class = TRACKER_TYPES_TO_TRACKER_CLASSES[name].tracker_class
    if name == GREAT_TRACKER:
        tracker_config = TrackerConfig(
            initial_estimate.ambient_dim,
            initial_estimate.dim,
            window_length if window_length is not None else config.tracker['window_length'],
            step_size,
            inner_iters=config.tracker['inner_iters'],
            line_search=config.tracker['line_search'],
            forgetting_factor=forgetting_factor,
            refresh_interval=config.numerics['refresh_interval'],
        )
        return tracker_class(tracker_config, initial_estimate)
    if name == GROUSE_TRACKER:
        return tracker_class(initial_estimate, config.baselines['grouse_step_size'])
    if name == PAST_TRACKER:
        return tracker_class(
            initial_estimate,
            forget=forgetting_factor if forgetting_factor is not None else config.baselines['past_forgetting_factor'],
            initial_scale=config.baselines['past_initial_scale'],
        )
    raise ValueError('unknown tracker {0}'.format(name))


def resolve_step_sizes(items, delta_sup, params):
    r"""Map configured step sizes to values.

    ``cvg`` is the rate-maximizing step, ``ub`` the minimizer of the ultimate bound and ``mid`` their midpoint;
    numbers are used as given and labelled by their spelling.

    :rtype: collections.OrderedDict from label to float64

    """
    resolved = collections.OrderedDict()
    cache = {}

    def named(objective):
        if objective not in cache:
            cache[objective] = certs.optimize_step_size(objective, delta_sup, params)
        return cache[objective]

    for item in items:
        if item == STEP_SIZE_CONVERGENCE:
            resolved[item] = named(MAX_RATE)
        elif item == STEP_SIZE_ULTIMATE:
            resolved[item] = named(MIN_ULTIMATE)
        elif item == STEP_SIZE_MIDPOINT:
            resolved[item] = 0.5 * (named(MAX_RATE) + named(MIN_ULTIMATE))
        else:
            resolved[item] = float(item)
    return resolved


def _report_row(report, params):
    """One row of ``assumption4_report.csv``."""
    return [
        report.step_size,
        1.0 if report.holds else 0.0,
        report.slack,
        report.rho,
        report.rho_tilde,
        report.delta_sup,
        params.sigma_lower,
        params.sigma_upper,
        certs.signal_requirement(report.delta_sup, params.with_step_size(report.step_size)),
    ]


def _check_step_sizes(step_sizes, delta_sup, params, artifacts, enforce):
    """Run the feasibility check for every step size and write the report; raise if ``enforce`` and any fails."""
    reports = collections.OrderedDict()
    for label, step_size in step_sizes.items():
        try:
            reports[label] = certs.assumption4_check(params.with_step_size(step_size), delta_sup)
        except InvalidRho as exception:
            if enforce:
                raise
            _log.warning('step size {0}: {1}'.format(label, exception))
            continue
        _log.info('step size {0} = {1:.6e}: feasibility slack {2:.6e}'.format(label, step_size, reports[label].slack))
    artifacts.csv(
        'assumption4_report.csv',
        ASSUMPTION_REPORT_COLUMNS,
        [_report_row(report, params) for report in reports.values()],
    )

    failed = [(label, report) for label, report in reports.items() if not report.holds]
    if enforce and failed:
        label, report = failed[0]
        for other_label, other in failed:
            _log.error('feasibility condition fails for step size {0} = {1:.6e}: slack = {2:.6e}'.format(
                other_label, other.step_size, other.slack))
        raise AssumptionViolated(
            'refusing to certify: feasibility condition fails for step size {0} = {1:.6e} with slack {2:.6e}'.format(
                label,
                report.step_size,
                report.slack,
            ),
            report=report,
        )
    return reports


def calibrate_signal_bounds(dataset, window_length):
    r"""Extreme singular values of ``P_{U_t} W_t`` over all full windows ``t = T, ..., N``.

    :return: ``(sigma_lower, sigma_upper)``
    :rtype: tuple of two float64

    """
    lowers, uppers = [], []
    for t in range(window_length, dataset.num_steps + 1):
        lower, upper = certs.signal_bounds(dataset.window(t, window_length), dataset.truths[t])
        lowers.append(lower)
        uppers.append(upper)
    return min(lowers), max(uppers)


def worst_noise_bound(dataset, params):
    """Largest ``delta_t`` over all full windows of ``dataset``."""
    return max(
        certs.delta_bound(dataset.window(t, params.window_length), params)
        for t in range(params.window_length, dataset.num_steps + 1)
    )


def _track_dataset(tracker, dataset, first_step):
    """Feed ``u_t`` for ``t = first_step, ..., N`` and measure ``d_2(U_hat_t, U_t)`` after each sample."""
    distances = numpy.zeros(dataset.num_steps - first_step + 1)
    for t in range(first_step, dataset.num_steps + 1):
        distances[t - first_step] = chordal_distance(tracker.update(dataset.sample(t)), dataset.truths[t])
    return distances


def run_synthetic(config):
    r"""Track a synthetic drifting subspace and compare the measured distance with the certified tube.

    The dataset holds ``U_0, ..., U_N`` and ``u_1, ..., u_N``. With window length ``T`` the initial estimate
    ``U_hat_{T-1}`` is drawn at distance ``r_b`` from ``U_T``, the window is prefilled with ``u_1, ..., u_{T-1}`` and
    tracking runs for ``t = T, ..., N``. The constants ``sigma_lower``, ``sigma_upper`` and ``delta_sup`` are
    calibrated from the dataset unless ``[certificates]`` sets them.

    Writes the dataset artifacts, ``assumption4_report.csv``, ``synthetic_great_alpha_<label>.csv`` per step size
    and ``synthetic_<baseline>.csv`` per baseline.

    :rtype: SyntheticResult
    :raise: AssumptionViolated (after writing the report) if a fixed-step run cannot be certified: a step size fails
        the feasibility condition or the initial estimate lies farther than ``r_b`` from ``U_T``. Also raised, after
        every trajectory is written, when a measured squared distance leaves its tube.

    """
    experiment, tracker, cert, synthetic = config.experiment, config.tracker, config.certificates, config.synthetic
    seed = experiment['seed']
    window_length, dim = tracker['window_length'], tracker['dim']
    if synthetic['steps'] < window_length:
        raise TooShort('{0:d} steps cannot fill a window of length {1:d}'.format(synthetic['steps'], window_length))
    noise_bound = cert['noise_bound'] if cert['noise_bound'] is not None else 0.0
    drift_bound = cert['drift_bound'] if cert['drift_bound'] is not None else 0.0
    artifacts = ArtifactLog(experiment['output_dir'])

    with timing_context('synthetic dataset'):
        dataset = simgen.synthetic_dataset(
            synthetic['ambient_dim'],
            dim,
            noise_bound,
            drift_bound,
            synthetic['steps'],
            seed,
            excitation=synthetic['excitation'],
        )
    artifacts.dataset(dataset)

    sigma_lower, sigma_upper = calibrate_signal_bounds(dataset, window_length)
    if cert['sigma_lower'] is not None:
        sigma_lower = cert['sigma_lower']
    if cert['sigma_upper'] is not None:
        sigma_upper = cert['sigma_upper']
    params = certs.CertificateParams(
        noise_bound,
        drift_bound,
        sigma_lower,
        sigma_upper,
        cert['tube_radius'],
        certs.max_rate_step_size(sigma_lower, sigma_upper),
        window_length,
        tracker['inner_iters'],
        dim,
    )
    delta_sup = cert['delta_sup'] if cert['delta_sup'] is not None else worst_noise_bound(dataset, params)
    _log.info('calibrated sigma_lower = {0:.6e}, sigma_upper = {1:.6e}, delta_sup = {2:.6e}'.format(sigma_lower, sigma_upper, delta_sup))

    forgetting_factor = _great_forgetting_factor(config)
    certified = not tracker['line_search'] and forgetting_factor is None
    if not certified:
        _log.warning('certificates cover fixed steps on a sliding window only; writing measured distances without bounds')

    step_sizes = resolve_step_sizes(tracker['step_sizes'], delta_sup, params)
    reports = _check_step_sizes(step_sizes, delta_sup, params, artifacts, enforce=certified)

    start = window_length - 1
    init_radius = synthetic['init_radius'] if synthetic['init_radius'] is not None else cert['tube_radius']
    initial_estimate = simgen.perturbed_initial_estimate(dataset.truths[window_length], init_radius, simgen.spawn_seeds(seed, 3)[2])
    initial_distance_sq = chordal_distance(initial_estimate, dataset.truths[start]) ** 2
    if certified:
        certs.check_tube_entry(chordal_distance(initial_estimate, dataset.truths[window_length]), params)

    def great_job(step_size):
        def job():
            great = build_tracker(GREAT_TRACKER, initial_estimate, config, step_size=step_size, forgetting_factor=forgetting_factor)
            great.prefill(dataset.samples[:start, ...])
            with timing_context('synthetic GREAT run, step size {0:.6e}'.format(step_size)):
                return _track_dataset(great, dataset, window_length)
        return job

    def baseline_job(name):
        def job():
            with timing_context('synthetic {0} run'.format(name)):
                return _track_dataset(build_tracker(name, initial_estimate, config), dataset, window_length)
        return job

    jobs = collections.OrderedDict((('great', label), great_job(step_size)) for label, step_size in step_sizes.items())
    for name in synthetic['baselines']:
        jobs[('baseline', name)] = baseline_job(name)
    results = _run_parallel(jobs, experiment['max_num_threads'])

    times = numpy.arange(window_length, dataset.num_steps + 1)
    trajectories = collections.OrderedDict()
    tubes = collections.OrderedDict()
    violations = collections.OrderedDict()
    for label, step_size in step_sizes.items():
        distances = results[('great', label)]
        trajectories[label] = distances
        if not certified:
            artifacts.csv('synthetic_great_alpha_{0}.csv'.format(label), MEASURED_TRAJECTORY_COLUMNS,
                          numpy.column_stack((times, distances, distances ** 2)))
            continue
        tube = certs.tube_bound(dataset.num_steps - start, initial_distance_sq, delta_sup, params.with_step_size(step_size))
        tubes[label] = tube
        bound = tube.per_step[times - start]
        outside = certs.tube_violations(distances ** 2, bound)
        if outside.size:
            violations[label] = times[outside]
        artifacts.csv(
            'synthetic_great_alpha_{0}.csv'.format(label),
            CERTIFIED_TRAJECTORY_COLUMNS,
            numpy.column_stack((
                times,
                distances,
                numpy.sqrt(bound),
                numpy.full(times.shape, numpy.sqrt(tube.ultimate)),
                distances ** 2,
                bound,
                numpy.full(times.shape, tube.ultimate),
            )),
        )

    baselines = collections.OrderedDict()
    for name in synthetic['baselines']:
        distances = results[('baseline', name)]
        baselines[name] = distances
        artifacts.csv('synthetic_{0}.csv'.format(name), MEASURED_TRAJECTORY_COLUMNS, numpy.column_stack((times, distances, distances ** 2)))

    for label, steps in violations.items():
        _log.error('step size {0}: measured distance above the certified tube at t = {1}'.format(label, steps.tolist()))
    if violations:
        label, steps = next(iter(violations.items()))
        raise AssumptionViolated(
            'measured distance leaves the certified tube for step size {0} at {1:d} steps, first at t = {2:d}'.format(label, steps.size, int(steps[0])),
            report=reports[label],
        )

    return SyntheticResult(
        step_sizes=step_sizes,
        reports=reports,
        trajectories=trajectories,
        tubes=tubes,
        baselines=baselines,
        delta_sup=delta_sup,
        sigma_lower=sigma_lower,
        sigma_upper=sigma_upper,
        initial_distance_sq=initial_distance_sq,
        artifacts=artifacts.paths,
    )


#: Time splits of an identification run: samples ``t < init_end`` initialize, ``init_end <= t < test_start`` validate
SysidSetup = collections.namedtuple('SysidSetup', [
    'plant',
    't_ini',
    't_fut',
    'init_end',
    'test_start',
])

#: One simulated input-output record; ``samples[:, j]`` is the stacked sample ``u_t`` at ``t = j + L``
IoRecord = collections.namedtuple('IoRecord', [
    'inputs',
    'outputs',
    'clean_outputs',
    'samples',
])


def sysid_setup(config):
    """Load the plant and split its horizon into initialization, validation and test steps."""
    sysid = config.sysid
    plant = behavior.load_system(_required(config, 'sysid', 'plant_file'))
    depth = sysid['t_ini'] + sysid['t_fut']
    init_end = int(round(sysid['init_fraction'] * plant.horizon))
    test_start = init_end + int(round(sysid['validate_fraction'] * plant.horizon))
    if init_end < depth or test_start + sysid['t_fut'] >= plant.horizon:
        raise TooShort('horizon {0:d} is too short for the splits [0, {1:d}), [{1:d}, {2:d}), [{2:d}, {0:d}) at depth {3:d}'.format(
            plant.horizon,
            init_end,
            test_start,
            depth,
        ))
    return SysidSetup(plant, sysid['t_ini'], sysid['t_fut'], init_end, test_start)


def simulate_record(setup, sysid, seed, disturbance_at=None):
    """Simulate the plant over its horizon with Gaussian inputs, initial state and output noise drawn from ``seed``.

    A measurement error of ``disturbance_magnitude`` is added to every output at step ``disturbance_at``.

    :rtype: IoRecord

    """
    plant = setup.plant
    rng = simgen.make_rng(seed)
    initial_state = sysid['initial_state_std'] * rng.standard_normal(plant.state_dim)
    inputs = sysid['input_std'] * rng.standard_normal((plant.horizon, plant.input_dim))
    clean_outputs = behavior.ltv_simulate(plant, initial_state, inputs)
    outputs = clean_outputs + sysid['noise_std'] * rng.standard_normal(clean_outputs.shape)
    if disturbance_at is not None:
        outputs[disturbance_at, ...] += sysid['disturbance_magnitude']
    samples = behavior.io_samples(inputs, outputs, setup.t_ini + setup.t_fut)
    return IoRecord(inputs, outputs, clean_outputs, samples)


def _sample_at(record, setup, t):
    """Stacked sample ``u_t`` of ``record``."""
    return record.samples[:, t - (setup.t_ini + setup.t_fut - 1)]


def _prediction_error(estimate, record, setup, t):
    """Relative error of predicting the ``t_fut`` clean outputs after ``t`` from the estimate at ``t``."""
    plant = setup.plant
    predictor = behavior.predictor_from_subspace(estimate, plant.input_dim, plant.output_dim, setup.t_ini, setup.t_fut)
    past = slice(t - setup.t_ini + 1, t + 1)
    future = slice(t + 1, t + 1 + setup.t_fut)
    predicted = predictor.predict(record.inputs[past, ...], record.outputs[past, ...], record.inputs[future, ...])
    return behavior.relative_prediction_error(predicted, record.clean_outputs[future, ...])


def _initial_estimate(record, setup, dim, rank_tolerance):
    """Leading ``dim``-dimensional subspace of the initialization samples."""
    first = setup.t_ini + setup.t_fut - 1
    data = numpy.column_stack([_sample_at(record, setup, t) for t in range(first, setup.init_end)])
    return initialize(data, dim, rank_tolerance=rank_tolerance), data


def _trained_tracker(name, record, setup, config, dim, step_size, window_length=None, forgetting_factor=None, errors=None):
    """Initialize ``name`` on the initialization split and track through the validation split.

    When ``errors`` is a list, the prediction error at every validation step that does not reach into the test split
    is appended to it.

    """
    estimate, data = _initial_estimate(record, setup, dim, config.numerics['rank_tolerance'])
    tracker = build_tracker(name, estimate, config, step_size=step_size, window_length=window_length, forgetting_factor=forgetting_factor)
    if name == GREAT_TRACKER:
        capacity = window_length if window_length is not None else config.tracker['window_length']
        tracker.prefill(data[:, -capacity:].T)
    for t in range(setup.init_end, setup.test_start):
        estimate = tracker.update(_sample_at(record, setup, t))
        if errors is not None and t + setup.t_fut < setup.test_start:
            errors.append(_prediction_error(estimate, record, setup, t))
    return tracker


def run_sysid(config):
    r"""Identify the restricted behavior of an LTV plant online and record multi-step prediction errors.

    Trackers are initialized on the first split of one training record and run through the validation split. Each
    test repetition then continues a copy of every tracker on a fresh record (fresh inputs, initial state and noise),
    optionally with a large measurement error injected ``disturbance_step`` steps into the test split.

    Writes ``sysid_errors.csv`` with the mean and standard deviation across repetitions per tracker.

    :rtype: SysidResult

    """
    experiment, sysid = config.experiment, config.sysid
    setup = sysid_setup(config)
    step_size = numeric_step_sizes(config)[0]
    seeds = simgen.spawn_seeds(experiment['seed'], 1 + sysid['repetitions'])
    artifacts = ArtifactLog(experiment['output_dir'])

    training = simulate_record(setup, sysid, seeds[0])
    forgetting_factor = _great_forgetting_factor(config)
    trained = collections.OrderedDict()
    with timing_context('sysid training'):
        for name in sysid['trackers']:
            trained[name] = _trained_tracker(
                name,
                training,
                setup,
                config,
                config.tracker['dim'],
                step_size,
                forgetting_factor=forgetting_factor if name == GREAT_TRACKER else None,
            )

    disturbance_at = None
    if sysid['disturbance_step'] is not None:
        disturbance_at = setup.test_start + sysid['disturbance_step']
        if disturbance_at >= setup.plant.horizon:
            raise _config_error('sysid', 'disturbance_step', 'disturbance_step lies beyond the test split')
    times = numpy.arange(setup.test_start, setup.plant.horizon - setup.t_fut)

    def repetition_job(repetition_seed):
        def job():
            record = simulate_record(setup, sysid, repetition_seed, disturbance_at=disturbance_at)
            trackers = copy.deepcopy(trained)
            errors = dict((name, numpy.zeros(times.size)) for name in trackers)
            for i, t in enumerate(times):
                sample = _sample_at(record, setup, t)
                for name, tracker in trackers.items():
                    errors[name][i] = _prediction_error(tracker.update(sample), record, setup, t)
            return errors
        return job

    jobs = collections.OrderedDict((r, repetition_job(seeds[1 + r])) for r in range(sysid['repetitions']))
    with timing_context('sysid test repetitions'):
        results = _run_parallel(jobs, experiment['max_num_threads'])

    errors = collections.OrderedDict(
        (name, numpy.array([results[r][name] for r in range(sysid['repetitions'])]))
        for name in sysid['trackers']
    )
    columns = ['t']
    table = [times]
    for name, per_repetition in errors.items():
        columns.extend(['{0}_mean'.format(name), '{0}_std'.format(name)])
        table.extend([per_repetition.mean(axis=0), per_repetition.std(axis=0)])
        _log.info('{0}: mean relative prediction error over the test split {1:.6e}'.format(name, per_repetition.mean()))
    artifacts.csv('sysid_errors.csv', columns, numpy.column_stack(table))
    return SysidResult(times=times, errors=errors, artifacts=artifacts.paths)


def _candidate_key(candidate, mean_error):
    """Ordering of validation results: error, then smaller ``d``, then smaller ``T``, then smaller forgetting factor."""
    forgetting_factor = -1.0 if candidate.forgetting_factor is None else candidate.forgetting_factor
    return (mean_error, candidate.dim, candidate.window_length, forgetting_factor)


def validation_grid(config):
    """Candidates of the ``[validate]`` grid; unset lists fall back to the ``[tracker]`` values.

    Axes the ``[validate]`` tracker ignores (the window for GROUSE and PAST, the forgetting factor for GROUSE)
    collapse to a single point.

    """
    section = config.validate
    links = TRACKER_TYPES_TO_TRACKER_CLASSES[section['tracker']]
    dims = section['dims'] if section['dims'] is not None else [config.tracker['dim']]
    window_lengths = section['window_lengths'] if section['window_lengths'] is not None else [config.tracker['window_length']]
    if not links.uses_window:
        window_lengths = [config.tracker['window_length']]
    forgetting_factors = section['forgetting_factors'] if section['forgetting_factors'] is not None else [_great_forgetting_factor(config)]
    if not links.uses_forgetting_factor:
        forgetting_factors = [None]
    return [
        Candidate(dim, window_length, forgetting_factor)
        for dim in dims
        for window_length in window_lengths
        for forgetting_factor in forgetting_factors
    ]


def validate(config):
    r"""Pick the hyperparameters with the smallest mean relative prediction error on the validation split.

    Each candidate ``(d, T, beta)`` initializes the ``[validate]`` tracker on the initialization split of the training
    record and is scored by its prediction errors over the validation split. Candidates whose initialization is rank
    deficient score ``inf``. Ties go to the smaller ``d``, then the smaller ``T``.

    Writes ``validation.csv`` with one row per candidate, in grid order.

    :rtype: ValidationResult
    :raise: EmptyGrid if the grid has no candidates

    """
    experiment, sysid = config.experiment, config.sysid
    candidates = validation_grid(config)
    if not candidates:
        raise EmptyGrid('the validation grid is empty')
    name = config.validate['tracker']
    setup = sysid_setup(config)
    step_size = numeric_step_sizes(config)[0]
    training = simulate_record(setup, sysid, simgen.spawn_seeds(experiment['seed'], 1)[0])
    artifacts = ArtifactLog(experiment['output_dir'])

    def candidate_job(candidate):
        def job():
            errors = []
            try:
                _trained_tracker(
                    name,
                    training,
                    setup,
                    config,
                    candidate.dim,
                    step_size,
                    window_length=candidate.window_length,
                    forgetting_factor=candidate.forgetting_factor,
                    errors=errors,
                )
            except RankDeficient as exception:
                _log.warning('candidate {0}: {1}'.format(candidate, exception))
                return numpy.inf
            return numpy.mean(errors) if errors else numpy.inf
        return job

    with timing_context('validation of {0:d} candidates'.format(len(candidates))):
        scores = _run_parallel(
            collections.OrderedDict((i, candidate_job(candidate)) for i, candidate in enumerate(candidates)),
            experiment['max_num_threads'],
        )
    table = [(candidate, scores[i]) for i, candidate in enumerate(candidates)]
    best, best_error = min(table, key=lambda entry: _candidate_key(*entry))
    _log.info('best candidate {0} with mean relative prediction error {1:.6e}'.format(best, best_error))

    rows = numpy.array([
        [name, candidate.dim, candidate.window_length,
         numpy.nan if candidate.forgetting_factor is None else candidate.forgetting_factor, error]
        for candidate, error in table
    ], dtype=object)
    artifacts.csv('validation.csv', VALIDATION_COLUMNS, rows, fmt=['%s', '%d', '%d', '%.17g', '%.17g'])
    return ValidationResult(best=best, mean_error=best_error, table=table, artifacts=artifacts.paths)


def certify(config):
    r"""Evaluate the certificates for the configured constants without running a tracker.

    Needs ``noise_bound``, ``drift_bound``, ``sigma_lower``, ``sigma_upper``, ``delta_sup`` and ``initial_distance``
    in ``[certificates]``. ``initial_distance`` is the distance from the initial estimate to the first subspace it
    tracks; it must not exceed ``r_b``, and the tube starts from ``(initial_distance + c)^2``.

    Writes ``assumption4_report.csv`` (with the one-iteration signal requirement), one
    ``certificate_alpha_<label>.csv`` per step size (tube over ``t = 0, ..., horizon``) and ``rho_curve.csv``.

    :rtype: CertifyResult
    :raise: AssumptionViolated if ``initial_distance > r_b``, or (after writing the report) if any step size fails
        the feasibility condition

    """
    tracker, cert = config.tracker, config.certificates
    params = certs.CertificateParams(
        _required(config, 'certificates', 'noise_bound'),
        _required(config, 'certificates', 'drift_bound'),
        _required(config, 'certificates', 'sigma_lower'),
        _required(config, 'certificates', 'sigma_upper'),
        cert['tube_radius'],
        certs.max_rate_step_size(_required(config, 'certificates', 'sigma_lower'), _required(config, 'certificates', 'sigma_upper')),
        tracker['window_length'],
        tracker['inner_iters'],
        tracker['dim'],
    )
    delta_sup = _required(config, 'certificates', 'delta_sup')
    initial_distance_sq = certs.check_tube_entry(_required(config, 'certificates', 'initial_distance'), params)
    artifacts = ArtifactLog(config.experiment['output_dir'])

    upper_limit = certs.step_size_upper_limit(params.sigma_lower, params.sigma_upper)
    grid = numpy.geomspace(upper_limit * 1.0e-4, upper_limit, RHO_CURVE_POINTS + 1)[:-1]
    artifacts.csv('rho_curve.csv', RHO_CURVE_COLUMNS, certs.rho_curve(grid, params.sigma_lower, params.sigma_upper, params.tube_radius))

    step_sizes = resolve_step_sizes(tracker['step_sizes'], delta_sup, params)
    reports = _check_step_sizes(step_sizes, delta_sup, params, artifacts, enforce=True)

    tubes = collections.OrderedDict()
    times = numpy.arange(cert['horizon'] + 1)
    for label, step_size in step_sizes.items():
        candidate = params.with_step_size(step_size)
        tube = certs.tube_bound(cert['horizon'], initial_distance_sq, delta_sup, candidate)
        tubes[label] = tube
        artifacts.csv(
            'certificate_alpha_{0}.csv'.format(label),
            CERTIFICATE_COLUMNS,
            numpy.column_stack((times, numpy.sqrt(tube.per_step), numpy.full(times.shape, numpy.sqrt(tube.ultimate)))),
        )
    return CertifyResult(step_sizes=step_sizes, reports=reports, tubes=tubes, artifacts=artifacts.paths)
