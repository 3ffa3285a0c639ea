# -*- coding: utf-8 -*-
"""Colander schemas validating experiment configuration files, and the loader producing :class:`ExperimentConfig`.

An experiment file is an INI file; each section below is deserialized by its schema. Values arrive as strings and
are converted (ints, floats, booleans, comma separated lists) and range-checked here, so the experiment code
receives typed, validated values. Missing optional keys take the documented defaults.

Invalid files raise :class:`colander.Invalid`; the message names the offending section and key.

"""
import collections
import configparser
import os

import colander

from subtrack.tracking.constant import DEFAULT_MAX_NUM_THREADS, DEFAULT_PAST_FORGETTING_FACTOR, DEFAULT_PAST_INITIAL_SCALE, DEFAULT_RANK_TOLERANCE, DEFAULT_REFRESH_INTERVAL, DEFAULT_TEST_REPETITIONS, DISCOUNTED_WINDOW, EXCITATION_TYPES, EXPERIMENT_MODES, GAUSSIAN_EXCITATION, GREAT_TRACKER, MAX_ALLOWED_NUM_THREADS, SLIDING_WINDOW, STEP_SIZE_CONVERGENCE, STEP_SIZE_MIDPOINT, STEP_SIZE_ULTIMATE, SYNTHETIC_GEODESIC_MODE, SYSID_MODE, TRACKER_TYPES, WINDOW_MODES


#: Symbolic step sizes resolved from the certificate constants
STEP_SIZE_LABELS = [
        STEP_SIZE_CONVERGENCE,
        STEP_SIZE_MIDPOINT,
        STEP_SIZE_ULTIMATE,
        ]


class CommaSeparatedList(colander.SchemaType):

    """Colander type for ``a, b, c`` strings; every item is deserialized by ``item_type``.

    An empty string deserializes to the empty list.

    """

    def __init__(self, item_type):
        """Construct a CommaSeparatedList of ``item_type`` (a colander type instance)."""
        self.item_type = item_type

    def serialize(self, node, appstruct):
        """Join the serialized items with commas."""
        if appstruct is colander.null:
            return colander.null
        return ', '.join(self.item_type.serialize(node, item) for item in appstruct)

    def deserialize(self, node, cstruct):
        """Split on commas and deserialize every stripped, non-empty item."""
        if cstruct is colander.null:
            return colander.null
        if not isinstance(cstruct, str):
            raise colander.Invalid(node, '{0!r} is not a comma separated list'.format(cstruct))
        return [self.item_type.deserialize(node, item.strip()) for item in cstruct.split(',') if item.strip()]


def _step_size_item(node, value):
    """Validator for step sizes: a symbolic label or a positive number."""
    for item in value:
        if item in STEP_SIZE_LABELS:
            continue
        try:
            numeric = float(item)
        except ValueError:
            raise colander.Invalid(node, '{0!r} is neither a positive number nor one of {1}'.format(item, STEP_SIZE_LABELS))
        if not numeric > 0.0:
            raise colander.Invalid(node, 'step size {0!r} must be positive'.format(item))


class ExperimentSchema(colander.MappingSchema):

    """Schema of the ``[experiment]`` section."""

    mode = colander.SchemaNode(colander.String(), validator=colander.OneOf(EXPERIMENT_MODES), missing=SYNTHETIC_GEODESIC_MODE)
    seed = colander.SchemaNode(colander.Int(), validator=colander.Range(min=0), missing=0)
    output_dir = colander.SchemaNode(colander.String(), missing='output')
    max_num_threads = colander.SchemaNode(
            colander.Int(),
            validator=colander.Range(min=1, max=MAX_ALLOWED_NUM_THREADS),
            missing=DEFAULT_MAX_NUM_THREADS,
            )


def _tracker_validator(node, value):
    """A discounted window needs a forgetting factor."""
    if value['window_mode'] == DISCOUNTED_WINDOW and value['forgetting_factor'] is None:
        raise colander.Invalid(node, 'window_mode = discounted requires a forgetting_factor')


class TrackerSchema(colander.MappingSchema):

    """Schema of the ``[tracker]`` section."""

    name = colander.SchemaNode(colander.String(), validator=colander.OneOf(TRACKER_TYPES), missing=GREAT_TRACKER)
    dim = colander.SchemaNode(colander.Int(), validator=colander.Range(min=1), missing=3)
    window_length = colander.SchemaNode(colander.Int(), validator=colander.Range(min=1), missing=100)
    step_sizes = colander.SchemaNode(
            CommaSeparatedList(colander.String()),
            validator=colander.All(colander.Length(min=1), _step_size_item),
            missing=list(STEP_SIZE_LABELS),
            )
    inner_iters = colander.SchemaNode(colander.Int(), validator=colander.Range(min=1), missing=1)
    line_search = colander.SchemaNode(colander.Boolean(), missing=False)
    forgetting_factor = colander.SchemaNode(colander.Float(), validator=colander.Range(min=0.0, max=1.0), missing=None)
    window_mode = colander.SchemaNode(colander.String(), validator=colander.OneOf(WINDOW_MODES), missing=SLIDING_WINDOW)

    def __init__(self, *args, **kwargs):
        """Attach the cross-key validator."""
        kwargs.setdefault('validator', _tracker_validator)
        super(TrackerSchema, self).__init__(*args, **kwargs)


class CertificatesSchema(colander.MappingSchema):

    """Schema of the ``[certificates]`` section; keys left out are calibrated from data where possible."""

    noise_bound = colander.SchemaNode(colander.Float(), validator=colander.Range(min=0.0), missing=None)
    drift_bound = colander.SchemaNode(colander.Float(), validator=colander.Range(min=0.0), missing=None)
    sigma_lower = colander.SchemaNode(colander.Float(), validator=colander.Range(min=0.0), missing=None)
    sigma_upper = colander.SchemaNode(colander.Float(), validator=colander.Range(min=0.0), missing=None)
    tube_radius = colander.SchemaNode(colander.Float(), validator=colander.Range(min=0.0, max=1.0), missing=0.1)
    delta_sup = colander.SchemaNode(colander.Float(), validator=colander.Range(min=0.0), missing=None)
    initial_distance = colander.SchemaNode(colander.Float(), validator=colander.Range(min=0.0), missing=None)
    horizon = colander.SchemaNode(colander.Int(), validator=colander.Range(min=0), missing=50)


class SyntheticSchema(colander.MappingSchema):

    """Schema of the ``[synthetic]`` section."""

    ambient_dim = colander.SchemaNode(colander.Int(), validator=colander.Range(min=2), missing=5)
    steps = colander.SchemaNode(colander.Int(), validator=colander.Range(min=1), missing=150)
    excitation = colander.SchemaNode(colander.String(), validator=colander.OneOf(EXCITATION_TYPES), missing=GAUSSIAN_EXCITATION)
    init_radius = colander.SchemaNode(colander.Float(), validator=colander.Range(min=0.0), missing=None)
    baselines = colander.SchemaNode(
            CommaSeparatedList(colander.String()),
            validator=colander.ContainsOnly(TRACKER_TYPES),
            missing=[],
            )


class SysidSchema(colander.MappingSchema):

    """Schema of the ``[sysid]`` section."""

    plant_file = colander.SchemaNode(colander.String(), missing=None)
    t_ini = colander.SchemaNode(colander.Int(), validator=colander.Range(min=1), missing=5)
    t_fut = colander.SchemaNode(colander.Int(), validator=colander.Range(min=1), missing=5)
    input_std = colander.SchemaNode(colander.Float(), validator=colander.Range(min=0.0), missing=1.0)
    noise_std = colander.SchemaNode(colander.Float(), validator=colander.Range(min=0.0), missing=0.0)
    initial_state_std = colander.SchemaNode(colander.Float(), validator=colander.Range(min=0.0), missing=1.0)
    init_fraction = colander.SchemaNode(colander.Float(), validator=colander.Range(min=0.0, max=1.0), missing=0.2)
    validate_fraction = colander.SchemaNode(colander.Float(), validator=colander.Range(min=0.0, max=1.0), missing=0.2)
    repetitions = colander.SchemaNode(colander.Int(), validator=colander.Range(min=1), missing=DEFAULT_TEST_REPETITIONS)
    disturbance_step = colander.SchemaNode(colander.Int(), validator=colander.Range(min=0), missing=None)
    disturbance_magnitude = colander.SchemaNode(colander.Float(), missing=10.0)
    trackers = colander.SchemaNode(
            CommaSeparatedList(colander.String()),
            validator=colander.All(colander.Length(min=1), colander.ContainsOnly(TRACKER_TYPES)),
            missing=[GREAT_TRACKER],
            )


class BaselinesSchema(colander.MappingSchema):

    """Schema of the ``[baselines]`` section: parameters of the comparison trackers."""

    grouse_step_size = colander.SchemaNode(colander.Float(), validator=colander.Range(min=0.0), missing=1.0e-2)
    past_forgetting_factor = colander.SchemaNode(
            colander.Float(),
            validator=colander.Range(min=0.0, max=1.0),
            missing=DEFAULT_PAST_FORGETTING_FACTOR,
            )
    past_initial_scale = colander.SchemaNode(colander.Float(), validator=colander.Range(min=0.0), missing=DEFAULT_PAST_INITIAL_SCALE)


class ValidateSchema(colander.MappingSchema):

    """Schema of the ``[validate]`` section: the hyperparameter grid.

    An unset list falls back to the ``[tracker]`` value; a list set to the empty string leaves the grid empty.

    """

    tracker = colander.SchemaNode(colander.String(), validator=colander.OneOf(TRACKER_TYPES), missing=GREAT_TRACKER)
    dims = colander.SchemaNode(CommaSeparatedList(colander.Int()), missing=None)
    window_lengths = colander.SchemaNode(CommaSeparatedList(colander.Int()), missing=None)
    forgetting_factors = colander.SchemaNode(CommaSeparatedList(colander.Float()), missing=None)


class NumericsSchema(colander.MappingSchema):

    """Schema of the ``[numerics]`` section."""

    rank_tolerance = colander.SchemaNode(colander.Float(), validator=colander.Range(min=0.0), missing=DEFAULT_RANK_TOLERANCE)
    refresh_interval = colander.SchemaNode(colander.Int(), validator=colander.Range(min=1), missing=DEFAULT_REFRESH_INTERVAL)


class ExperimentConfigSchema(colander.MappingSchema):

    """Schema of a whole experiment file."""

    experiment = ExperimentSchema()
    tracker = TrackerSchema()
    certificates = CertificatesSchema()
    synthetic = SyntheticSchema()
    sysid = SysidSchema()
    baselines = BaselinesSchema()
    validate = ValidateSchema()
    numerics = NumericsSchema()


#: Validated experiment configuration: one dict per section, plus the file it was read from (None if built in code)
ExperimentConfig = collections.namedtuple('ExperimentConfig', [
    'experiment',
    'tracker',
    'certificates',
    'synthetic',
    'sysid',
    'baselines',
    'validate',
    'numerics',
    'path',
])

CONFIG_SECTIONS = ExperimentConfig._fields[:-1]


def build_config(sections, path=None):
    """Validate a dict of sections (each a dict of strings) into an ExperimentConfig.

    Missing sections and keys take their defaults. Relative ``plant_file`` paths are resolved against the
    directory of ``path``, and the file must exist when the experiment mode is ``sysid``.

    :raise: colander.Invalid on any invalid or inconsistent value

    """
    schema = ExperimentConfigSchema()
    cstruct = dict((name, dict(sections.get(name, {}))) for name in CONFIG_SECTIONS)
    appstruct = schema.deserialize(cstruct)

    plant_file = appstruct['sysid']['plant_file']
    if plant_file is not None and path is not None and not os.path.isabs(plant_file):
        appstruct['sysid']['plant_file'] = os.path.join(os.path.dirname(os.path.abspath(path)), plant_file)
    if appstruct['experiment']['mode'] == SYSID_MODE:
        plant_file = appstruct['sysid']['plant_file']
        if plant_file is None or not os.path.isfile(plant_file):
            raise colander.Invalid(schema['sysid']['plant_file'], 'plant file {0!r} does not exist'.format(plant_file))

    sysid = appstruct['sysid']
    if sysid['init_fraction'] + sysid['validate_fraction'] >= 1.0:
        raise colander.Invalid(schema['sysid'], 'init_fraction + validate_fraction must leave a test split')
    return ExperimentConfig(path=path, **appstruct)


def load_experiment_config(path, seed=None, output_dir=None):
    """Read and validate the experiment file at ``path``; ``seed`` and ``output_dir`` override the file.

    Sections that are not part of the experiment schema (for instance logging configuration) are ignored.

    :rtype: ExperimentConfig
    :raise: IOError if the file cannot be read; colander.Invalid if it does not validate

    """
    parser = configparser.ConfigParser(interpolation=None)
    if not parser.read(path):
        raise IOError('cannot read experiment file {0}'.format(path))
    sections = dict((name, dict(parser.items(name))) for name in parser.sections() if name in CONFIG_SECTIONS)
    experiment = sections.setdefault('experiment', {})
    if seed is not None:
        experiment['seed'] = str(seed)
    if output_dir is not None:
        experiment['output_dir'] = output_dir
    return build_config(sections, path=path)


def numeric_step_sizes(config):
    """Return the configured step sizes as floats; raises colander.Invalid if any of them is a symbolic label."""
    values = []
    for item in config.tracker['step_sizes']:
        if item in STEP_SIZE_LABELS:
            node = ExperimentConfigSchema()['tracker']['step_sizes']
            raise colander.Invalid(node, 'step size {0!r} needs certificate constants; give a number for this experiment'.format(item))
        values.append(float(item))
    return values
