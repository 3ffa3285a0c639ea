# -*- coding: utf-8 -*-
"""Command line entry point: ``subtrack {synthetic,sysid,validate,certify} --config FILE [--seed N] [--out DIR]``.

Logging is configured from the ``[loggers]``/``[handlers]``/``[formatters]`` sections of the experiment file when
present (``%(here)s`` expands to the directory of the file), and otherwise goes to stderr in the same format.

The subcommand must agree with ``[experiment] mode``: ``synthetic`` runs ``synthetic_geodesic`` files, ``sysid`` and
``validate`` run ``sysid`` files, and ``certify`` reads only the constants, so it accepts either mode.

Exit codes: 0 on success, 1 on a tracking error, 2 on an invalid configuration (including a mode the subcommand
cannot run), 3 if a certificate is refused.

"""
import argparse
import configparser
import logging
import logging.config
import os
import sys

import colander

from subtrack.tracking import experiments
from subtrack.tracking.constant import SYNTHETIC_GEODESIC_MODE, SYSID_MODE
from subtrack.tracking.exceptions import AssumptionViolated, SubspaceTrackingError
from subtrack.tracking.schemas import load_experiment_config


_log = logging.getLogger(__name__)

LOG_FORMAT = '%(asctime)s %(levelname)-5.5s [%(name)s][%(threadName)s] %(message)s'

EXIT_OK = 0
EXIT_TRACKING_ERROR = 1
EXIT_INVALID_CONFIG = 2
EXIT_ASSUMPTION_VIOLATED = 3

#: Subcommand name -> experiment runner
COMMANDS = {
        'synthetic': experiments.run_synthetic,
        'sysid': experiments.run_sysid,
        'validate': experiments.validate,
        'certify': experiments.certify,
        }

#: Subcommand name -> the ``[experiment] mode`` it runs; subcommands not listed accept any mode
COMMAND_MODES = {
        'synthetic': SYNTHETIC_GEODESIC_MODE,
        'sysid': SYSID_MODE,
        'validate': SYSID_MODE,
        }


def build_parser():
    """Argument parser with one subcommand per experiment."""
    parser = argparse.ArgumentParser(prog='subtrack', description='Online subspace tracking on the Grassmann manifold.')
    subparsers = parser.add_subparsers(dest='command')
    subparsers.required = True
    for name in sorted(COMMANDS):
        subparser = subparsers.add_parser(name, help=COMMANDS[name].__doc__.strip().splitlines()[0])
        subparser.add_argument('--config', required=True, help='experiment INI file')
        subparser.add_argument('--seed', type=int, default=None, help='override [experiment] seed')
        subparser.add_argument('--out', default=None, help='override [experiment] output_dir')
    return parser


def configure_logging(path):
    """Use the logging sections of ``path`` if it has them, else log INFO and above to stderr."""
    parser = configparser.ConfigParser(interpolation=None)
    parser.read(path)
    if parser.has_section('loggers'):
        here = os.path.dirname(os.path.abspath(path))
        logging.config.fileConfig(path, defaults={'here': here}, disable_existing_loggers=False)
    else:
        logging.basicConfig(level=logging.INFO, format=LOG_FORMAT)


def main(argv=None):
    """Run one experiment and return the process exit code."""
    args = build_parser().parse_args(argv)
    configure_logging(args.config)

    try:
        config = load_experiment_config(args.config, seed=args.seed, output_dir=args.out)
        mode = config.experiment['mode']
        if args.command in COMMAND_MODES and mode != COMMAND_MODES[args.command]:
            _log.error('{0} cannot run {1}: [experiment] mode is {2}, expected {3}'.format(args.command, args.config, mode, COMMAND_MODES[args.command]))
            return EXIT_INVALID_CONFIG
        result = COMMANDS[args.command](config)
    except AssumptionViolated as exception:
        _log.error('certificate refused: {0}'.format(exception))
        return EXIT_ASSUMPTION_VIOLATED
    except colander.Invalid as exception:
        _log.error('invalid configuration {0}: {1}'.format(args.config, exception.asdict()))
        return EXIT_INVALID_CONFIG
    except IOError as exception:
        _log.error('cannot read {0}: {1}'.format(args.config, exception))
        return EXIT_INVALID_CONFIG
    except SubspaceTrackingError as exception:
        _log.error('{0} failed: {1}'.format(args.command, exception))
        return EXIT_TRACKING_ERROR

    for path in result.artifacts:
        _log.info('wrote {0}'.format(path))
    return EXIT_OK


if __name__ == '__main__':
    sys.exit(main())
