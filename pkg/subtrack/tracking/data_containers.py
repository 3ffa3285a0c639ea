# -*- coding: utf-8 -*-
"""Data containers for synthetic datasets and the CSV/JSON artifacts written by experiments."""
from builtins import object
import collections
import io
import os
import pprint

import numpy
import simplejson

from subtrack.tracking.constant import CSV_FLOAT_FORMAT


# See SyntheticDataset (below) for docstring.
_BaseSyntheticDataset = collections.namedtuple('_BaseSyntheticDataset', [
    'truths',
    'samples',
    'noise_norm',
    'drift',
    'seed',
    'excitation',
])


class SyntheticDataset(_BaseSyntheticDataset):

    r"""A drifting sequence of true subspaces with one sample per step.

    ``truths[t]`` is ``U_t`` for ``t = 0, ..., N`` and ``samples[t - 1]`` is ``u_t`` for ``t = 1, ..., N``: there is no
    sample at ``t = 0``.

    :ivar truths: (*list of Subspace*) ``U_0, ..., U_N``
    :ivar samples: (*array of float64 with shape (N, n)*) ``u_1, ..., u_N``, one per row
    :ivar noise_norm: (*float64 >= 0*) ``eps``, the exact norm of each noise vector
    :ivar drift: (*float64 >= 0*) ``c``, the exact chordal distance between consecutive subspaces
    :ivar seed: (*int*) seed the dataset was generated from
    :ivar excitation: (*str*) coefficient design of the samples

    """

    __slots__ = ()

    def __new__(cls, truths, samples, noise_norm, drift, seed, excitation):
        """Allocate and construct a new instance, checking that samples and subspaces line up."""
        samples = numpy.asarray(samples, dtype=numpy.float64)
        if samples.ndim != 2 or samples.shape[0] + 1 != len(truths):
            raise ValueError('{0} samples do not match {1:d} subspaces (expected one sample per step after the first)'.format(
                samples.shape,
                len(truths),
            ))
        return super(SyntheticDataset, cls).__new__(cls, list(truths), samples, noise_norm, drift, seed, excitation)

    def __str__(self):
        """Pretty print the manifest of this dataset."""
        return pprint.pformat(self.manifest())

    @property
    def ambient_dim(self):
        """Return ``n``."""
        return self.samples.shape[1]

    @property
    def dim(self):
        """Return ``d``."""
        return self.truths[0].dim

    @property
    def num_steps(self):
        """Return ``N``, the number of samples."""
        return self.samples.shape[0]

    def sample(self, t):
        """Return ``u_t``, ``1 <= t <= N``."""
        if not 1 <= t <= self.num_steps:
            raise IndexError('no sample at t = {0}; samples exist for t in [1, {1:d}]'.format(t, self.num_steps))
        return self.samples[t - 1, ...]

    def window(self, t, length):
        """Return ``W_t = [u_{t-T+1} ... u_t]`` (``n x T``), for ``T <= t <= N``."""
        if not length <= t <= self.num_steps:
            raise IndexError('window of length {0:d} ending at t = {1} is not available'.format(length, t))
        return self.samples[t - length:t, ...].T

    def manifest(self):
        """Describe this dataset as a dict consumed by json."""
        return {
                'ambient_dim': self.ambient_dim,
                'dim': self.dim,
                'num_steps': self.num_steps,
                'noise_norm': self.noise_norm,
                'drift': self.drift,
                'seed': self.seed,
                'excitation': self.excitation,
                'transport': 'reprojection',
                'samples_file': 'samples.csv',
                'true_bases_file': 'true_bases.csv',
                }


def _header_line(columns):
    """Comma separated header for ``numpy.savetxt``."""
    return ','.join(columns)


def write_csv(path, columns, rows, fmt=CSV_FLOAT_FORMAT):
    """Write a header row and one line per row of ``rows``; floats use ``fmt`` so reruns are byte-identical.

    :param path: output file
    :type path: str
    :param columns: column names
    :type columns: list of str
    :param rows: table data
    :type rows: array of float64 with shape (num_rows, len(columns))
    :param fmt: printf-style format, or one per column
    :type fmt: str or list of str
    :return: ``path``

    """
    rows = numpy.asarray(rows)
    if rows.ndim == 1:
        rows = rows.reshape(-1, len(columns))
    if rows.shape[1] != len(columns):
        raise ValueError('{0:d} columns given for rows of width {1:d}'.format(len(columns), rows.shape[1]))
    numpy.savetxt(path, rows, fmt=fmt, delimiter=',', header=_header_line(columns), comments='')
    return path


def read_csv(path):
    """Read a file written by :func:`write_csv`; returns ``(columns, rows)``."""
    with io.open(path, 'r') as csv_file:
        columns = csv_file.readline().strip().split(',')
    rows = numpy.loadtxt(path, delimiter=',', skiprows=1, ndmin=2)
    return columns, rows


def write_manifest(path, payload):
    """Dump ``payload`` to ``path`` as json with sorted keys; returns ``path``."""
    with io.open(path, 'w') as json_file:
        json_file.write(simplejson.dumps(payload, sort_keys=True, indent=2))
        json_file.write(u'\n')
    return path


def read_manifest(path):
    """Load a json manifest."""
    with io.open(path, 'r') as json_file:
        return simplejson.load(json_file)


def write_dataset(dataset, output_dir):
    """Write ``samples.csv``, ``true_bases.csv`` and ``manifest.json`` for ``dataset`` into ``output_dir``.

    Row ``t`` of ``true_bases.csv`` holds the row-major basis of ``U_t``.

    :return: paths written
    :rtype: list of str

    """
    sample_columns = ['u{0:d}'.format(i) for i in range(dataset.ambient_dim)]
    basis_columns = ['b{0:d}_{1:d}'.format(i, j) for i in range(dataset.ambient_dim) for j in range(dataset.dim)]
    bases = numpy.array([truth.basis.ravel() for truth in dataset.truths])
    manifest = dataset.manifest()
    return [
        write_csv(os.path.join(output_dir, manifest['samples_file']), sample_columns, dataset.samples),
        write_csv(os.path.join(output_dir, manifest['true_bases_file']), basis_columns, bases),
        write_manifest(os.path.join(output_dir, 'manifest.json'), manifest),
    ]


class ArtifactLog(object):

    """Collects the paths of the artifacts one experiment writes, in the order they were written."""

    def __init__(self, output_dir):
        """Construct an ArtifactLog writing below ``output_dir`` (created if missing)."""
        if not os.path.isdir(output_dir):
            os.makedirs(output_dir)
        self.output_dir = output_dir
        self.paths = []

    def path(self, filename):
        """Return the location of ``filename`` inside the output directory."""
        return os.path.join(self.output_dir, filename)

    def csv(self, filename, columns, rows, fmt=CSV_FLOAT_FORMAT):
        """Write a CSV artifact; see :func:`write_csv`."""
        self.paths.append(write_csv(self.path(filename), columns, rows, fmt=fmt))
        return self.paths[-1]

    def dataset(self, dataset):
        """Write the dataset artifacts; see :func:`write_dataset`."""
        written = write_dataset(dataset, self.output_dir)
        self.paths.extend(written)
        return written
