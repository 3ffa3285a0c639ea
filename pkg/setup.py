# -*- coding: utf-8 -*-
"""Setup for subtrack."""
from __future__ import absolute_import
import io
import os

from subtrack import __version__

from setuptools import setup, find_packages


here = os.path.abspath(os.path.dirname(__file__))
README = io.open(os.path.join(here, 'README.md'), encoding="utf-8").read()


VERSION = __version__


CLASSIFIERS = """
        Development Status :: 3 - Alpha
        Intended Audience :: Science/Research
        Intended Audience :: Developers
        Programming Language :: Python
        Topic :: Scientific/Engineering :: Mathematics
        Operating System :: Unix
        Operating System :: MacOS

        """


# If you change something here, change it in requirements.txt
requires = [
    'pytest',
    'simplejson',
    'numpy>=1.17',
    'scipy',
    'future',
    'colander',
    ]

docs_requires = [
    'sphinx',
    'sphinx_rtd_theme',
    ]


setup(name='subtrack',
      version=VERSION,
      description='Certified online subspace tracking on the Grassmann manifold',
      long_description=README,
      long_description_content_type='text/markdown',
      classifiers=[_f for _f in CLASSIFIERS.split('\n') if _f],
      keywords='subspace tracking grassmann manifold gradient descent system identification certificates',
      packages=find_packages(exclude=['examples', 'examples.*']),
      include_package_data=True,
      zip_safe=False,
      install_requires=requires,
      tests_require=requires,
      extras_require={'docs': docs_requires},
      test_suite="subtrack",
      entry_points="""\
      [console_scripts]
      subtrack = subtrack.tracking.cli:main
      """,
      )
