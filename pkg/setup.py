# -*- coding: utf-8 -*-
#
# This file is part of Invenio.
# Copyright (C) 2016 CERN.
#
# Invenio is free software; you can redistribute it and/or modify it
# under the terms of the GNU General Public License as published by the
# Free Software Foundation; either version 2 of the License, or (at your
# option) any later version. See the LICENSE file for more details.

"""Invenio module for approximate duplicate detection in streams."""

import os
import sys

from setuptools import find_packages, setup

try:
    from setuptools.command.test import test as TestCommand
except ImportError:
    TestCommand = None

readme = open('README.rst').read()
history = open('CHANGES.rst').read()

requirements = [
    'bitarray>=1.6.0',
    'cryptography>=2.5',
    'numpy>=1.17.0',
    'scipy>=1.4.0',
    'xxhash>=2.0.0',
]

test_requirements = [
    'hypothesis>=5.0.0',
    'pytest>=4.6.0',
    'pytest-cov>=2.8.0',
    'coverage>=5.0.0',
]

cmdclass = {}

if TestCommand is not None:
    class PyTest(TestCommand):
        """PyTest Test."""

        user_options = [('pytest-args=', 'a', "Arguments to pass to pytest")]

        def initialize_options(self):
            """Init pytest."""
            TestCommand.initialize_options(self)
            from configparser import ConfigParser
            config = ConfigParser()
            config.read('pytest.ini')
            self.pytest_args = config.get('pytest', 'addopts').split(' ')

        def finalize_options(self):
            """Finalize pytest."""
            TestCommand.finalize_options(self)
            self.test_args = []
            self.test_suite = True

        def run_tests(self):
            """Run tests."""
            # import here, cause outside the eggs aren't loaded
            import pytest
            errno = pytest.main(self.pytest_args)
            sys.exit(errno)

    cmdclass['test'] = PyTest

# Get the version string. Cannot be done with import!
g = {}
with open(os.path.join('invenio_qht', 'version.py'), 'rt') as fp:
    exec(fp.read(), g)
    version = g['__version__']

setup(
    name='invenio-qht',
    version=version,
    description=__doc__,
    long_description=readme + '\n\n' + history,
    keywords='invenio duplicate detection quotient hash table streaming',
    license='GPLv2',
    author='CERN',
    author_email='info@invenio-software.org',
    url='https://github.com/inveniosoftware/invenio-qht',
    packages=find_packages(exclude=['docs', 'tests']),
    zip_safe=False,
    include_package_data=True,
    platforms='any',
    python_requires='>=3.8',
    install_requires=requirements,
    extras_require={
        'docs': [
            'Sphinx>=1.3',
            'sphinx_rtd_theme>=0.1.7'
        ],
        'tests': test_requirements
    },
    entry_points={
        'console_scripts': [
            'qht = invenio_qht.cli:main',
        ],
    },
    classifiers=[
        'Environment :: Console',
        'Intended Audience :: Developers',
        'Intended Audience :: Science/Research',
        'License :: OSI Approved :: GNU General Public License v2 (GPLv2)',
        'Operating System :: OS Independent',
        'Programming Language :: Python',
        'Topic :: Scientific/Engineering :: Information Analysis',
        'Topic :: Software Development :: Libraries :: Python Modules',
        'Programming Language :: Python :: 3',
        'Programming Language :: Python :: 3.8',
        'Programming Language :: Python :: 3.9',
        'Programming Language :: Python :: 3.10',
        'Programming Language :: Python :: 3.11',
        'Programming Language :: Python :: 3.12',
        'Development Status :: 2 - Pre-Alpha',
    ],
    tests_require=test_requirements,
    cmdclass=cmdclass,
)
