#!/usr/bin/env python3
# -*- coding: utf-8 -*-

# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#    http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or
# implied.
# See the License for the specific language governing permissions and
# limitations under the License.

import os
from setuptools import setup

_name = "fracdyn"
# keep aligned with fracdyn/__init__.py
VERSION = "1.0.0"
here = os.path.abspath(os.path.dirname(__file__))
with open(os.path.join(here, 'README.rst')) as readme_file:
    README = readme_file.read()

setup(
    name=_name,
    description='Fractional calculus toolkit: Mittag-Leffler functions, fractional operators and ODE solvers',
    long_description=README,
    version=VERSION,
    python_requires='>=3.7',
    author='fracdyn developers',
    license='Apache 2.0',

    packages=[_name, _name + ".tests"],
    package_data={_name: ["frac.cfg"]},
    include_package_data=True,
    install_requires=[
        'PyYAML',
        'numpy>=1.17',
        'scipy>=1.4',
        'mpmath',
    ],
    entry_points={
        'console_scripts': [
            'fracdyn = fracdyn.cli:main',
        ],
    },
)
