#!/usr/bin/env python
# coding: utf-8

# Copyright 2016-2017, Nigel Small
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

from os.path import dirname, join as path_join

try:
    from setuptools import setup, find_packages
except ImportError:
    from distutils.core import setup, find_packages


# The package itself imports numpy, so metadata is read without importing it.
meta = {}
with open(path_join(dirname(__file__), "wavicle", "meta.py")) as f:
    exec(f.read(), meta)


packages = find_packages(exclude=("test", "test.*"))
package_metadata = {
    "name": meta["__package__"],
    "version": meta["__version__"],
    "description": "Quantum, wave and particle models of a two-mode bosonic heat engine",
    "long_description": "Wavicle computes the average power, zero-frequency power noise, "
                        "Fano factors and uncertainty bounds of a two-mode bosonic heat engine "
                        "by several independent routes that are checked against each other.",
    "author": meta["__author__"],
    "author_email": meta["__email__"],
    "entry_points": {
        "console_scripts": [
            "wavicle = wavicle.__main__:main",
        ],
    },
    "packages": packages,
    "install_requires": [
        "numpy>=1.17",
        "scipy>=1.4",
    ],
    "license": meta["__license__"],
    "classifiers": [
        "Development Status :: 3 - Alpha",
        "Intended Audience :: Science/Research",
        "License :: OSI Approved :: Apache Software License",
        "Operating System :: OS Independent",
        "Programming Language :: Python :: 3",
        "Programming Language :: Python :: 3.6",
        "Programming Language :: Python :: 3.7",
        "Programming Language :: Python :: 3.8",
        "Topic :: Scientific/Engineering :: Physics",
    ],
    "zip_safe": False,
}

setup(**package_metadata)
