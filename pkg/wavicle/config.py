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

""" Run configuration as plain `key = value` lines.

Keys are matched without regard to case, and `-` and `_` are
interchangeable, so `kappa-h`, `kappa_h` and `KAPPA_H` name the same
setting. Every command echoes its resolved configuration as `# key = value`
lines, which load back with `--config`. Other `#` lines are comments.
"""

from collections import OrderedDict
from collections.abc import MutableMapping
from os import getenv
from os.path import isabs, join as path_join

from wavicle.core import ParameterError


__all__ = ["RunConfig", "key_name", "output_path", "OUTPUT_DIR_VARIABLE"]

OUTPUT_DIR_VARIABLE = "WAVICLE_OUTPUT_DIR"


def key_name(name):
    """ Normalise a configuration key for matching.
    """
    return str(name).strip().replace("-", "_").lower()


class RunConfig(MutableMapping):
    """ Ordered, case-insensitive mapping of settings to text values.
    """

    @classmethod
    def parse(cls, text, known=None):
        """ Read `key = value` lines. A line starting with `#` is a comment
        unless it has the echo form `# key = value` with a key in `known`.
        """
        known = {key_name(key) for key in known or ()}
        config = cls()
        for number, line in enumerate(text.splitlines(), start=1):
            line = line.strip()
            if line.startswith("#"):
                line = line[1:].strip()
                key, eq, _ = line.partition("=")
                if not eq or key_name(key) not in known:
                    continue
            if not line:
                continue
            key, eq, value = line.partition("=")
            if not eq or not key.strip():
                raise ParameterError("config line %d is not of the form key = value: %r" % (number, line))
            config[key] = value.strip()
        return config

    @classmethod
    def load(cls, path, known=None):
        with open(path) as f:
            return cls.parse(f.read(), known)

    def __init__(self, iterable=None, **kwargs):
        self.__fields = OrderedDict()
        self.update(iterable or (), **kwargs)

    def __repr__(self):
        return "RunConfig(%r)" % list(self.items())

    def __len__(self):
        return len(self.__fields)

    def __contains__(self, name):
        return key_name(name) in self.__fields

    def __getitem__(self, name):
        return self.__fields[key_name(name)]

    def __setitem__(self, name, value):
        if value is None:
            value = ""
        elif isinstance(value, (list, tuple)):
            value = ",".join(str(item) for item in value)
        elif isinstance(value, float):
            value = repr(value)
        self.__fields[key_name(name)] = str(value)

    def __delitem__(self, name):
        del self.__fields[key_name(name)]

    def __iter__(self):
        return iter(self.__fields)

    def copy(self):
        return self.__class__(self)

    def merged(self, overrides):
        """ Copy with every non-None value of `overrides` applied on top.
        """
        config = self.copy()
        for key, value in overrides.items():
            if value is not None:
                config[key] = value
        return config

    def get_float(self, name, default=None):
        value = self.get(name)
        if value in (None, ""):
            return default
        try:
            return float(value)
        except ValueError:
            raise ParameterError("setting %s must be a number (got %r)" % (key_name(name), value))

    def get_int(self, name, default=None):
        value = self.get(name)
        if value in (None, ""):
            return default
        try:
            return int(value)
        except ValueError:
            raise ParameterError("setting %s must be an integer (got %r)" % (key_name(name), value))

    def get_list(self, name, default=()):
        value = self.get(name)
        if value in (None, ""):
            return list(default)
        return [item.strip() for item in value.split(",") if item.strip()]

    def to_lines(self, prefix=""):
        return ["%s%s = %s" % (prefix, key, value) for key, value in self.__fields.items()]


def output_path(path):
    """ Resolve a relative output path against the directory named by the
    environment, if set.
    """
    directory = getenv(OUTPUT_DIR_VARIABLE)
    if directory and not isabs(path):
        return path_join(directory, path)
    return path
