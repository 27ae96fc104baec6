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

__all__ = ["__author__", "__email__", "__license__", "__package__", "__version__"]

__author__ = "Nigel Small <nigel@nigelsmall.name>"
__copyright__ = "2016-2017, Nigel Small"
__email__ = "nigel@nigelsmall.name"
__license__ = "Apache License, Version 2.0"
__package__ = "wavicle"
__version__ = "1.0.0a1"
