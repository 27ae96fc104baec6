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

""" Deterministic work partitioning for parallel Monte Carlo runs and
sweeps. Results never depend on the number of workers: each trajectory
draws from its own stream keyed by (seed, index), and results come back
in input order.
"""

from concurrent.futures import ThreadPoolExecutor
from logging import getLogger

from numpy.random import Generator, PCG64, SeedSequence


__all__ = ["sub_seed", "stream", "partition", "map_ordered"]

log = getLogger("wavicle.concurrency")


def sub_seed(seed, index):
    """ Seed sequence for one trajectory, a pure function of the run seed and
    the trajectory index.
    """
    return SeedSequence(entropy=int(seed), spawn_key=(int(index),))


def stream(seed, index):
    return Generator(PCG64(sub_seed(seed, index)))


def partition(count, parts):
    """ Split range(count) into at most `parts` contiguous, ordered blocks
    of near-equal size. Empty blocks are omitted.
    """
    parts = max(1, min(int(parts), count)) if count else 1
    size, extra = divmod(count, parts)
    blocks = []
    start = 0
    for i in range(parts):
        stop = start + size + (1 if i < extra else 0)
        if stop > start:
            blocks.append(range(start, stop))
        start = stop
    return blocks


def map_ordered(function, items, workers=1):
    """ Apply `function` to each item, in a thread pool when more than one
    worker is requested, and return the results in item order.
    """
    items = list(items)
    if workers <= 1 or len(items) <= 1:
        return [function(item) for item in items]
    log.debug("Mapping %d items over %d workers", len(items), workers)
    with ThreadPoolExecutor(max_workers=workers) as executor:
        return list(executor.map(function, items))
