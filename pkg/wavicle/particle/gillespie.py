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

""" Exact-jump (Gillespie) simulation of the particle model on the
unbounded occupation lattice. Each trajectory keeps a net count of
intra-system jumps, +1 hot to cold and −1 cold to hot, recorded at
regular times after the burn-in.
"""

from collections import namedtuple
from csv import writer
from logging import getLogger

import numpy as np

from wavicle.concurrency import map_ordered, partition, stream
from wavicle.core import SimulationError
from wavicle.estimators import PowerEstimate, estimate_batch_means, estimate_mean, estimate_variance_rate
from wavicle.numbers import OCCUPANCY_CAP
from wavicle.particle.lattice import COLD_TO_HOT, HOT_TO_COLD, MOVES


__all__ = ["GillespieRun", "simulate_jumps", "estimate_count_stats", "batch_means", "estimate_power_stats",
           "gillespie_simulate"]

log = getLogger("wavicle.particle")

DRAW_CHUNK = 4096

DUMP_HEADER = ("t", "n_h", "n_c", "event", "count")

EVENT_NAMES = ("bath_h_up", "bath_h_down", "bath_c_up", "bath_c_down", "hot_to_cold", "cold_to_hot")


class GillespieRun(namedtuple("GillespieRun", ["times", "counts", "jumps", "config", "delta"])):
    """ Net counts at the record times, one row per trajectory, and the
    total number of events per trajectory.
    """

    @property
    def seed(self):
        return self.config.seed


class _Draws(object):
    """ Uniform and exponential variates taken from a trajectory stream in
    fixed-size chunks.
    """

    def __init__(self, rng):
        self.rng = rng
        self.waits = self.picks = ()
        self.position = DRAW_CHUNK

    def next(self):
        if self.position == DRAW_CHUNK:
            self.waits = self.rng.standard_exponential(DRAW_CHUNK).tolist()
            self.picks = self.rng.random(DRAW_CHUNK).tolist()
            self.position = 0
        i = self.position
        self.position += 1
        return self.waits[i], self.picks[i]


def _trajectory(params, config, index, trace=None):
    rng = stream(config.seed, index)
    k_h, k_c = params.kappa_h, params.kappa_c
    m_h, m_c = params.nbar_h, params.nbar_c
    rate = params.transfer_rate
    n_h = int(rng.geometric(1.0 / (m_h + 1.0))) - 1
    n_c = int(rng.geometric(1.0 / (m_c + 1.0))) - 1
    draws = _Draws(rng)

    n_records = int(config.window / config.record_dt + 1e-9) + 1
    records = [0] * n_records
    record = 0
    next_record = 0.0
    t = -config.t_burn
    count = 0
    base = 0
    jumps = 0
    while record < n_records:
        rates = (k_h * m_h * (n_h + 1), k_h * (m_h + 1) * n_h,
                 k_c * m_c * (n_c + 1), k_c * (m_c + 1) * n_c,
                 rate * n_h * (n_c + 1), rate * n_c * (n_h + 1))
        total = sum(rates)
        wait, pick = draws.next()
        t_next = t + wait / total if total > 0 else float("inf")
        while record < n_records and next_record <= t_next:
            if record == 0:
                base = count
            records[record] = count - base
            record += 1
            next_record = record * config.record_dt
        if record == n_records:
            break
        threshold = pick * total
        event = 0
        while event < 5 and threshold >= rates[event]:
            threshold -= rates[event]
            event += 1
        while rates[event] == 0:
            event -= 1
        d_h, d_c = MOVES[event]
        n_h += d_h
        n_c += d_c
        if event == HOT_TO_COLD:
            count += 1
        elif event == COLD_TO_HOT:
            count -= 1
        t = t_next
        jumps += 1
        if n_h > OCCUPANCY_CAP or n_c > OCCUPANCY_CAP:
            raise SimulationError("trajectory %d exceeded the occupancy cap %d at t = %g (n_h=%d, n_c=%d)" %
                                  (index, OCCUPANCY_CAP, t, n_h, n_c))
        if trace is not None and t >= 0:
            trace.append((t, n_h, n_c, EVENT_NAMES[event], count - base))
    return records, jumps


def _run_block(params, config, indices):
    counts = []
    jumps = []
    trace = [] if 0 in indices else None
    for index in indices:
        records, events = _trajectory(params, config, index, trace if index == 0 else None)
        counts.append(records)
        jumps.append(events)
    log.debug("Finished Gillespie block %r", indices)
    return counts, jumps, trace


def simulate_jumps(params, config, dump=None):
    """ Simulate `config.n_traj` trajectories with initial occupations drawn
    from the bath geometric distributions. Trajectory `i` uses the stream
    keyed by (seed, i). With `dump`, the post-burn-in events of trajectory
    0 are written as CSV.
    """
    config.check(params, integrator=False)
    blocks = partition(config.n_traj, config.workers)
    log.info("Simulating %d jump trajectories over %g time units", config.n_traj, config.t_total)
    results = map_ordered(lambda block: _run_block(params, config, block), blocks, config.workers)
    counts = np.array([row for result in results for row in result[0]], dtype=float)
    jumps = np.array([value for result in results for value in result[1]])
    times = np.arange(counts.shape[1]) * config.record_dt
    if dump is not None:
        out = writer(dump, lineterminator="\n")
        out.writerow(DUMP_HEADER)
        for t, n_h, n_c, event, count in results[0][2]:
            out.writerow(["%.12g" % t, n_h, n_c, event, count])
    return GillespieRun(times, counts, jumps, config, params.delta)


def estimate_count_stats(run):
    """ Mean count rate and count-variance rate, both per unit time.
    """
    window = run.times[-1]
    rate = estimate_mean(run.counts[:, -1] / window, run.seed)
    rate.diagnostics["events_per_trajectory"] = float(run.jumps.mean())
    variance = estimate_variance_rate(run.times, run.counts, run.seed)
    return rate, variance


def batch_means(run, batches=20):
    """ Count-variance rate from batch increments of the transfer count.
    """
    return estimate_batch_means(run.times, run.counts, run.seed, batches)


def _scaled(estimate, factor):
    return estimate._replace(mean=estimate.mean * factor, std_error=estimate.std_error * abs(factor))


def estimate_power_stats(run):
    rate, variance = estimate_count_stats(run)
    return PowerEstimate(_scaled(rate, run.delta), _scaled(variance, run.delta ** 2), run.delta)


def gillespie_simulate(params, config, dump=None):
    return estimate_count_stats(simulate_jumps(params, config, dump))
