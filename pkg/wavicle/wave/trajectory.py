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

""" Euler-Maruyama integration of the rotating-frame classical Langevin
equations of the wave model,

    dA_h = (-κ_h/2 A_h - ig A_c) dt + dξ_h
    dA_c = (-κ_c/2 A_c - ig A_h) dt + dξ_c

with independent complex Gaussian increments of variance κ_α Φ_α dt. The
hot-to-cold energy current is I = -2g Im(A_h* A_c) and the work is
W(t) = Δ ∫ I dt over the window after the burn-in.
"""

from collections import namedtuple
from csv import writer
from logging import getLogger
from math import sqrt

import numpy as np

from wavicle.concurrency import map_ordered, partition, stream
from wavicle.core import ParameterError, SimulationError, as_wave
from wavicle.estimators import PowerEstimate, estimate_batch_means, estimate_mean, estimate_variance_rate
from wavicle.numbers import AMPLITUDE_CAP


__all__ = ["WaveRun", "StepHalvingReport", "simulate_wave", "estimate_power_stats", "batch_means",
           "step_halving_check", "CHUNK_STEPS"]

log = getLogger("wavicle.wave")

CHUNK_STEPS = 2048

DUMP_HEADER = ("t", "re_a_h", "im_a_h", "re_a_c", "im_a_c", "current")


class WaveRun(namedtuple("WaveRun", ["times", "work", "current", "occupations", "config", "delta"])):
    """ Recorded output of a wave simulation.

    `times` are record times measured from the end of the burn-in and
    `work` holds W at those times, one row per trajectory. `current` holds
    the instantaneous current at the record times and `occupations` the
    time-averaged (|A_h|², |A_c|²) per trajectory.
    """

    @property
    def seed(self):
        return self.config.seed

    @property
    def n_traj(self):
        return self.work.shape[0]


def _run_block(wave, config, indices):
    base = wave.base
    k_h, k_c, g = base.kappa_h, base.kappa_c, base.g
    dt = config.dt
    burn_steps = int(round(config.t_burn / dt))
    total_steps = burn_steps + int(round(config.window / dt))
    every = config.record_every
    n_records = (total_steps - burn_steps) // every + 1
    count = len(indices)

    generators = [stream(config.seed, index) for index in indices]
    scale_h = sqrt(k_h * wave.phi_h * dt / 2.0)
    scale_c = sqrt(k_c * wave.phi_c * dt / 2.0)
    start = np.array([rng.standard_normal(4) for rng in generators]).reshape(count, 4)
    a_h = sqrt(wave.phi_h / 2.0) * (start[:, 0] + 1j * start[:, 1])
    a_c = sqrt(wave.phi_c / 2.0) * (start[:, 2] + 1j * start[:, 3])

    damp_h = 1.0 - 0.5 * k_h * dt
    damp_c = 1.0 - 0.5 * k_c * dt
    hop = 1j * g * dt

    work = np.zeros(count)
    work_records = np.zeros((count, n_records))
    current_records = np.zeros((count, n_records))
    population = np.zeros((count, 2))
    trace = [] if 0 in indices else None
    record = 0

    step = 0
    while step < total_steps:
        chunk = min(CHUNK_STEPS, total_steps - step)
        noise = np.stack([rng.standard_normal((chunk, 4)) for rng in generators], axis=1)
        xi_h = scale_h * (noise[:, :, 0] + 1j * noise[:, :, 1])
        xi_c = scale_c * (noise[:, :, 2] + 1j * noise[:, :, 3])
        for i in range(chunk):
            current = -2.0 * g * np.imag(np.conj(a_h) * a_c)
            if step >= burn_steps:
                elapsed = step - burn_steps
                if elapsed % every == 0:
                    work_records[:, record] = work
                    current_records[:, record] = current
                    if trace is not None:
                        trace.append((elapsed * dt, a_h[0].real, a_h[0].imag, a_c[0].real, a_c[0].imag, current[0]))
                    record += 1
                work += base.delta * current * dt
                population[:, 0] += np.abs(a_h) ** 2
                population[:, 1] += np.abs(a_c) ** 2
            a_h, a_c = damp_h * a_h - hop * a_c + xi_h[i], damp_c * a_c - hop * a_h + xi_c[i]
            step += 1
        largest = max(np.max(np.abs(a_h)), np.max(np.abs(a_c)))
        if not np.isfinite(largest) or largest > AMPLITUDE_CAP:
            raise SimulationError("amplitude overflow (|A| = %g) at t = %g; reduce dt" % (largest, step * dt))
    if record < n_records:
        current = -2.0 * g * np.imag(np.conj(a_h) * a_c)
        work_records[:, record] = work
        current_records[:, record] = current
        if trace is not None:
            trace.append((record * every * dt, a_h[0].real, a_h[0].imag, a_c[0].real, a_c[0].imag, current[0]))
    log.debug("Finished wave block of %d trajectories", count)
    return work_records, current_records, population / (total_steps - burn_steps), trace


def simulate_wave(params, config, dump=None):
    """ Run `config.n_traj` independent trajectories. Trajectory `i` draws
    from the stream keyed by (seed, i), so the output does not depend on
    the number of workers. With `dump`, a text stream, the record-time
    amplitudes and current of trajectory 0 are written as CSV.
    """
    wave = as_wave(params)
    if wave.phi_h < 0 or wave.phi_c < 0:
        raise ParameterError("wave noise strengths must be non-negative (got %g, %g)" % (wave.phi_h, wave.phi_c))
    config.check(wave.base)
    blocks = partition(config.n_traj, config.workers)
    log.info("Simulating %d wave trajectories over %g time units in %d blocks",
             config.n_traj, config.t_total, len(blocks))
    results = map_ordered(lambda block: _run_block(wave, config, block), blocks, config.workers)
    work = np.concatenate([result[0] for result in results])
    current = np.concatenate([result[1] for result in results])
    occupations = np.concatenate([result[2] for result in results])
    times = np.arange(work.shape[1]) * config.record_every * config.dt
    if dump is not None:
        out = writer(dump, lineterminator="\n")
        out.writerow(DUMP_HEADER)
        for row in results[0][3]:
            out.writerow(["%.12g" % value for value in row])
    return WaveRun(times, work, current, occupations, config, wave.base.delta)


def estimate_power_stats(run):
    """ Mean power from the accumulated work per unit time, and noise from
    the growth rate of its ensemble variance.
    """
    window = run.times[-1]
    instantaneous = run.delta * run.current
    mean = estimate_mean(run.work[:, -1] / window, run.seed, instantaneous_variance=instantaneous.var())
    noise = estimate_variance_rate(run.times, run.work, run.seed)
    return PowerEstimate(mean, noise, run.delta)


def batch_means(run, batches=20):
    return estimate_batch_means(run.times, run.work, run.seed, batches)


class StepHalvingReport(namedtuple("StepHalvingReport", ["coarse", "fine", "mean_z", "noise_z"])):

    @property
    def passed(self):
        return abs(self.mean_z) <= 3.0 and abs(self.noise_z) <= 3.0


def _difference_z(first, second):
    error = sqrt(first.std_error ** 2 + second.std_error ** 2)
    difference = first.mean - second.mean
    return difference / error if error > 0 else 0.0


def step_halving_check(params, config):
    """ Repeat a run at dt/2 with the same seed and compare both estimates
    in units of their combined standard error.
    """
    coarse = estimate_power_stats(simulate_wave(params, config))
    fine = estimate_power_stats(simulate_wave(params, config.with_step(config.dt / 2.0)))
    report = StepHalvingReport(coarse, fine, _difference_z(coarse.mean_power, fine.mean_power),
                               _difference_z(coarse.zero_freq_noise, fine.zero_freq_noise))
    coarse.mean_power.diagnostics["step_halving_drift"] = report.mean_z
    coarse.zero_freq_noise.diagnostics["step_halving_drift"] = report.noise_z
    return report
