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

""" Monte Carlo configuration and estimators shared by the wave and
particle simulators.

Trajectories record an accumulated quantity (work for the wave model,
net transfer count for the particle model) at regular times after the
burn-in. Its ensemble variance grows linearly at long times with slope
equal to the zero-frequency noise. Batch means of the same records give
an independent estimate of the integrated autocorrelation.
"""

from collections import namedtuple
from math import sqrt

import numpy as np

from wavicle.core import ParameterError, PowerStats
from wavicle.numbers import JACKKNIFE_GROUPS, MIN_NOISE_TRAJECTORIES


__all__ = ["TrajectoryConfig", "TrajectoryEstimate", "PowerEstimate", "jackknife", "estimate_mean", "variance_slope",
           "estimate_variance_rate", "estimate_batch_means", "z_score"]

EULER_MARUYAMA = "euler-maruyama"


class TrajectoryConfig(namedtuple("TrajectoryConfig", ["dt", "t_burn", "t_total", "n_traj", "seed", "scheme",
                                                       "record_dt", "workers"])):
    """ Monte Carlo run settings. `t_total` includes the burn-in; records
    are taken every `record_dt` during the remaining window.
    """

    def __new__(cls, dt, t_burn, t_total, n_traj, seed=0, scheme=EULER_MARUYAMA, record_dt=None, workers=1):
        if record_dt is None:
            record_dt = dt
        return super(TrajectoryConfig, cls).__new__(cls, float(dt), float(t_burn), float(t_total), int(n_traj),
                                                    int(seed), scheme, float(record_dt), int(workers))

    @classmethod
    def for_params(cls, params, **settings):
        """ Defaults scaled to the slowest bath and the fastest rate.
        """
        slowest = min(params.kappa_h, params.kappa_c)
        fastest = max(params.kappa_h, params.kappa_c, params.g)
        dt = settings.pop("dt", 0.01 / fastest)
        t_burn = settings.pop("t_burn", 10.0 / slowest)
        t_total = settings.pop("t_total", t_burn + 2000.0 / slowest)
        n_traj = settings.pop("n_traj", 512)
        record_dt = settings.pop("record_dt", max(dt, 0.25 / fastest))
        return cls(dt, t_burn, t_total, n_traj, record_dt=record_dt, **settings)

    @property
    def window(self):
        return self.t_total - self.t_burn

    @property
    def record_every(self):
        return max(1, int(round(self.record_dt / self.dt)))

    def with_step(self, dt):
        return self._replace(dt=float(dt))

    def check(self, params=None, integrator=True):
        """ Reject settings that cannot give a meaningful run; with `params`,
        also enforce the burn-in limit and, for integrated runs, the step
        limit.
        """
        problems = []
        if not self.dt > 0:
            problems.append("dt must be positive")
        if self.t_burn < 0:
            problems.append("t_burn must be non-negative")
        if not self.t_total > self.t_burn:
            problems.append("t_total must exceed t_burn")
        if self.n_traj < 1:
            problems.append("at least one trajectory is needed")
        if self.workers < 1:
            problems.append("workers must be at least 1")
        if self.scheme != EULER_MARUYAMA:
            problems.append("unsupported scheme %r" % self.scheme)
        if params is not None and integrator:
            rates = [params.kappa_h, params.kappa_c] + ([params.g] if params.g > 0 else [])
            limit = 0.01 / max(rates)
            if self.dt > limit * (1 + 1e-12):
                problems.append("dt %g exceeds 0.01/max rate = %g" % (self.dt, limit))
        if params is not None:
            burn = 10.0 / min(params.kappa_h, params.kappa_c)
            if self.t_burn < burn * (1 - 1e-12):
                problems.append("t_burn %g is shorter than 10/min(kappa) = %g" % (self.t_burn, burn))
        if problems:
            raise ParameterError(*problems)
        return self


class TrajectoryEstimate(namedtuple("TrajectoryEstimate", ["mean", "std_error", "n_samples", "seed",
                                                           "diagnostics"])):
    """ Monte Carlo estimate with its statistical standard error.
    """

    def __str__(self):
        return "%.6g ± %.2g" % (self.mean, self.std_error)

    def agrees_with(self, target, sigma=3.0, relative=0.05):
        """ True when the estimate lies within `sigma` standard errors of
        `target` and also within `relative` of it.
        """
        deviation = abs(self.mean - target)
        return abs(z_score(self, target)) <= sigma and deviation <= relative * abs(target)


class PowerEstimate(namedtuple("PowerEstimate", ["mean_power", "zero_freq_noise", "delta"])):
    """ Pair of estimates for the mean power and the zero-frequency noise.
    """

    @property
    def stats(self):
        return PowerStats(self.mean_power.mean, self.zero_freq_noise.mean, self.delta)

    def z_scores(self, target):
        """ Deviations from a reference `PowerStats` in standard errors.
        """
        return z_score(self.mean_power, target.mean_power), z_score(self.zero_freq_noise, target.zero_freq_noise)


def z_score(estimate, target):
    difference = estimate.mean - target
    if estimate.std_error > 0:
        return difference / estimate.std_error
    return 0.0 if difference == 0 else float("inf") * np.sign(difference)


def jackknife(statistic, data, groups=JACKKNIFE_GROUPS):
    """ Delete-one-group jackknife over the first axis of `data`.
    Returns (full-sample statistic, standard error, number of groups).
    """
    count = data.shape[0]
    groups = max(2, min(groups, count))
    full = statistic(data)
    blocks = np.array_split(np.arange(count), groups)
    replicates = np.array([statistic(np.delete(data, block, axis=0)) for block in blocks])
    spread = replicates - replicates.mean()
    error = sqrt((groups - 1.0) / groups * float(np.dot(spread, spread)))
    return full, error, groups


def estimate_mean(values, seed, instantaneous_variance=None):
    """ Mean of independent per-trajectory values.
    """
    values = np.asarray(values, dtype=float)
    count = values.size
    mean = float(values.mean())
    error = float(values.std(ddof=1) / sqrt(count)) if count > 1 else 0.0
    diagnostics = {"trajectories": count}
    if instantaneous_variance is not None and error > 0:
        diagnostics["effective_samples"] = float(instantaneous_variance / error ** 2)
    return TrajectoryEstimate(mean, error, count, seed, diagnostics)


def variance_slope(times, records):
    """ Slope of the ensemble variance of `records` against time over the
    final half of the window.
    """
    half = len(times) // 2
    variance = records[:, half:].var(axis=0, ddof=1)
    return float(np.polyfit(times[half:], variance, 1)[0])


def _require_trajectories(records):
    if records.shape[0] < MIN_NOISE_TRAJECTORIES:
        raise ParameterError("noise estimates need at least %d trajectories (got %d)" %
                             (MIN_NOISE_TRAJECTORIES, records.shape[0]))
    if records.shape[1] < 4:
        raise ParameterError("noise estimates need at least four record times")


def estimate_variance_rate(times, records, seed):
    """ Zero-frequency noise as the long-time growth rate of the variance of
    the accumulated quantity, with a jackknife standard error.
    """
    _require_trajectories(records)
    slope, error, groups = jackknife(lambda subset: variance_slope(times, subset), records)
    diagnostics = {"trajectories": records.shape[0], "groups": groups, "fit_points": len(times) - len(times) // 2}
    if error > 0:
        diagnostics["effective_samples"] = 2.0 * (slope / error) ** 2
    return TrajectoryEstimate(slope, error, records.shape[0], seed, diagnostics)


def batch_means(times, records, batches):
    """ Pooled variance of batch increments divided by the batch length.
    """
    per_batch = (len(times) - 1) // batches
    marks = np.arange(batches + 1) * per_batch
    increments = np.diff(records[:, marks], axis=1)
    length = times[per_batch] - times[0]
    rate = increments.mean() / length
    return float(((increments - rate * length) ** 2).sum() / (increments.size - 1) / length)


def estimate_batch_means(times, records, seed, batches=20):
    """ Zero-frequency noise from batch means of the recorded increments, as
    a cross-check on the variance slope.
    """
    _require_trajectories(records)
    if (len(times) - 1) // batches < 1:
        raise ParameterError("too few record times for %d batches" % batches)
    value, error, groups = jackknife(lambda subset: batch_means(times, subset, batches), records)
    diagnostics = {"trajectories": records.shape[0], "groups": groups, "batches": batches}
    return TrajectoryEstimate(value, error, records.shape[0] * batches, seed, diagnostics)
