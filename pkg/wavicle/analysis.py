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

""" Derived quantities: Fano factors and their gaps, entropy production
and uncertainty bounds, limit comparisons, the coupling strengths that
maximise the quantum-particle mismatch, and parameter sweeps.
"""

from collections import OrderedDict, namedtuple
from logging import getLogger
from math import inf, isinf

import numpy as np
from scipy.optimize import minimize_scalar

from wavicle import closed_form, fock, moments
from wavicle.concurrency import map_ordered
from wavicle.core import (MODELS, PARTICLE, QUANTUM, UNDEFINED, WAVE, EngineParams, ParameterError, WaveParams,
                          validate)
from wavicle.estimators import TrajectoryConfig
from wavicle.numbers import FANO_FLOOR, MAXIMIZER_SCAN_POINTS, MAXIMIZER_TOLERANCE
from wavicle.particle import gillespie, lattice
from wavicle.wave import trajectory


__all__ = ["ROUTES", "MODEL_TAGS", "evaluate", "fano", "fano_gaps", "entropy_rate", "tur_bound", "wave_tur_bound",
           "TURReport", "tur_check", "MismatchMaxima", "find_mismatch_maxima", "SweepSpec", "SweepResult",
           "run_sweep", "coupling_sweep_spec", "occupation_sweep_spec", "wave_offset_difference", "wave_antibunching_predicted",
           "LimitReport", "limit_report"]

log = getLogger("wavicle.analysis")

CLOSED_FORM = "closed_form"
MOMENT = "moment"
FCS = "fcs"
FOCK = "fock"
MONTE_CARLO = "monte_carlo"

#: Routes available for each model.
ROUTES = {
    QUANTUM: (CLOSED_FORM, MOMENT, FOCK),
    WAVE: (CLOSED_FORM, MOMENT, MONTE_CARLO),
    PARTICLE: (CLOSED_FORM, MOMENT, FCS, MONTE_CARLO),
}

MODEL_TAGS = OrderedDict([(QUANTUM, "q"), (WAVE, "w"), (PARTICLE, "p")])


def evaluate(params, model, route=CLOSED_FORM, offset_c=0.0, trajectory_config=None, fock_truncation=None):
    """ `PowerStats` of one model by one route. Monte Carlo routes use
    `trajectory_config`, or defaults scaled to the parameters.
    """
    if route not in ROUTES.get(model, ()):
        raise ParameterError("route %r is not available for the %s model" % (route, model))
    subject = WaveParams(params, offset_c) if model == WAVE else params
    if route == CLOSED_FORM:
        return closed_form.power_stats(subject, model)
    if route == MOMENT:
        if model == PARTICLE:
            return lattice.power_stats(params, route="moment")
        return moments.power_stats(subject, model)
    if route == FCS:
        return lattice.power_stats(params, route="fcs")
    if route == FOCK:
        return fock.oracle_power_stats(params, fock_truncation)
    config = trajectory_config or TrajectoryConfig.for_params(params)
    if model == WAVE:
        return trajectory.estimate_power_stats(trajectory.simulate_wave(subject, config)).stats
    return gillespie.estimate_power_stats(gillespie.simulate_jumps(params, config)).stats


def fano(stats, params=None):
    """ ⟨⟨P²⟩⟩/(⟨P⟩Δ), or `UNDEFINED` at vanishing mean power.
    """
    return stats.fano


def fano_gaps(params):
    """ (ℱ_q − ℱ_w, ℱ_q − ℱ_p) in closed form:

        ℱ_q − ℱ_w = (n̄_h + n̄_c)/(n̄_h − n̄_c)
        ℱ_q − ℱ_p = (𝒮_p − 𝒮)(n̄_h − n̄_c)/ℰ
    """
    if abs(closed_form.mean_power(params)) < FANO_FLOOR:
        return UNDEFINED, UNDEFINED
    bias = params.bias
    wave_gap = (params.nbar_h + params.nbar_c) / bias
    particle_gap = closed_form.particle_mismatch(params) * bias / closed_form.equilibrium_coefficient(params)
    return wave_gap, particle_gap


def entropy_rate(params, mean_current):
    """ σ̇ = ⟨I⟩(Ω_c/T_c − Ω_h/T_h).
    """
    if mean_current == 0:
        return 0.0
    x_h, x_c = params.inverse_temperatures
    return mean_current * (x_c - x_h)


def tur_bound(params):
    """ Lower bound 2/(Ω_c/T_c − Ω_h/T_h) on the Fano factor, or
    `UNDEFINED` unless the hot bath is hotter.
    """
    x_h, x_c = params.inverse_temperatures
    if not x_c > x_h:
        return UNDEFINED
    return 0.0 if isinf(x_c) else 2.0 / (x_c - x_h)


def wave_tur_bound(params):
    """ Modified lower bound 2/(1/n̄_c − 1/n̄_h) that holds for the wave
    model.
    """
    n_h, n_c = params.nbar_h, params.nbar_c
    if not n_h > n_c:
        return UNDEFINED
    return 0.0 if n_c == 0 else 2.0 / (1.0 / n_c - 1.0 / n_h)


class TURReport(namedtuple("TURReport", ["model", "fano", "bound", "wave_bound", "entropy_rate"])):
    """ Fano factor of one model against the standard and modified bounds.
    """

    @property
    def standard_satisfied(self):
        if self.fano is UNDEFINED or self.bound is UNDEFINED:
            return UNDEFINED
        return self.fano >= self.bound * (1.0 - 1e-12)

    @property
    def wave_satisfied(self):
        if self.fano is UNDEFINED or self.wave_bound is UNDEFINED:
            return UNDEFINED
        return self.fano >= self.wave_bound * (1.0 - 1e-12)

    @property
    def satisfied(self):
        """ The bound the model must obey: the modified one for the wave
        model and the standard one otherwise.
        """
        return self.wave_satisfied if self.model == WAVE else self.standard_satisfied


def tur_check(params, stats, model):
    return TURReport(model, stats.fano, tur_bound(params), wave_tur_bound(params),
                     entropy_rate(params, stats.mean_current))


class MismatchMaxima(namedtuple("MismatchMaxima", ["noise", "fano_gap"])):
    """ Values of g/κ that maximise (𝒮_p − 𝒮)(n̄_h − n̄_c)² and ℱ_q − ℱ_p.
    """


def _maximise(objective, low=-2.0, high=2.0):
    """ Golden-section search on log10(g/κ), bracketed by a coarse scan.
    """
    grid = np.linspace(low, high, MAXIMIZER_SCAN_POINTS)
    values = np.array([objective(x) for x in grid])
    best = int(np.argmax(values))
    if best == 0 or best == len(grid) - 1:
        log.warning("Maximum lies on the edge of the scanned range")
        return 10.0 ** grid[best]
    result = minimize_scalar(lambda x: -objective(x), bracket=(grid[best - 1], grid[best], grid[best + 1]),
                             method="golden", tol=MAXIMIZER_TOLERANCE)
    return 10.0 ** result.x


def find_mismatch_maxima(params):
    """ Locate both maxima over g/κ ∈ [10⁻², 10²] for equal bath couplings.
    """
    if params.kappa_h != params.kappa_c:
        raise ParameterError("mismatch maxima need equal bath couplings")
    kappa = params.kappa_h
    if params.bias == 0:
        raise ParameterError("mismatch vanishes identically at equal occupations")
    bias = params.bias

    def noise(x):
        return closed_form.particle_mismatch(params.with_coupling(kappa * 10.0 ** x)) * bias ** 2

    def fano_gap(x):
        return fano_gaps(params.with_coupling(kappa * 10.0 ** x))[1]

    maxima = MismatchMaxima(_maximise(noise), _maximise(fano_gap))
    log.info("Mismatch maxima at g/kappa = %.6f (noise) and %.6f (Fano gap)", *maxima)
    return maxima


def wave_offset_difference(params, offset_c):
    """ Quantum minus offset-wave noise, ℰ[(1 − 2C)(n̄_h + n̄_c) − 2C²].
    """
    c = float(offset_c)
    return closed_form.equilibrium_coefficient(params) * ((1.0 - 2.0 * c) * (params.nbar_h + params.nbar_c) - 2.0 * c * c)


def wave_antibunching_predicted(params):
    """ Whether the weak-coupling wave Fano factor 2n̄_hn̄_c/(n̄_h − n̄_c)
    falls below one.
    """
    return 2.0 * params.nbar_h * params.nbar_c < params.bias


class LimitReport(namedtuple("LimitReport", ["poisson_mean", "poisson_noise", "hybridized_mean",
                                             "hybridized_noise"])):
    """ Relative deviations of the particle model from its weak-coupling
    (Poisson) and strong-coupling (hybridised) limits.
    """


def _relative(value, reference):
    if reference == 0:
        return 0.0 if value == 0 else inf
    return abs(value - reference) / abs(reference)


def limit_report(params):
    exact = closed_form.power_stats(params, PARTICLE)
    poisson = closed_form.poisson_limit(params)
    hybridized = closed_form.hybridized_limit(params)
    return LimitReport(_relative(exact.mean_power, poisson.mean_power),
                       _relative(exact.zero_freq_noise, poisson.zero_freq_noise),
                       _relative(exact.mean_power, hybridized.mean_power),
                       _relative(exact.zero_freq_noise, hybridized.zero_freq_noise))


AXES = {"g": "g_over_kappa", "nh": "nbar_h"}


class SweepSpec(namedtuple("SweepSpec", ["axis", "grid", "base", "models", "routes", "offset_c",
                                         "trajectory", "workers"])):
    """ One-dimensional sweep over g/κ_h (`axis="g"`) or n̄_h
    (`axis="nh"`) with all other parameters taken from `base`.
    """

    def __new__(cls, axis, grid, base, models=MODELS, routes=None, offset_c=0.0, trajectory=None, workers=1):
        routes = dict(routes or {})
        for model in models:
            routes.setdefault(model, CLOSED_FORM)
        return super(SweepSpec, cls).__new__(cls, axis, tuple(float(x) for x in grid), base, tuple(models),
                                             routes, float(offset_c), trajectory, int(workers))

    @property
    def x_name(self):
        return AXES.get(self.axis, self.axis)

    def check(self):
        problems = []
        if self.axis not in AXES:
            problems.append("unknown sweep axis %r" % (self.axis,))
        if any(b <= a for a, b in zip(self.grid, self.grid[1:])):
            problems.append("sweep grid must be strictly increasing")
        for model in self.models:
            if model not in ROUTES:
                problems.append("unknown model %r" % (model,))
            elif self.routes[model] not in ROUTES[model]:
                problems.append("route %r is not available for the %s model" % (self.routes[model], model))
        if problems:
            raise ParameterError(*problems)
        return self

    def point(self, x):
        if self.axis == "g":
            return self.base.with_coupling(x * self.base.kappa_h)
        return self.base.with_occupations(x, self.base.nbar_c)

    @property
    def columns(self):
        columns = [self.x_name]
        for tag in MODEL_TAGS.values():
            columns.extend(["power_" + tag, "noise_" + tag, "fano_" + tag])
        return columns + ["tur_bound", "tur_bound_wave"]


class SweepResult(namedtuple("SweepResult", ["spec", "rows"])):
    """ Ordered sweep rows. Each row maps column names to values, with
    `None` for models that were not requested and an `errors` entry
    naming models whose evaluation failed.
    """

    @property
    def columns(self):
        return self.spec.columns


def _sweep_row(spec, x):
    row = OrderedDict((column, None) for column in spec.columns)
    row[spec.x_name] = x
    row["errors"] = OrderedDict()
    try:
        params = validate(spec.point(x))
    except ParameterError as error:
        for model in spec.models:
            row["errors"][model] = str(error)
        return row
    for model in spec.models:
        tag = MODEL_TAGS[model]
        config = None
        if spec.routes[model] == MONTE_CARLO:
            config = TrajectoryConfig.for_params(params, **dict(spec.trajectory or {}))
        try:
            stats = evaluate(params, model, spec.routes[model], spec.offset_c, config)
        except (ArithmeticError, ParameterError, RuntimeError) as error:
            log.warning("Sweep point %s = %g failed for the %s model: %s", spec.x_name, x, model, error)
            row["errors"][model] = str(error)
            continue
        row["power_" + tag] = stats.mean_power
        row["noise_" + tag] = stats.zero_freq_noise
        row["fano_" + tag] = stats.fano
    row["tur_bound"] = tur_bound(params)
    row["tur_bound_wave"] = wave_tur_bound(params)
    return row


def run_sweep(spec):
    """ Evaluate every grid point, in grid order. A failure at one point is
    recorded in its row and the sweep continues.
    """
    spec.check()
    log.info("Sweeping %s over %d points", spec.x_name, len(spec.grid))
    rows = map_ordered(lambda x: _sweep_row(spec, x), spec.grid, spec.workers)
    return SweepResult(spec, rows)


def coupling_sweep_spec(num=61, **settings):
    """ Noise against g/κ ∈ [10⁻¹, 10²] at n̄ = (2, 0.1) and κ_h = κ_c.
    """
    base = _sweep_base(nbar_h=2.0)
    return SweepSpec("g", np.logspace(-1.0, 2.0, num) if num else (), base, **settings)


def occupation_sweep_spec(g_over_kappa=2.0 / 3.0, num=61, **settings):
    """ Fano factors against n̄_h ∈ [0.1, 100] at fixed g/κ and n̄_c = 0.1.
    """
    base = _sweep_base(g=g_over_kappa)
    return SweepSpec("nh", np.logspace(-1.0, 2.0, num) if num else (), base, **settings)


def _sweep_base(g=1.0, kappa=1.0, nbar_h=2.0, nbar_c=0.1, delta=1.0):
    return EngineParams.direct(g, kappa, kappa, nbar_h, nbar_c, delta)
