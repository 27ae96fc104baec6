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

""" Cross-route verification battery.

Each check is a named function that returns `(passed, detail)`. Checks
marked quick use closed forms, small dense systems and moment equations
only; the rest run lattice, Fock-space and Monte Carlo routes.
"""

from collections import OrderedDict, namedtuple
from logging import getLogger
from math import sqrt
from time import monotonic

import numpy as np

from wavicle import analysis, closed_form, fock, moments
from wavicle.core import PARTICLE, QUANTUM, WAVE, EngineParams, ParameterError, WaveParams, validate
from wavicle.estimators import TrajectoryConfig, z_score
from wavicle.numbers import DRAZIN_TOLERANCE
from wavicle.particle import gillespie, lattice
from wavicle.wave import trajectory


__all__ = ["TOLERANCES", "CHECKS", "CheckResult", "random_grid", "reference_params", "run_checks"]

log = getLogger("wavicle.verify")

TOLERANCES = OrderedDict([
    ("power", 1e-8),
    ("noise", 1e-8),
    ("particle", 1e-10),
    ("truncation", 1e-4),
    ("convergence", 1e-6),
    ("drazin", DRAZIN_TOLERANCE),
    ("limit", 1e-2),
    ("gap", 1e-10),
    ("maximizer", 1e-3),
    ("offset", 1e-12),
    ("sigma", 3.0),
    ("monte_carlo", 0.05),
])

GRID_POINTS = 200

# Batch counts for the Monte Carlo noise checks: about 10^4 pooled increments,
# each batch spanning 100 or more relaxation times.
WAVE_BATCHES = 20
JUMP_BATCHES = 40


class CheckResult(namedtuple("CheckResult", ["name", "passed", "detail", "seconds"])):
    pass


class Context(object):

    def __init__(self, grid_seed=0, tolerances=None):
        self.grid_seed = grid_seed
        self.tolerances = OrderedDict(TOLERANCES)
        for name, value in (tolerances or {}).items():
            if name not in self.tolerances:
                raise ParameterError("unknown tolerance %r (known: %s)" % (name, ", ".join(self.tolerances)))
            self.tolerances[name] = float(value)
        self.grid = random_grid(grid_seed)

    def __getitem__(self, name):
        return self.tolerances[name]


CHECKS = OrderedDict()


def check(name, quick=True):
    def register(function):
        CHECKS[name] = (function, quick)
        return function
    return register


def reference_params(nbar_h=2.0, nbar_c=0.1, g=1.0):
    return EngineParams.direct(g, 1.0, 1.0, nbar_h, nbar_c, 1.0)


def random_grid(seed, points=GRID_POINTS):
    """ Random non-equilibrium parameter sets with n̄_c < n̄_h ≤ 10, g/κ
    log-uniform over four decades and half a decade of bath asymmetry
    either way.
    """
    rng = np.random.default_rng(seed)
    grid = []
    for _ in range(points):
        kappa_h = 10.0 ** rng.uniform(-0.5, 0.5)
        kappa_c = 10.0 ** rng.uniform(-0.5, 0.5)
        g = sqrt(kappa_h * kappa_c) * 10.0 ** rng.uniform(-2.0, 2.0)
        nbar_h = rng.uniform(0.05, 10.0)
        nbar_c = nbar_h * rng.uniform(0.0, 0.9)
        delta = rng.uniform(0.5, 2.0)
        grid.append(validate(EngineParams.direct(g, kappa_h, kappa_c, nbar_h, nbar_c, delta)))
    return grid


def _relative(value, reference):
    return abs(value - reference) / max(abs(reference), 1e-300)


def _worst(pairs):
    """ Largest relative deviation among (value, reference) pairs.
    """
    return max(_relative(value, reference) for value, reference in pairs)


@check("power_equality")
def check_power_equality(context):
    worst = 0.0
    for params in context.grid:
        target = closed_form.mean_power(params)
        worst = max(worst, _worst([
            (closed_form.conductance_power(params), target),
            (moments.power_stats(params, QUANTUM).mean_power, target),
            (moments.power_stats(WaveParams(params, 0.5), WAVE).mean_power, target),
            (lattice.power_stats(params, "moment").mean_power, target),
        ]))
    return worst < context["power"], "max relative deviation %.2e" % worst


@check("drazin_power_equality", quick=False)
def check_drazin_power_equality(context):
    worst = _worst((lattice.power_stats(params, "fcs").mean_power, closed_form.mean_power(params))
                   for params in context.grid)
    return worst < context["power"], "Drazin route vs closed form, max relative deviation %.2e" % worst


@check("quantum_noise")
def check_quantum_noise(context):
    worst = _worst((moments.power_stats(params, QUANTUM).zero_freq_noise, closed_form.quantum_noise(params)[1])
                   for params in context.grid)
    return worst < context["noise"], "moment route vs closed form, max relative deviation %.2e" % worst


@check("wave_noise")
def check_wave_noise(context):
    worst = 0.0
    for params in context.grid:
        for offset in (0.0, 0.25, 0.5, 1.0):
            wave = WaveParams(params, offset)
            worst = max(worst, _relative(moments.power_stats(wave, WAVE).zero_freq_noise, closed_form.wave_noise(wave)[1]))
    return worst < context["noise"], "moment route vs closed form over C, max relative deviation %.2e" % worst


@check("particle_moment_route")
def check_particle_moment_route(context):
    worst = _worst((lattice.fcs_cumulants_moments(params)[1] * params.delta ** 2, closed_form.particle_noise(params)[1])
                   for params in context.grid)
    return worst < context["particle"], "moment hierarchy vs closed form, max relative deviation %.2e" % worst


@check("equal_kappa")
def check_equal_kappa(context):
    worst = 0.0
    for params in context.grid:
        params = params._replace(kappa_c=params.kappa_h)
        worst = max(worst, _worst([
            (closed_form.equal_kappa_shot(params), closed_form.shot_coefficient(params)),
            (closed_form.equal_kappa_particle_shot(params),
             closed_form.shot_coefficient(params) + closed_form.particle_mismatch(params)),
        ]))
    return worst < context["noise"], "equal-coupling forms, max relative deviation %.2e" % worst


@check("limits")
def check_limits(context):
    worst_weak = worst_strong = 0.0
    for nbar_h, nbar_c in ((2.0, 0.1), (0.5, 0.2), (10.0, 3.0)):
        weak = analysis.limit_report(reference_params(nbar_h, nbar_c, g=1e-2))
        strong = analysis.limit_report(reference_params(nbar_h, nbar_c, g=1e2))
        worst_weak = max(worst_weak, weak.poisson_mean, weak.poisson_noise)
        worst_strong = max(worst_strong, strong.hybridized_mean, strong.hybridized_noise)
    passed = worst_weak < context["limit"] and worst_strong < context["limit"]
    return passed, "Poisson %.2e, hybridised %.2e" % (worst_weak, worst_strong)


@check("fano_structure")
def check_fano_structure(context):
    failures = 0
    worst_gap = 0.0
    for params in context.grid:
        quantum = closed_form.power_stats(params, QUANTUM).fano
        wave = closed_form.power_stats(params, WAVE).fano
        particle = closed_form.power_stats(params, PARTICLE).fano
        if not quantum >= particle * (1 - 1e-12) or not particle >= 1.0 - 1e-12:
            failures += 1
        wave_gap, particle_gap = analysis.fano_gaps(params)
        worst_gap = max(worst_gap, abs(quantum - wave - wave_gap) / quantum,
                        abs(quantum - particle - particle_gap) / quantum)
    passed = failures == 0 and worst_gap < context["gap"]
    return passed, "%d ordering failures, gap deviation %.2e" % (failures, worst_gap)


@check("wave_gap_formula")
def check_wave_gap_formula(context):
    worst = 0.0
    for params in context.grid:
        _, noise_q = closed_form.quantum_noise(params)
        _, noise_w = closed_form.wave_noise(params)
        power = closed_form.mean_power(params)
        direct = (noise_q - noise_w) / (power * params.delta)
        worst = max(worst, _relative(direct, (params.nbar_h + params.nbar_c) / params.bias))
    return worst < context["gap"], "max relative deviation %.2e" % worst


@check("wave_antibunching")
def check_wave_antibunching(context):
    mismatches = []
    for nbar_h in np.logspace(-1.0, 1.0, 13):
        for share in (0.05, 0.2, 0.4, 0.6, 0.8):
            params = reference_params(nbar_h, nbar_h * share, g=0.05)
            margin = abs(2.0 * params.nbar_h * params.nbar_c - params.bias) / params.bias
            if margin < 0.1:
                continue
            observed = closed_form.power_stats(params, WAVE).fano < 1.0
            if observed != analysis.wave_antibunching_predicted(params):
                mismatches.append((nbar_h, params.nbar_c))
    return not mismatches, "mismatches at %r" % (mismatches,) if mismatches else "criterion holds"


@check("maximizers")
def check_maximizers(context):
    noise_target = sqrt((1.0 + sqrt(3.0)) / 4.0)
    gap_target = sqrt((3.0 + sqrt(57.0)) / 24.0)
    worst = 0.0
    for nbar_h, nbar_c in ((2.0, 0.1), (5.0, 1.0), (0.7, 0.0)):
        maxima = analysis.find_mismatch_maxima(reference_params(nbar_h, nbar_c))
        worst = max(worst, abs(maxima.noise - noise_target), abs(maxima.fano_gap - gap_target))
    return worst < context["maximizer"], "max deviation from %.6f / %.6f is %.2e" % (noise_target, gap_target, worst)


@check("tur")
def check_tur(context):
    failures = []
    for params in context.grid:
        for model in (QUANTUM, PARTICLE, WAVE):
            report = analysis.tur_check(params, closed_form.power_stats(params, model), model)
            if not report.satisfied:
                failures.append(model)
    weak = reference_params(0.5, 0.1, g=0.05)
    violation = analysis.tur_check(weak, closed_form.power_stats(weak, WAVE), WAVE)
    passed = not failures and violation.standard_satisfied is False
    return passed, "%d bound failures; weak-coupling wave Fano %.4f vs standard bound %.4f" % (
        len(failures), violation.fano, violation.bound)


@check("wave_offset")
def check_wave_offset(context):
    worst_power = worst_difference = 0.0
    for params in context.grid:
        base = closed_form.power_stats(WaveParams(params, 0.0), WAVE).mean_power
        for offset in (0.25, 0.5, 1.0):
            wave = WaveParams(params, offset)
            worst_power = max(worst_power, _relative(closed_form.power_stats(wave, WAVE).mean_power, base))
            difference = closed_form.quantum_noise(params)[1] - closed_form.wave_noise(wave)[1]
            worst_difference = max(worst_difference, _relative(difference, analysis.wave_offset_difference(params, offset)))
    vacuum = reference_params(0.0, 0.0)
    equilibrium = closed_form.equilibrium_coefficient(vacuum)
    vacuum_noise = closed_form.wave_noise(WaveParams(vacuum, 0.5))[1]
    passed = (worst_power < context["offset"] and worst_difference < 1e-8 and
              _relative(vacuum_noise, 2.0 * equilibrium * 0.25) < 1e-12)
    return passed, "power %.2e, difference %.2e, vacuum noise %.6g" % (worst_power, worst_difference, vacuum_noise)


@check("generator")
def check_generator(context):
    params = reference_params()
    rates = lattice.build_generator(params, lattice.TruncatedStateSpace(12, 6))
    generator = rates.generator.toarray()
    off_diagonal = generator - np.diag(np.diag(generator))
    column_sums = np.abs(generator.sum(axis=0)).max()
    p = lattice.steady_state(rates)
    passed = off_diagonal.min() >= 0 and column_sums < 1e-12 and p.min() >= 0 and abs(p.sum() - 1) < 1e-12
    return passed, "column sums %.1e, min probability %.1e" % (column_sums, p.min())


@check("drazin_identities")
def check_drazin_identities(context):
    params = reference_params()
    rates = lattice.build_generator(params, lattice.TruncatedStateSpace(12, 6))
    p = lattice.steady_state(rates)
    drazin = lattice.drazin_inverse_dense(rates, p)
    generator = rates.generator.toarray()
    projector = np.eye(len(p)) - np.outer(p, np.ones_like(p))
    defects = [np.abs(drazin.sum(axis=0)).max(), np.abs(drazin.dot(p)).max(),
               np.abs(generator.dot(drazin) - projector).max(), np.abs(drazin.dot(generator) - projector).max()]
    worst = max(defects)
    return worst < context["drazin"], "max identity defect %.2e" % worst


@check("particle_triangle", quick=False)
def check_particle_triangle(context):
    params = reference_params()
    closed = closed_form.particle_noise(params)[1]
    moment = lattice.power_stats(params, "moment").zero_freq_noise
    drazin = lattice.power_stats(params, "fcs").zero_freq_noise
    _, rates, _ = lattice.adaptive_space(params)
    scaled = lattice.scaled_cumulants(rates)[1] * params.delta ** 2
    passed = (_relative(moment, closed) < context["particle"] and _relative(drazin, closed) < context["truncation"] and
              _relative(scaled, closed) < 1e-3)
    return passed, "closed %.7f, moment %.7f, Drazin %.7f, eigenvalue %.7f" % (closed, moment, drazin, scaled)


@check("truncation_convergence", quick=False)
def check_truncation_convergence(context):
    params = reference_params()
    space, rates, p = lattice.adaptive_space(params)
    coarse = lattice.fcs_cumulants_drazin(rates, p)
    fine = lattice.fcs_cumulants_drazin(lattice.build_generator(params, space.doubled()))
    change = max(_relative(fine[0], coarse[0]), _relative(fine[1], coarse[1]))
    return change < context["convergence"], "doubling %r changes cumulants by %.2e" % (space, change)


@check("fock_oracle", quick=False)
def check_fock_oracle(context):
    params = reference_params()
    n_max = fock.default_truncation(params)
    oracle = fock.oracle_power_stats(params, n_max)
    target = closed_form.power_stats(params, QUANTUM)
    equilibrium = reference_params(0.3, 0.3)
    still = fock.oracle_power_stats(equilibrium, (16, 16))
    expected = closed_form.equilibrium_coefficient(equilibrium) * 2.0 * 0.3 * 1.3
    passed = (_relative(oracle.mean_power, target.mean_power) < context["truncation"] and
              _relative(oracle.zero_freq_noise, target.zero_freq_noise) < context["truncation"] and
              abs(still.mean_power) < 1e-10 and _relative(still.zero_freq_noise, expected) < context["truncation"])
    return passed, "n_max %r: mean %.8f, noise %.6f (closed %.6f); equilibrium noise %.6f (closed %.6f)" % (
        n_max, oracle.mean_power, oracle.zero_freq_noise, target.zero_freq_noise, still.zero_freq_noise, expected)


@check("fock_gaussianity", quick=False)
def check_fock_gaussianity(context):
    params = reference_params()
    superoperator = fock.FockSuperoperator(params, fock.default_truncation(params))
    space = superoperator.space
    a_h = space.lowering(fock.HOT).matrix()
    a_c = space.lowering(fock.COLD).matrix()
    n_h = a_h.conj().T.dot(a_h)
    n_c = a_c.conj().T.dot(a_c)
    coherence = superoperator.expect(a_h.conj().T.dot(a_c))
    mean_h = superoperator.expect(n_h).real
    mean_c = superoperator.expect(n_c).real
    defects = [
        _relative(superoperator.expect(n_h.dot(n_h)).real, 2.0 * mean_h ** 2 + mean_h),
        _relative(superoperator.expect(n_c.dot(n_c)).real, 2.0 * mean_c ** 2 + mean_c),
        _relative(superoperator.expect(n_h.dot(n_c)).real, mean_h * mean_c + abs(coherence) ** 2),
    ]
    worst = max(defects)
    return worst < context["truncation"], "largest relative Wick defect %.2e" % worst


def _monte_carlo_verdict(context, estimate, target):
    """ Accept an estimate only when it lies within `sigma` standard errors
    of the target and within the relative Monte Carlo tolerance of it.
    """
    return estimate.agrees_with(target, context["sigma"], context["monte_carlo"]), z_score(estimate, target)


def _consistent(first, second, sigma=2.0):
    spread = sqrt(first.std_error ** 2 + second.std_error ** 2)
    return abs(first.mean - second.mean) <= sigma * spread


@check("wave_monte_carlo", quick=False)
def check_wave_monte_carlo(context):
    params = reference_params()
    config = TrajectoryConfig.for_params(params, n_traj=512, seed=context.grid_seed)
    run = trajectory.simulate_wave(params, config)
    estimate = trajectory.estimate_power_stats(run)
    batches = trajectory.batch_means(run, batches=WAVE_BATCHES)
    target = closed_form.power_stats(params, WAVE)
    mean_ok, mean_z = _monte_carlo_verdict(context, estimate.mean_power, target.mean_power)
    noise_ok, noise_z = _monte_carlo_verdict(context, batches, target.zero_freq_noise)
    slope_z = z_score(estimate.zero_freq_noise, target.zero_freq_noise)
    agree = _consistent(estimate.zero_freq_noise, batches) and abs(slope_z) <= context["sigma"]
    halving = trajectory.step_halving_check(params, config._replace(t_total=config.t_burn + 500.0, n_traj=128))
    detail = ("power %s (z=%.1f), batch means %s (z=%.1f), variance slope %s (z=%.1f), step halving z=(%.1f, %.1f)" %
              (estimate.mean_power, mean_z, batches, noise_z, estimate.zero_freq_noise, slope_z,
               halving.mean_z, halving.noise_z))
    return mean_ok and noise_ok and agree and halving.passed, detail


@check("gillespie", quick=False)
def check_gillespie(context):
    params = reference_params()
    config = TrajectoryConfig.for_params(params, n_traj=256, t_total=10.0 + 5000.0, record_dt=1.0,
                                         seed=context.grid_seed)
    run = gillespie.simulate_jumps(params, config)
    rate, variance = gillespie.estimate_count_stats(run)
    batches = gillespie.batch_means(run, batches=JUMP_BATCHES)
    mean, noise = lattice.fcs_cumulants_moments(params)
    drazin = lattice.power_stats(params, "fcs").zero_freq_noise / params.delta ** 2
    rate_ok, rate_z = _monte_carlo_verdict(context, rate, mean)
    noise_ok, noise_z = _monte_carlo_verdict(context, batches, noise)
    agree = _consistent(variance, batches) and _relative(drazin, noise) < context["truncation"]
    idle = reference_params(g=0.0)
    idle_run = gillespie.simulate_jumps(idle, TrajectoryConfig.for_params(idle, n_traj=8, t_total=60.0, record_dt=1.0))
    idle_ok = not idle_run.counts.any()
    passed = rate_ok and noise_ok and agree and idle_ok
    return passed, "rate %s (z=%.1f), batch means %s (z=%.1f), variance slope %s, Drazin %.7f, idle counts %s" % (
        rate, rate_z, batches, noise_z, variance, drazin, "zero" if idle_ok else "non-zero")


@check("determinism", quick=False)
def check_determinism(context):
    params = reference_params()
    config = TrajectoryConfig.for_params(params, n_traj=8, t_total=30.0, seed=context.grid_seed)
    first = trajectory.simulate_wave(params, config).work
    second = trajectory.simulate_wave(params, config._replace(workers=3)).work
    jump_config = config._replace(t_total=60.0, record_dt=1.0)
    jumps = gillespie.simulate_jumps(params, jump_config).counts
    jumps_parallel = gillespie.simulate_jumps(params, jump_config._replace(workers=4)).counts
    passed = np.array_equal(first, second) and np.array_equal(jumps, jumps_parallel)
    return passed, "identical across worker counts" if passed else "outputs differ across worker counts"


def run_checks(quick=False, grid_seed=0, tolerances=None, names=None):
    """ Run the battery and return one `CheckResult` per check, in order.
    A check that raises is recorded as failed with the error message.
    """
    context = Context(grid_seed, tolerances)
    results = []
    for name, (function, is_quick) in CHECKS.items():
        if quick and not is_quick:
            continue
        if names and name not in names:
            continue
        started = monotonic()
        try:
            passed, detail = function(context)
        except Exception as error:
            log.error("Check %s raised %s: %s", name, type(error).__name__, error)
            passed, detail = False, "%s: %s" % (type(error).__name__, error)
        seconds = monotonic() - started
        log.info("Check %s %s in %.1fs", name, "passed" if passed else "failed", seconds)
        results.append(CheckResult(name, bool(passed), detail, seconds))
    return results
