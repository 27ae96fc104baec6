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

""" Moment-equation route to mean power and zero-frequency noise of the
quantum and wave models.

The steady-state second moments

    Θ = (⟨a_h†a_h⟩, ⟨a_c†a_c⟩, ⟨a_h†a_c⟩, ⟨a_c†a_h⟩)

obey dΘ/dt = XΘ + Y. Noise follows from the regression theorem in the
basis σ = (I, H, N_h, N_c), where dσ/dt = Gσ + F, seeded with Gaussian
fourth moments: Wick contractions for the quantum model, Isserlis
contractions (no commutator terms) for the wave model.
"""

from collections import namedtuple
from logging import getLogger

import numpy as np

from wavicle.core import QUANTUM, WAVE, ConsistencyError, SolverError, ParameterError, PowerStats, as_wave
from wavicle.numbers import HERMITICITY_TOLERANCE, IMAGINARY_RESIDUE


__all__ = ["MomentSystem", "SigmaSystem", "build_systems", "steady_covariances", "initial_conditions",
           "regression_noise", "mean_power", "spectral_abscissa", "power_stats"]

log = getLogger("wavicle.moments")


class MomentSystem(namedtuple("MomentSystem", ["X", "Y", "g", "model"])):
    """ Second-moment system dΘ/dt = XΘ + Y.
    """


class SigmaSystem(namedtuple("SigmaSystem", ["G", "F", "delta"])):
    """ Current-basis system dσ/dt = Gσ + F with σ = (I, H, N_h, N_c).
    """


def _split(params, model):
    """ Resolve (engine parameters, noise strengths) for a model name.
    """
    if model == QUANTUM:
        return params, (params.nbar_h, params.nbar_c)
    elif model == WAVE:
        wave = as_wave(params)
        return wave.base, (wave.phi_h, wave.phi_c)
    else:
        raise ParameterError("moment systems exist for the quantum and wave models only, not %r" % (model,))


def build_systems(params, model=QUANTUM):
    """ Build the moment and current-basis systems. `params` is plain
    engine parameters for the quantum model or `WaveParams` for the wave
    model; only the inhomogeneous vectors differ between the two.
    """
    base, (x_h, x_c) = _split(params, model)
    g = base.g
    k_h, k_c = base.kappa_h, base.kappa_c
    k_half = 0.5 * (k_h + k_c)
    ig = 1j * g
    X = np.array([
        [-k_h, 0.0, -ig, ig],
        [0.0, -k_c, ig, -ig],
        [-ig, ig, -k_half, 0.0],
        [ig, -ig, 0.0, -k_half],
    ], dtype=complex)
    Y = np.array([k_h * x_h, k_c * x_c, 0.0, 0.0])
    g2 = 2.0 * g * g
    G = np.array([
        [-k_half, 0.0, g2, -g2],
        [0.0, -k_half, 0.0, 0.0],
        [-1.0, 0.0, -k_h, 0.0],
        [1.0, 0.0, 0.0, -k_c],
    ])
    F = np.array([0.0, 0.0, k_h * x_h, k_c * x_c])
    return MomentSystem(X, Y, g, model), SigmaSystem(G, F, base.delta)


def spectral_abscissa(matrix):
    return float(np.max(np.linalg.eigvals(matrix).real))


def steady_covariances(system):
    """ Solve XΘ = −Y for the stationary second moments.
    """
    try:
        theta = np.linalg.solve(system.X, -system.Y.astype(complex))
    except np.linalg.LinAlgError as error:
        raise SolverError("moment system is singular: %s" % error)
    scale = max(1.0, float(np.max(np.abs(theta))))
    mismatch = max(abs(theta[2] - np.conj(theta[3])), abs(theta[0].imag), abs(theta[1].imag))
    if mismatch > HERMITICITY_TOLERANCE * scale:
        raise ConsistencyError("steady covariances are not Hermitian (mismatch %g)" % mismatch)
    if theta[0].real < -HERMITICITY_TOLERANCE * scale or theta[1].real < -HERMITICITY_TOLERANCE * scale:
        raise ConsistencyError("negative steady-state occupation")
    log.debug("Steady covariances %r", theta)
    return theta


def initial_conditions(theta, g, model=QUANTUM):
    """ Equal-time correlations (⟨δI δI⟩, ⟨δH δI⟩, ⟨δN_h δI⟩, ⟨δN_c δI⟩)
    from the two-point functions Θ. The wave model drops every term that
    comes from a commutator.
    """
    n_h, n_c, c, c_bar = theta
    one = 1.0 if model == QUANTUM else 0.0
    g2 = g * g
    current = 1j * g * (c - c_bar)
    energy = g * (c + c_bar)
    ii = -g2 * (2.0 * c * c + 2.0 * c_bar * c_bar - 2.0 * c * c_bar
                - n_h * (n_c + one) - n_c * (n_h + one))
    hi = 1j * g2 * (2.0 * c * c - 2.0 * c_bar * c_bar + n_c * (n_h + one) - n_h * (n_c + one))
    hot_i = 1j * g * (c * (2.0 * n_h + one) - 2.0 * c_bar * n_h)
    cold_i = -1j * g * (c_bar * (2.0 * n_c + one) - 2.0 * c * n_c)
    return np.array([
        ii - current * current,
        hi - energy * current,
        hot_i - n_h * current,
        cold_i - n_c * current,
    ], dtype=complex)


def regression_noise(system, correlations):
    """ Zero-frequency power noise Δ²·[−2G⁻¹⟨δσ δI⟩]₁.
    """
    try:
        response = np.linalg.solve(system.G, correlations)
    except np.linalg.LinAlgError as error:
        raise SolverError("current-basis system is singular: %s" % error)
    value = -2.0 * response[0]
    if abs(value.imag) > IMAGINARY_RESIDUE * max(1.0, abs(value.real)):
        raise ConsistencyError("regression noise has imaginary residue %g" % value.imag)
    return system.delta ** 2 * value.real


def mean_power(system):
    """ Δ·[−G⁻¹F]₁.
    """
    try:
        sigma = np.linalg.solve(system.G, -system.F)
    except np.linalg.LinAlgError as error:
        raise SolverError("current-basis system is singular: %s" % error)
    return system.delta * sigma[0]


def power_stats(params, model=QUANTUM):
    moment_system, sigma_system = build_systems(params, model)
    theta = steady_covariances(moment_system)
    noise = regression_noise(sigma_system, initial_conditions(theta, moment_system.g, model))
    return PowerStats(float(mean_power(sigma_system)), float(noise), sigma_system.delta)
