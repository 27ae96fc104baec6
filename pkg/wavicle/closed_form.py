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

""" Closed-form average power and zero-frequency noise of the three models,
their equal-coupling specialisations and the weak and strong coupling
limits.

Every noise is returned both as a `NoiseDecomposition` and as the
assembled power noise. Shot coefficients are grouped as sums of
non-negative terms so that nothing cancels at extreme g/κ.
"""

from wavicle.core import (QUANTUM, WAVE, PARTICLE, ParameterError, PowerStats, NoiseDecomposition,
                          as_wave)


__all__ = ["transfer_rate", "response_factor", "mean_power", "conductance_power",
           "equilibrium_coefficient", "shot_coefficient", "particle_mismatch",
           "particle_mismatch_small_coupling", "particle_mismatch_strong_coupling",
           "equal_kappa_shot", "equal_kappa_particle_shot",
           "quantum_noise", "wave_noise", "particle_noise", "poisson_limit", "hybridized_limit",
           "power_stats"]


def transfer_rate(params):
    """ Γ_I = 4g²/(κ_h+κ_c).
    """
    return params.transfer_rate


def response_factor(params):
    """ χ = 1/[(κ_h+κ_c)(4g²+κ_hκ_c)].
    """
    return 1.0 / ((params.kappa_h + params.kappa_c) * (4.0 * params.g ** 2 + params.kappa_h * params.kappa_c))


def mean_power(params):
    g2 = params.g ** 2
    k_h, k_c = params.kappa_h, params.kappa_c
    return 4.0 * g2 * k_h * k_c * params.delta * params.bias / ((4.0 * g2 + k_h * k_c) * (k_h + k_c))


def conductance_power(params):
    """ Mean power written as three conductances in series: the two bath
    couplings and the transfer rate.
    """
    if params.g == 0:
        return 0.0
    resistance = 1.0 / params.kappa_h + 1.0 / params.kappa_c + 1.0 / params.transfer_rate
    return params.delta * params.bias / resistance


def equilibrium_coefficient(params):
    """ ℰ = 4g²κ_hκ_cΔ²χ.
    """
    return 4.0 * params.g ** 2 * params.kappa_h * params.kappa_c * params.delta ** 2 * response_factor(params)


def shot_coefficient(params):
    """ 𝒮 for the quantum and wave models at arbitrary bath couplings.

    The bracket κ_h²κ_c²(κ_h+κ_c)² − 8g²κ_h²κ_c² + 16g⁴(κ_h²+κ_c²) is
    evaluated as [p²(K²−u)² + u²((κ_h²+κ_c²)K² − p²)]/K² with K = κ_h+κ_c,
    p = κ_hκ_c and u = 4g².
    """
    k_h, k_c = params.kappa_h, params.kappa_c
    u = 4.0 * params.g ** 2
    p = k_h * k_c
    k = k_h + k_c
    k2 = k * k
    bracket = (p * p * (k2 - u) ** 2 + u * u * ((k_h * k_h + k_c * k_c) * k2 - p * p)) / k2
    chi = response_factor(params)
    return u * p * bracket * params.delta ** 2 * chi ** 3


def particle_mismatch(params):
    """ 𝒮_p − 𝒮 at arbitrary bath couplings:

        4(2g)⁶κ_h³κ_c³[12g² + (κ_h+κ_c)² + 2κ_hκ_c]Δ²χ³
        / [48g⁴ + κ_hκ_c(κ_h+κ_c)² + 4g²(κ_h²+κ_c²+6κ_hκ_c)]
    """
    k_h, k_c = params.kappa_h, params.kappa_c
    u = 4.0 * params.g ** 2
    p = k_h * k_c
    k2 = (k_h + k_c) ** 2
    numerator = 4.0 * u ** 3 * p ** 3 * (3.0 * u + k2 + 2.0 * p)
    denominator = 3.0 * u * u + p * k2 + u * (k_h * k_h + k_c * k_c + 6.0 * p)
    return numerator / denominator * params.delta ** 2 * response_factor(params) ** 3


def particle_mismatch_small_coupling(params):
    """ Leading order of 𝒮_p − 𝒮 as g → 0.
    """
    k_h, k_c = params.kappa_h, params.kappa_c
    k = k_h + k_c
    return (256.0 * params.g ** 6 * (k_h * k_h + k_c * k_c + 4.0 * k_h * k_c) * params.delta ** 2
            / (k_h * k_c * k ** 5))


def particle_mismatch_strong_coupling(params):
    """ Leading order of 𝒮_p − 𝒮 as g → ∞.
    """
    k_h, k_c = params.kappa_h, params.kappa_c
    return (k_h * k_c) ** 3 * params.delta ** 2 / (params.g ** 2 * (k_h + k_c) ** 3)


def _equal_kappa(params):
    if params.kappa_h != params.kappa_c:
        raise ParameterError("equal bath couplings required (got %g and %g)" % (params.kappa_h, params.kappa_c))
    return params.kappa_h


def equal_kappa_shot(params):
    """ 𝒮 = ℰ[1 − 2g²(4g²+5κ²)/(4g²+κ²)²] for κ_h = κ_c = κ.
    """
    kappa2 = _equal_kappa(params) ** 2
    g2 = params.g ** 2
    return equilibrium_coefficient(params) * (1.0 - 2.0 * g2 * (4.0 * g2 + 5.0 * kappa2) / (4.0 * g2 + kappa2) ** 2)


def equal_kappa_particle_shot(params):
    """ 𝒮_p = 𝒮 + ℰ·24g⁴κ²/[(6g²+κ²)(4g²+κ²)²] for κ_h = κ_c = κ.
    """
    kappa2 = _equal_kappa(params) ** 2
    g2 = params.g ** 2
    correction = 24.0 * g2 * g2 * kappa2 / ((6.0 * g2 + kappa2) * (4.0 * g2 + kappa2) ** 2)
    return equal_kappa_shot(params) + equilibrium_coefficient(params) * correction


def quantum_noise(params):
    decomposition = NoiseDecomposition(equilibrium_coefficient(params), shot_coefficient(params), QUANTUM)
    return decomposition, decomposition.assemble(params.nbar_h, params.nbar_c)


def wave_noise(params):
    params = as_wave(params)
    base = params.base
    decomposition = NoiseDecomposition(equilibrium_coefficient(base), shot_coefficient(base), WAVE)
    return decomposition, decomposition.assemble(params.phi_h, params.phi_c)


def particle_noise(params):
    shot = shot_coefficient(params) + particle_mismatch(params)
    decomposition = NoiseDecomposition(equilibrium_coefficient(params), shot, PARTICLE)
    return decomposition, decomposition.assemble(params.nbar_h, params.nbar_c)


def poisson_limit(params):
    """ Bi-directional Poisson transport at weak coupling, with transfer
    rates Γ_αβ = Γ_I n̄_α(n̄_β+1).
    """
    rate = params.transfer_rate
    hot_to_cold = rate * params.nbar_h * (params.nbar_c + 1.0)
    cold_to_hot = rate * params.nbar_c * (params.nbar_h + 1.0)
    delta = params.delta
    return PowerStats(delta * (hot_to_cold - cold_to_hot), delta ** 2 * (hot_to_cold + cold_to_hot), delta)


def hybridized_limit(params):
    """ Strong coupling, where the two modes act as a single oscillator
    coupled to both baths.
    """
    k_h, k_c = params.kappa_h, params.kappa_c
    k = k_h + k_c
    n_h, n_c = params.nbar_h, params.nbar_c
    delta = params.delta
    mean = k_h * k_c * delta * (n_h - n_c) / k
    noise = (k_h * k_c * delta ** 2 / k ** 3
             * (k * k * (n_h * (n_h + 1.0) + n_c * (n_c + 1.0)) - (n_h - n_c) ** 2 * (k_h * k_h + k_c * k_c)))
    return PowerStats(mean, noise, delta)


def power_stats(params, model):
    """ Closed-form `PowerStats` for one model. The wave model accepts
    `WaveParams`; plain parameters are read with C = 0.
    """
    if model == WAVE:
        wave = as_wave(params)
        return PowerStats(mean_power(wave.base), wave_noise(wave)[1], wave.base.delta)
    elif model == QUANTUM:
        return PowerStats(mean_power(params), quantum_noise(params)[1], params.delta)
    elif model == PARTICLE:
        return PowerStats(mean_power(params), particle_noise(params)[1], params.delta)
    else:
        raise ParameterError("unknown model %r" % (model,))
