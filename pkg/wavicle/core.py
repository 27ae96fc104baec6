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

""" Shared parameter and result types for the three engine models.
"""

from collections import namedtuple
from logging import getLogger
from math import exp, expm1, inf, isfinite, log1p

from wavicle.numbers import FANO_FLOOR


__all__ = ["QUANTUM", "WAVE", "PARTICLE", "MODELS",
           "ParameterError", "SolverError", "TruncationError", "ConsistencyError", "SimulationError",
           "UNDEFINED", "bose_occupation", "EngineParams", "WaveParams", "PowerStats",
           "NoiseDecomposition", "validate", "params_warnings", "as_wave"]

log = getLogger("wavicle.core")

QUANTUM = "quantum"
WAVE = "wave"
PARTICLE = "particle"
MODELS = (QUANTUM, WAVE, PARTICLE)


class ParameterError(ValueError):
    """ Raised for parameters or configuration outside the supported
    domain. All problems found are collected in `problems`.
    """

    def __init__(self, *problems):
        super(ParameterError, self).__init__("; ".join(problems))
        self.problems = list(problems)


class SolverError(RuntimeError):
    pass


class TruncationError(SolverError):
    pass


class ConsistencyError(ArithmeticError):
    pass


class SimulationError(RuntimeError):
    pass


class Undefined(object):
    """ Tagged value for a Fano factor at (or numerically indistinguishable
    from) zero mean power.
    """

    __instance = None

    def __new__(cls):
        if cls.__instance is None:
            cls.__instance = super(Undefined, cls).__new__(cls)
        return cls.__instance

    def __repr__(self):
        return "UNDEFINED"

    def __str__(self):
        return "undefined"

    def __bool__(self):
        return False

    def __reduce__(self):
        return Undefined, ()


UNDEFINED = Undefined()


def bose_occupation(omega, temperature):
    """ Bose-Einstein occupation 1/(exp(omega/T) - 1).
    """
    if not (isfinite(omega) and isfinite(temperature)) or omega <= 0 or temperature <= 0:
        raise ParameterError("occupation needs finite positive frequency and temperature "
                             "(got omega=%r, T=%r)" % (omega, temperature))
    x = omega / temperature
    if x > 700.0:
        return exp(-x)
    return 1.0 / expm1(x)


class EngineParams(namedtuple("EngineParams", ["g", "kappa_h", "kappa_c", "omega_h", "omega_c",
                                               "nbar_h", "nbar_c", "t_h", "t_c"])):
    """ Physical configuration of the engine. Occupations are either given
    directly (`t_h` and `t_c` are None) or derived from bath temperatures.
    """

    @classmethod
    def direct(cls, g, kappa_h, kappa_c, nbar_h, nbar_c, delta=1.0, omega_c=None):
        """ Parameterise by occupations and frequency detuning. Only the
        detuning enters any observable; `omega_c` defaults to `delta`.
        """
        if omega_c is None:
            omega_c = delta
        return cls(float(g), float(kappa_h), float(kappa_c), float(omega_c + delta), float(omega_c),
                   float(nbar_h), float(nbar_c), None, None)

    @classmethod
    def thermal(cls, g, kappa_h, kappa_c, omega_h, omega_c, t_h, t_c):
        return cls(float(g), float(kappa_h), float(kappa_c), float(omega_h), float(omega_c),
                   bose_occupation(omega_h, t_h), bose_occupation(omega_c, t_c),
                   float(t_h), float(t_c))

    @property
    def delta(self):
        return self.omega_h - self.omega_c

    @property
    def is_thermal(self):
        return self.t_h is not None and self.t_c is not None

    @property
    def transfer_rate(self):
        """ Incoherent intra-system jump rate 4g²/(κ_h+κ_c).
        """
        return 4.0 * self.g ** 2 / (self.kappa_h + self.kappa_c)

    @property
    def bias(self):
        return self.nbar_h - self.nbar_c

    @property
    def inverse_temperatures(self):
        """ The pair (Ω_h/T_h, Ω_c/T_c), taken as ln(1 + 1/n̄) when
        occupations were given directly. An empty mode gives infinity.
        """
        if self.is_thermal:
            return self.omega_h / self.t_h, self.omega_c / self.t_c

        def x(nbar):
            return inf if nbar == 0 else log1p(1.0 / nbar)

        return x(self.nbar_h), x(self.nbar_c)

    def with_coupling(self, g):
        return self._replace(g=float(g))

    def with_occupations(self, nbar_h, nbar_c):
        return self._replace(nbar_h=float(nbar_h), nbar_c=float(nbar_c), t_h=None, t_c=None)


class WaveParams(namedtuple("WaveParams", ["base", "offset_c"])):
    """ Classical wave model with a white-noise offset C, so that each bath
    drives its mode with strength Φ = n̄ + C.
    """

    def __new__(cls, base, offset_c=0.0):
        return super(WaveParams, cls).__new__(cls, base, float(offset_c))

    @property
    def phi_h(self):
        return self.base.nbar_h + self.offset_c

    @property
    def phi_c(self):
        return self.base.nbar_c + self.offset_c


class PowerStats(namedtuple("PowerStats", ["mean_power", "zero_freq_noise", "delta"])):
    """ Average power, zero-frequency power noise and the detuning needed to
    form the Fano factor ⟨⟨P²⟩⟩/(⟨P⟩Δ).
    """

    def fano_factor(self, floor=FANO_FLOOR):
        if abs(self.mean_power) < floor:
            return UNDEFINED
        return self.zero_freq_noise / (self.mean_power * self.delta)

    @property
    def fano(self):
        return self.fano_factor()

    @property
    def mean_current(self):
        return self.mean_power / self.delta

    @property
    def current_noise(self):
        return self.zero_freq_noise / self.delta ** 2


class NoiseDecomposition(namedtuple("NoiseDecomposition", ["equilibrium", "shot", "model_tag"])):
    """ Noise split into the equilibrium coefficient ℰ and a shot coefficient
    (𝒮 for quantum and wave, 𝒮_p for particle).
    """

    def assemble(self, x_h, x_c):
        """ Combine with the occupations (quantum, particle) or noise
        strengths Φ (wave).
        """
        if self.model_tag == WAVE:
            symmetric = x_h ** 2 + x_c ** 2
        else:
            symmetric = x_h * (x_h + 1.0) + x_c * (x_c + 1.0)
        return self.equilibrium * symmetric - self.shot * (x_h - x_c) ** 2


def params_warnings(params):
    warnings = []
    if params.nbar_h < params.nbar_c:
        warnings.append("hot occupation %g is below cold occupation %g; "
                        "transport runs against the intended bias" % (params.nbar_h, params.nbar_c))
    return warnings


def validate(params):
    """ Check a parameter set and return it normalised, with derived
    occupations recomputed from temperatures where those are given.
    """
    problems = []
    for name in ("g", "kappa_h", "kappa_c", "omega_h", "omega_c"):
        if not isfinite(getattr(params, name)):
            problems.append("%s must be finite" % name)
    if problems:
        raise ParameterError(*problems)
    if params.g < 0:
        problems.append("coupling g must be non-negative")
    if params.kappa_h <= 0:
        problems.append("kappa_h must be positive")
    if params.kappa_c <= 0:
        problems.append("kappa_c must be positive")
    if params.omega_h <= 0 or params.omega_c <= 0:
        problems.append("mode frequencies must be positive")
    elif params.omega_h <= params.omega_c:
        problems.append("omega_h must exceed omega_c (detuning %g is not positive)" % params.delta)
    if params.is_thermal:
        if not (params.t_h > 0 and params.t_c > 0):
            problems.append("bath temperatures must be positive")
    elif params.t_h is not None or params.t_c is not None:
        problems.append("either both bath temperatures or neither must be given")
    else:
        for name in ("nbar_h", "nbar_c"):
            value = getattr(params, name)
            if not isfinite(value) or value < 0:
                problems.append("%s must be finite and non-negative" % name)
    if problems:
        raise ParameterError(*problems)
    if params.is_thermal:
        params = params._replace(nbar_h=bose_occupation(params.omega_h, params.t_h),
                                 nbar_c=bose_occupation(params.omega_c, params.t_c))
    for warning in params_warnings(params):
        log.warning(warning)
    return params._replace(**{name: float(getattr(params, name))
                              for name in ("g", "kappa_h", "kappa_c", "omega_h", "omega_c",
                                           "nbar_h", "nbar_c")})


def as_wave(params):
    """ Accept either WaveParams or EngineParams (read as C = 0).
    """
    if isinstance(params, WaveParams):
        return params
    return WaveParams(params, 0.0)
