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

from math import inf, log, log1p
from unittest import TestCase

import numpy as np

from wavicle.core import (UNDEFINED, EngineParams, NoiseDecomposition, ParameterError, PowerStats, QUANTUM, WAVE,
                          WaveParams, as_wave, bose_occupation, validate)


def reference():
    return EngineParams.direct(1.0, 1.0, 1.0, 2.0, 0.1, 1.0)


class BoseOccupationTestCase(TestCase):

    def test_occupation_at_known_temperature(self):
        assert abs(bose_occupation(1.0, 1.0 / log(3.0)) - 0.5) < 1e-12

    def test_occupation_round_trips_through_temperature(self):
        for omega in (0.1, 1.0, 25.0):
            for nbar in np.logspace(-4.0, 4.0, 33):
                temperature = omega / log1p(1.0 / nbar)
                assert abs(bose_occupation(omega, temperature) - nbar) <= 1e-12 * nbar

    def test_very_cold_bath_does_not_overflow(self):
        value = bose_occupation(1.0, 1e-3)
        assert 0.0 <= value < 1e-300

    def test_zero_temperature_is_rejected(self):
        with self.assertRaises(ParameterError):
            bose_occupation(1.0, 0.0)

    def test_negative_frequency_is_rejected(self):
        with self.assertRaises(ParameterError):
            bose_occupation(-1.0, 1.0)


class EngineParamsTestCase(TestCase):

    def test_direct_parameters_carry_detuning(self):
        params = EngineParams.direct(1.0, 1.0, 1.0, 2.0, 0.1, delta=0.5, omega_c=3.0)
        assert params.delta == 0.5
        assert params.omega_c == 3.0
        assert not params.is_thermal

    def test_transfer_rate(self):
        assert reference().transfer_rate == 2.0

    def test_bias(self):
        assert abs(reference().bias - 1.9) < 1e-15

    def test_inverse_temperatures_from_occupations(self):
        x_h, x_c = reference().inverse_temperatures
        assert abs(x_h - log(1.5)) < 1e-15
        assert abs(x_c - log(11.0)) < 1e-14

    def test_empty_mode_has_infinite_inverse_temperature(self):
        params = EngineParams.direct(1.0, 1.0, 1.0, 2.0, 0.0)
        assert params.inverse_temperatures[1] == inf

    def test_thermal_parameters_derive_occupations(self):
        params = EngineParams.thermal(1.0, 1.0, 1.0, 2.0, 1.0, 2.0 / log(1.5), 1.0 / log(11.0))
        assert params.is_thermal
        assert abs(params.nbar_h - 2.0) < 1e-12
        assert abs(params.nbar_c - 0.1) < 1e-12

    def test_with_coupling(self):
        params = reference().with_coupling(3)
        assert params.g == 3.0
        assert params.nbar_h == 2.0

    def test_with_occupations_drops_temperatures(self):
        params = EngineParams.thermal(1.0, 1.0, 1.0, 2.0, 1.0, 2.0, 1.0).with_occupations(4.0, 1.0)
        assert not params.is_thermal
        assert params.nbar_h == 4.0


class ValidateTestCase(TestCase):

    def test_valid_parameters_pass_through(self):
        params = validate(reference())
        assert params == reference()

    def test_validation_is_idempotent(self):
        params = validate(reference())
        assert validate(params) == params

    def test_all_problems_are_reported(self):
        with self.assertRaises(ParameterError) as context:
            validate(EngineParams.direct(-1.0, 0.0, 1.0, 2.0, 0.1))
        assert len(context.exception.problems) == 2

    def test_non_positive_detuning_is_rejected(self):
        with self.assertRaises(ParameterError):
            validate(EngineParams.direct(1.0, 1.0, 1.0, 2.0, 0.1, delta=-1.0, omega_c=2.0))

    def test_negative_occupation_is_rejected(self):
        with self.assertRaises(ParameterError):
            validate(EngineParams.direct(1.0, 1.0, 1.0, -2.0, 0.1))

    def test_non_finite_coupling_is_rejected(self):
        with self.assertRaises(ParameterError):
            validate(EngineParams.direct(float("nan"), 1.0, 1.0, 2.0, 0.1))

    def test_thermal_occupations_are_recomputed(self):
        params = EngineParams.thermal(1.0, 1.0, 1.0, 2.0, 1.0, 2.0 / log(1.5), 1.0 / log(11.0))
        stale = params._replace(nbar_h=7.0)
        assert abs(validate(stale).nbar_h - 2.0) < 1e-12

    def test_reversed_bias_logs_a_warning(self):
        with self.assertLogs("wavicle.core", level="WARNING") as logs:
            validate(EngineParams.direct(1.0, 1.0, 1.0, 0.1, 2.0))
        assert "against the intended bias" in logs.output[0]


class PowerStatsTestCase(TestCase):

    def test_fano_factor(self):
        stats = PowerStats(0.76, 2.03968, 1.0)
        assert abs(stats.fano - 2.03968 / 0.76) < 1e-12

    def test_fano_is_undefined_at_zero_power(self):
        stats = PowerStats(0.0, 1.0, 1.0)
        assert stats.fano is UNDEFINED

    def test_current_units(self):
        stats = PowerStats(1.0, 8.0, 2.0)
        assert stats.mean_current == 0.5
        assert stats.current_noise == 2.0


class UndefinedTestCase(TestCase):

    def test_undefined_is_a_falsy_singleton(self):
        assert not UNDEFINED
        assert str(UNDEFINED) == "undefined"
        assert type(UNDEFINED)() is UNDEFINED


class NoiseDecompositionTestCase(TestCase):

    def test_quantum_assembly(self):
        decomposition = NoiseDecomposition(0.4, 0.112, QUANTUM)
        assert abs(decomposition.assemble(2.0, 0.1) - 2.03968) < 1e-12

    def test_wave_assembly(self):
        decomposition = NoiseDecomposition(0.4, 0.112, WAVE)
        assert abs(decomposition.assemble(2.0, 0.1) - 1.19968) < 1e-12


class WaveParamsTestCase(TestCase):

    def test_offset_shifts_both_noise_strengths(self):
        wave = WaveParams(reference(), 0.5)
        assert wave.phi_h == 2.5
        assert abs(wave.phi_c - 0.6) < 1e-15

    def test_plain_parameters_read_as_zero_offset(self):
        assert as_wave(reference()).offset_c == 0.0
        wave = WaveParams(reference(), 1.0)
        assert as_wave(wave) is wave
