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

from math import log, sqrt
from unittest import TestCase
from unittest.mock import patch

from wavicle import analysis, closed_form
from wavicle.core import PARTICLE, QUANTUM, UNDEFINED, WAVE, EngineParams, ParameterError, SolverError, WaveParams


def reference(g=1.0, nbar_h=2.0, nbar_c=0.1):
    return EngineParams.direct(g, 1.0, 1.0, nbar_h, nbar_c, 1.0)


def close(value, expected, tolerance=1e-9):
    return abs(value - expected) <= tolerance * max(1.0, abs(expected))


class EvaluateTestCase(TestCase):

    def test_closed_form_reference_point(self):
        params = reference()
        assert close(analysis.evaluate(params, QUANTUM).zero_freq_noise, 2.03968)
        assert close(analysis.evaluate(params, WAVE).zero_freq_noise, 1.19968)
        assert close(analysis.evaluate(params, PARTICLE).zero_freq_noise, 1.8416457142857)

    def test_wave_offset(self):
        stats = analysis.evaluate(reference(), WAVE, offset_c=0.5)
        assert close(stats.zero_freq_noise, 2.23968)
        assert close(stats.mean_power, 0.76)

    def test_routes_agree(self):
        params = EngineParams.direct(0.7, 0.5, 2.0, 3.0, 0.4, 1.3)
        for model, route in ((QUANTUM, analysis.MOMENT), (WAVE, analysis.MOMENT), (PARTICLE, analysis.MOMENT)):
            exact = analysis.evaluate(params, model)
            other = analysis.evaluate(params, model, route)
            assert close(other.mean_power, exact.mean_power, 1e-8)
            assert close(other.zero_freq_noise, exact.zero_freq_noise, 1e-8)

    def test_fock_route(self):
        params = reference(nbar_h=0.5)
        stats = analysis.evaluate(params, QUANTUM, analysis.FOCK, fock_truncation=(18, 14))
        assert close(stats.zero_freq_noise, closed_form.quantum_noise(params)[1], 1e-6)

    def test_unavailable_route(self):
        with self.assertRaises(ParameterError):
            analysis.evaluate(reference(), WAVE, analysis.FOCK)
        with self.assertRaises(ParameterError):
            analysis.evaluate(reference(), PARTICLE, "telepathy")


class FanoTestCase(TestCase):

    def test_reference_point(self):
        params = reference()
        assert close(analysis.fano(closed_form.power_stats(params, QUANTUM)), 2.03968 / 0.76)
        assert close(analysis.fano(closed_form.power_stats(params, WAVE)), 1.19968 / 0.76)

    def test_gaps(self):
        wave_gap, particle_gap = analysis.fano_gaps(reference())
        assert close(wave_gap, 2.1 / 1.9)
        assert close(particle_gap, 24.0 * 1.9 / 175.0)

    def test_gaps_agree_with_fano_factors(self):
        params = EngineParams.direct(0.7, 0.5, 2.0, 3.0, 0.4, 1.3)
        f_q, f_w, f_p = (closed_form.power_stats(params, model).fano for model in (QUANTUM, WAVE, PARTICLE))
        wave_gap, particle_gap = analysis.fano_gaps(params)
        assert close(wave_gap, f_q - f_w)
        assert close(particle_gap, f_q - f_p)

    def test_undefined_at_equilibrium(self):
        params = reference(nbar_h=0.3, nbar_c=0.3)
        assert analysis.fano(closed_form.power_stats(params, QUANTUM)) is UNDEFINED
        assert analysis.fano_gaps(params) == (UNDEFINED, UNDEFINED)

    def test_undefined_without_coupling(self):
        assert analysis.fano_gaps(reference(g=0.0)) == (UNDEFINED, UNDEFINED)


class UncertaintyTestCase(TestCase):

    def test_entropy_rate(self):
        params = reference()
        expected = 0.76 * (log(11.0) - log(1.5))
        assert close(analysis.entropy_rate(params, 0.76), expected)
        assert close(expected, 1.51425, 1e-5)
        assert analysis.entropy_rate(params, 0.0) == 0.0

    def test_entropy_rate_from_temperatures(self):
        params = EngineParams.thermal(1.0, 1.0, 1.0, 2.0, 1.0, 4.0, 1.0)
        assert close(analysis.entropy_rate(params, 2.0), 2.0 * (1.0 - 0.5))

    def test_bounds(self):
        params = reference()
        assert close(analysis.tur_bound(params), 2.0 / (log(11.0) - log(1.5)))
        assert close(analysis.tur_bound(params), 1.00380, 1e-5)
        assert close(analysis.wave_tur_bound(params), 2.0 / 9.5)

    def test_bounds_with_empty_cold_bath(self):
        params = reference(nbar_c=0.0)
        assert analysis.tur_bound(params) == 0.0
        assert analysis.wave_tur_bound(params) == 0.0

    def test_bounds_undefined_without_bias(self):
        params = reference(nbar_h=0.3, nbar_c=0.3)
        assert analysis.tur_bound(params) is UNDEFINED
        assert analysis.wave_tur_bound(params) is UNDEFINED

    def test_reports(self):
        params = reference()
        for model in (QUANTUM, PARTICLE):
            report = analysis.tur_check(params, closed_form.power_stats(params, model), model)
            assert report.standard_satisfied is True
            assert report.satisfied is True
        report = analysis.tur_check(params, closed_form.power_stats(params, WAVE), WAVE)
        assert report.wave_satisfied is True
        assert report.satisfied is True

    def test_weak_coupling_wave_violates_standard_bound(self):
        params = reference(g=0.05)
        report = analysis.tur_check(params, closed_form.power_stats(params, WAVE), WAVE)
        assert report.fano < 1.0038
        assert report.standard_satisfied is False

    def test_report_at_equilibrium(self):
        params = reference(nbar_h=0.3, nbar_c=0.3)
        report = analysis.tur_check(params, closed_form.power_stats(params, QUANTUM), QUANTUM)
        assert report.satisfied is UNDEFINED
        assert report.entropy_rate == 0.0


class MismatchTestCase(TestCase):

    def test_maxima_do_not_depend_on_occupations(self):
        for nbar_h, nbar_c in ((2.0, 0.1), (5.0, 1.0)):
            maxima = analysis.find_mismatch_maxima(reference(nbar_h=nbar_h, nbar_c=nbar_c))
            assert abs(maxima.noise - sqrt((1.0 + sqrt(3.0)) / 4.0)) < 1e-3
            assert abs(maxima.fano_gap - sqrt((3.0 + sqrt(57.0)) / 24.0)) < 1e-3

    def test_maxima_scale_with_kappa(self):
        params = EngineParams.direct(1.0, 3.0, 3.0, 2.0, 0.1, 1.0)
        maxima = analysis.find_mismatch_maxima(params)
        assert abs(maxima.noise - 0.826403) < 1e-3

    def test_unequal_couplings_are_refused(self):
        with self.assertRaises(ParameterError):
            analysis.find_mismatch_maxima(EngineParams.direct(1.0, 0.5, 2.0, 2.0, 0.1, 1.0))

    def test_no_bias_is_refused(self):
        with self.assertRaises(ParameterError):
            analysis.find_mismatch_maxima(reference(nbar_h=0.3, nbar_c=0.3))


class WaveAnalysisTestCase(TestCase):

    def test_offset_difference(self):
        params = reference()
        assert close(analysis.wave_offset_difference(params, 0.5), -0.2)
        assert close(analysis.wave_offset_difference(params, 0.0), 0.4 * 2.1)
        for offset in (0.25, 1.0):
            difference = (closed_form.quantum_noise(params)[1] -
                          closed_form.wave_noise(WaveParams(params, offset))[1])
            assert close(analysis.wave_offset_difference(params, offset), difference)

    def test_antibunching_criterion(self):
        assert analysis.wave_antibunching_predicted(reference(nbar_h=2.0, nbar_c=0.1)) is True
        assert analysis.wave_antibunching_predicted(reference(nbar_h=2.0, nbar_c=1.0)) is False
        weak = reference(g=0.01, nbar_h=2.0, nbar_c=0.1)
        assert closed_form.power_stats(weak, WAVE).fano < 1.0


class LimitTestCase(TestCase):

    def test_weak_coupling(self):
        report = analysis.limit_report(reference(g=1e-2))
        assert report.poisson_mean < 1e-2
        assert report.poisson_noise < 1e-2
        assert report.hybridized_mean > 0.5

    def test_strong_coupling(self):
        report = analysis.limit_report(reference(g=1e2))
        assert report.hybridized_mean < 1e-2
        assert report.hybridized_noise < 1e-2
        assert report.poisson_mean > 0.5


class SweepTestCase(TestCase):

    def test_single_point(self):
        result = analysis.run_sweep(analysis.SweepSpec("g", [1.0], reference()))
        row, = result.rows
        assert row["g_over_kappa"] == 1.0
        assert close(row["power_q"], 0.76)
        assert close(row["noise_p"], 1.8416457142857)
        assert close(row["tur_bound_wave"], 2.0 / 9.5)
        assert not row["errors"]
        assert list(row)[:-1] == result.columns

    def test_empty_grid(self):
        result = analysis.run_sweep(analysis.SweepSpec("nh", [], reference()))
        assert result.rows == []
        assert result.columns[0] == "nbar_h"

    def test_unrequested_models_are_empty(self):
        row, = analysis.run_sweep(analysis.SweepSpec("g", [1.0], reference(), models=(WAVE,))).rows
        assert row["power_q"] is None
        assert row["noise_w"] is not None

    def test_invalid_specs(self):
        for spec in (analysis.SweepSpec("x", [1.0], reference()),
                     analysis.SweepSpec("g", [2.0, 1.0], reference()),
                     analysis.SweepSpec("g", [1.0], reference(), routes={PARTICLE: analysis.FOCK})):
            with self.assertRaises(ParameterError):
                analysis.run_sweep(spec)

    def test_invalid_point_is_recorded(self):
        rows = analysis.run_sweep(analysis.SweepSpec("nh", [-1.0, 2.0], reference())).rows
        assert set(rows[0]["errors"]) == {QUANTUM, WAVE, PARTICLE}
        assert rows[0]["power_q"] is None
        assert not rows[1]["errors"]

    def test_failures_are_recorded_and_the_sweep_continues(self):
        original = closed_form.power_stats

        def failing(params, model):
            if model == PARTICLE:
                raise SolverError("no convergence")
            return original(params, model)

        with patch.object(closed_form, "power_stats", failing):
            with self.assertLogs("wavicle.analysis", level="WARNING"):
                rows = analysis.run_sweep(analysis.SweepSpec("g", [0.5, 1.0], reference())).rows
        for row in rows:
            assert row["errors"] == {PARTICLE: "no convergence"}
            assert row["noise_p"] is None
            assert row["noise_q"] is not None

    def test_workers_preserve_order(self):
        spec = analysis.coupling_sweep_spec(num=9)
        serial = analysis.run_sweep(spec).rows
        parallel = analysis.run_sweep(spec._replace(workers=3)).rows
        assert [row["noise_q"] for row in serial] == [row["noise_q"] for row in parallel]

    def test_coupling_sweep_orderings(self):
        for row in analysis.run_sweep(analysis.coupling_sweep_spec(num=13)).rows:
            assert row["noise_q"] >= row["noise_p"] >= row["noise_w"]
            assert row["fano_q"] >= row["fano_p"]

    def test_occupation_sweep_approaches_quantum(self):
        rows = analysis.run_sweep(analysis.occupation_sweep_spec(num=13)).rows
        assert close(rows[0]["nbar_h"], 0.1, 1e-12)
        assert rows[0]["fano_q"] is UNDEFINED
        assert rows[-1]["fano_w"] / rows[-1]["fano_q"] > 0.95
