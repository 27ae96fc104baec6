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

from io import StringIO
from math import sqrt
from unittest import TestCase
from unittest.mock import patch

import numpy as np

from wavicle import closed_form
from wavicle.core import WAVE, EngineParams, ParameterError, SimulationError, WaveParams
from wavicle.estimators import TrajectoryConfig, z_score
from wavicle.wave import trajectory


def reference(g=1.0, nbar_h=2.0, nbar_c=0.1):
    return EngineParams.direct(g, 1.0, 1.0, nbar_h, nbar_c, 1.0)


def short_run(**settings):
    settings.setdefault("t_burn", 10.0)
    settings.setdefault("t_total", 30.0)
    settings.setdefault("n_traj", 8)
    settings.setdefault("record_dt", 0.5)
    return TrajectoryConfig(0.01, **settings)


class SimulateWaveTestCase(TestCase):

    def test_record_times(self):
        run = trajectory.simulate_wave(reference(), short_run())
        assert run.work.shape == (8, 41)
        assert run.n_traj == 8
        assert abs(run.times[-1] - 20.0) < 1e-12
        assert not run.work[:, 0].any()

    def test_no_noise_means_no_work(self):
        params = WaveParams(reference(nbar_h=0.0, nbar_c=0.0), 0.0)
        run = trajectory.simulate_wave(params, short_run())
        assert not run.work.any()
        assert not run.current.any()

    def test_negative_noise_strength_is_refused(self):
        with self.assertRaises(ParameterError):
            trajectory.simulate_wave(WaveParams(reference(), -0.5), short_run())

    def test_oversized_step_is_refused(self):
        with self.assertRaises(ParameterError):
            trajectory.simulate_wave(reference(), short_run().with_step(0.05))

    def test_uncoupled_modes_hold_their_noise_strength(self):
        params = WaveParams(reference(g=0.0, nbar_h=2.0, nbar_c=0.5), 0.25)
        run = trajectory.simulate_wave(params, short_run(t_total=110.0, n_traj=32))
        assert not run.work.any()
        for column, phi in ((0, 2.25), (1, 0.75)):
            values = run.occupations[:, column]
            error = values.std(ddof=1) / sqrt(len(values))
            assert abs(values.mean() - phi) <= 5.0 * error

    def test_same_seed_same_work(self):
        first = trajectory.simulate_wave(reference(), short_run(seed=3))
        second = trajectory.simulate_wave(reference(), short_run(seed=3))
        assert (first.work == second.work).all()

    def test_work_does_not_depend_on_workers(self):
        single = trajectory.simulate_wave(reference(), short_run(seed=3))
        several = trajectory.simulate_wave(reference(), short_run(seed=3, workers=3))
        assert np.array_equal(single.work, several.work)
        assert np.array_equal(single.occupations, several.occupations)

    def test_long_runs_span_several_noise_chunks(self):
        config = short_run(t_total=10.0 + 3 * trajectory.CHUNK_STEPS * 0.01)
        run = trajectory.simulate_wave(reference(), config)
        assert np.isfinite(run.work).all()

    def test_dump(self):
        dump = StringIO()
        run = trajectory.simulate_wave(reference(), short_run(), dump=dump)
        lines = dump.getvalue().splitlines()
        assert lines[0] == "t,re_a_h,im_a_h,re_a_c,im_a_c,current"
        assert len(lines) == 1 + run.work.shape[1]
        assert abs(float(lines[-1].split(",")[-1]) - run.current[0, -1]) < 1e-9 * max(1.0, abs(run.current[0, -1]))

    def test_amplitude_overflow(self):
        with patch.object(trajectory, "AMPLITUDE_CAP", 1e-3):
            with self.assertRaises(SimulationError):
                trajectory.simulate_wave(reference(), short_run())


class EstimatesTestCase(TestCase):

    @classmethod
    def setUpClass(cls):
        config = TrajectoryConfig(0.01, 10.0, 810.0, 256, seed=1, record_dt=0.5)
        cls.wave_run = trajectory.simulate_wave(reference(), config)
        cls.estimate = trajectory.estimate_power_stats(cls.wave_run)
        cls.batches = trajectory.batch_means(cls.wave_run, batches=8)

    def test_too_few_trajectories_for_noise(self):
        run = trajectory.simulate_wave(reference(), short_run(n_traj=4))
        with self.assertRaises(ParameterError):
            trajectory.estimate_power_stats(run)

    def test_mean_power_agrees_with_closed_form(self):
        target = closed_form.power_stats(reference(), WAVE)
        assert abs(z_score(self.estimate.mean_power, target.mean_power)) <= 4.0
        assert self.estimate.mean_power.diagnostics["trajectories"] == 256

    def test_noise_agrees_with_closed_form(self):
        assert self.batches.agrees_with(1.19968, sigma=4.0, relative=0.12)
        assert self.batches.std_error < 0.05 * 1.19968

    def test_noise_rejects_other_models(self):
        params = reference()
        for model_noise in (closed_form.particle_noise(params)[1], closed_form.quantum_noise(params)[1]):
            assert not self.batches.agrees_with(model_noise, sigma=4.0, relative=0.12)

    def test_batch_means_agree_with_variance_slope(self):
        slope = self.estimate.zero_freq_noise
        spread = sqrt(slope.std_error ** 2 + self.batches.std_error ** 2)
        assert abs(slope.mean - self.batches.mean) <= 2.0 * spread
        assert self.batches.diagnostics["batches"] == 8

    def test_too_many_batches(self):
        run = trajectory.simulate_wave(reference(), short_run())
        with self.assertRaises(ParameterError):
            trajectory.batch_means(run, batches=50)

    def test_step_halving(self):
        config = TrajectoryConfig(0.01, 10.0, 60.0, 32, seed=4, record_dt=0.5)
        report = trajectory.step_halving_check(reference(), config)
        assert report.fine.mean_power.n_samples == 32
        assert "step_halving_drift" in report.coarse.mean_power.diagnostics
        assert report.passed
