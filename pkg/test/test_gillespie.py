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

from wavicle import closed_form
from wavicle.core import EngineParams, ParameterError, SimulationError
from wavicle.estimators import TrajectoryConfig, z_score
from wavicle.particle import gillespie


def reference(g=1.0, nbar_h=2.0, nbar_c=0.1):
    return EngineParams.direct(g, 1.0, 1.0, nbar_h, nbar_c, 1.0)


def short_run(**settings):
    settings.setdefault("t_burn", 10.0)
    settings.setdefault("t_total", 40.0)
    settings.setdefault("n_traj", 8)
    settings.setdefault("record_dt", 1.0)
    return TrajectoryConfig(0.01, **settings)


class SimulateJumpsTestCase(TestCase):

    def test_no_coupling_means_no_transfers(self):
        run = gillespie.simulate_jumps(reference(g=0.0), short_run())
        assert run.counts.shape == (8, 31)
        assert not run.counts.any()
        rate, variance = gillespie.estimate_count_stats(run)
        assert rate.mean == 0.0
        assert variance.mean == 0.0
        assert gillespie.batch_means(run, batches=10).mean == 0.0

    def test_records_start_at_zero(self):
        run = gillespie.simulate_jumps(reference(), short_run())
        assert not run.counts[:, 0].any()
        assert run.times[0] == 0.0
        assert run.times[-1] == 30.0

    def test_same_seed_same_counts(self):
        first = gillespie.simulate_jumps(reference(), short_run(seed=11))
        second = gillespie.simulate_jumps(reference(), short_run(seed=11))
        assert (first.counts == second.counts).all()
        assert (first.jumps == second.jumps).all()

    def test_different_seed_different_counts(self):
        first = gillespie.simulate_jumps(reference(), short_run(seed=11))
        second = gillespie.simulate_jumps(reference(), short_run(seed=12))
        assert (first.counts != second.counts).any()

    def test_counts_do_not_depend_on_workers(self):
        single = gillespie.simulate_jumps(reference(), short_run(seed=5))
        several = gillespie.simulate_jumps(reference(), short_run(seed=5, workers=3))
        assert (single.counts == several.counts).all()

    def test_dump_writes_first_trajectory_events(self):
        dump = StringIO()
        run = gillespie.simulate_jumps(reference(), short_run(), dump=dump)
        lines = dump.getvalue().splitlines()
        assert lines[0] == "t,n_h,n_c,event,count"
        assert len(lines) > 1
        last = lines[-1].split(",")
        assert last[3] in gillespie.EVENT_NAMES
        assert int(last[4]) == run.counts[0, -1]

    def test_too_few_trajectories_for_noise(self):
        run = gillespie.simulate_jumps(reference(), short_run(n_traj=4))
        with self.assertRaises(ParameterError):
            gillespie.estimate_count_stats(run)

    def test_short_burn_in_is_refused(self):
        with self.assertRaises(ParameterError):
            gillespie.simulate_jumps(reference(), short_run(t_burn=1.0))

    def test_runaway_occupation(self):
        with patch.object(gillespie, "OCCUPANCY_CAP", 2):
            with self.assertRaises(SimulationError):
                gillespie.simulate_jumps(reference(), short_run())


class StatisticsTestCase(TestCase):

    @classmethod
    def setUpClass(cls):
        config = TrajectoryConfig(0.01, 10.0, 810.0, 128, seed=2, record_dt=1.0)
        cls.jump_run = gillespie.simulate_jumps(reference(), config)

    def test_estimates_agree_with_closed_form(self):
        estimate = gillespie.estimate_power_stats(self.jump_run)
        assert abs(z_score(estimate.mean_power, 0.76)) <= 4.0
        assert estimate.mean_power.diagnostics["events_per_trajectory"] > 0

    def test_batch_means_agree_with_closed_form(self):
        params = reference()
        batches = gillespie.batch_means(self.jump_run, batches=16)
        assert batches.agrees_with(closed_form.particle_noise(params)[1], sigma=4.0, relative=0.1)
        assert not batches.agrees_with(closed_form.wave_noise(params)[1], sigma=4.0, relative=0.1)

    def test_batch_means_agree_with_variance_slope(self):
        _, slope = gillespie.estimate_count_stats(self.jump_run)
        batches = gillespie.batch_means(self.jump_run, batches=16)
        spread = sqrt(slope.std_error ** 2 + batches.std_error ** 2)
        assert abs(slope.mean - batches.mean) <= 2.0 * spread

    def test_simulate_returns_count_statistics(self):
        rate, variance = gillespie.gillespie_simulate(reference(g=0.0), short_run())
        assert rate.n_samples == 8
        assert str(rate) == "0 ± 0"
