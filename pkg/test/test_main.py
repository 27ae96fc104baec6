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
from json import loads
from os import environ
from os.path import exists, join as path_join
from tempfile import TemporaryDirectory
from unittest import TestCase
from unittest.mock import patch

from wavicle.__main__ import IO_ERROR, SUCCESS, USAGE_ERROR, dispatch


def run(*args):
    out, err = StringIO(), StringIO()
    code = dispatch(("wavicle",) + args, out=out, err=err)
    return code, out.getvalue(), err.getvalue()


def body(output):
    return [line for line in output.splitlines() if not line.startswith("#")]


class UsageTestCase(TestCase):

    def test_no_command(self):
        code, out, _ = run()
        assert code == SUCCESS
        assert out.startswith("usage: wavicle point")

    def test_unknown_command(self):
        code, out, err = run("serve")
        assert code == USAGE_ERROR
        assert not out
        assert "usage:" in err


class PointTestCase(TestCase):

    def test_reference_point(self):
        # Given
        args = ("point",)

        # When
        code, out, _ = run(*args)

        # Then
        assert code == SUCCESS
        assert "# command = point" in out
        assert "# nh = 2.0" in out
        lines = body(out)
        assert lines[0].split() == ["model", "route", "power", "noise", "fano"]
        assert lines[1].split()[:4] == ["quantum", "closed_form", "0.76", "2.03968"]
        assert lines[2].split()[:4] == ["wave", "closed_form", "0.76", "1.19968"]
        assert lines[3].split()[2:4] == ["0.76", "1.84164571429"]
        assert "tur_bound_wave 0.210526315789" in lines

    def test_no_coupling(self):
        # When
        code, out, _ = run("point", "--g", "0")

        # Then
        assert code == SUCCESS
        assert body(out)[1].split() == ["quantum", "closed_form", "0", "0", "undefined"]

    def test_cross_route_deviation(self):
        # When
        code, out, _ = run("point", "--models", "particle", "--route", "particle=closed_form",
                           "--route", "particle=moment")

        # Then
        assert code == SUCCESS
        deviation, = [line for line in body(out) if line.startswith("deviation")]
        noise = float(deviation.rpartition("noise ")[2])
        assert noise < 1e-10

    def test_route_for_unrequested_model(self):
        code, _, err = run("point", "--models", "quantum", "--route", "wave=moment")
        assert code == USAGE_ERROR
        assert "not requested" in err

    def test_unavailable_route(self):
        code, _, err = run("point", "--route", "wave=fock")
        assert code == USAGE_ERROR
        assert "not available" in err

    def test_invalid_parameters(self):
        code, _, err = run("point", "--kappa", "-1")
        assert code == USAGE_ERROR
        assert "kappa_h must be positive" in err

    def test_thermal_parameters(self):
        code, out, _ = run("point", "--omega-h", "2", "--omega-c", "1", "--th", "4", "--tc", "1", "--models", "quantum")
        assert code == SUCCESS
        assert "# delta = 1.0" in out
        assert "# th" not in out

    def test_incomplete_thermal_parameters(self):
        code, _, _ = run("point", "--th", "4")
        assert code == USAGE_ERROR

    def test_json(self):
        # When
        code, out, _ = run("point", "--json", "--models", "quantum,particle")

        # Then
        assert code == SUCCESS
        document = loads(out)
        assert [result["model"] for result in document["results"]] == ["quantum", "particle"]
        assert abs(document["results"][0]["noise"] - 2.03968) < 1e-9
        assert document["config"]["models"] == "quantum,particle"

    def test_echo_reloads_to_the_same_output(self):
        with TemporaryDirectory() as directory:
            # Given
            code, first, _ = run("point", "--g", "0.5", "--nh", "3", "--kappa-c", "2")
            path = path_join(directory, "point.conf")
            with open(path, "w") as f:
                f.write("\n".join(line for line in first.splitlines() if line.startswith("#")))

            # When
            code, second, _ = run("point", "--config", path)

        # Then
        assert code == SUCCESS
        assert second == first

    def test_fock_route_beyond_the_truncation_cap(self):
        code, _, err = run("point", "--models", "quantum", "--route", "quantum=fock", "--g", "0.7",
                           "--kappa-h", "2", "--kappa-c", "0.5", "--nh", "3")
        assert code == 1
        assert "above the cap" in err

    def test_prose_comments_in_config_file_are_ignored(self):
        with TemporaryDirectory() as directory:
            path = path_join(directory, "point.conf")
            with open(path, "w") as f:
                f.write("# earlier runs used g = 5\n# nh = 3\nnc = 0.2\n")
            code, out, _ = run("point", "--config", path)
        assert code == SUCCESS
        assert "# g = 1.0" in out
        assert "# nh = 3.0" in out
        assert "# nc = 0.2" in out

    def test_flags_override_config_file(self):
        with TemporaryDirectory() as directory:
            path = path_join(directory, "point.conf")
            with open(path, "w") as f:
                f.write("g = 0\nnh = 3\n")
            code, out, _ = run("point", "--config", path, "--g", "1")
        assert code == SUCCESS
        assert "# g = 1.0" in out
        assert "# nh = 3.0" in out


class SweepTestCase(TestCase):

    def test_csv(self):
        # When
        code, out, _ = run("sweep", "--axis", "g", "--start", "0.1", "--stop", "10", "--num", "3")

        # Then
        assert code == SUCCESS
        lines = body(out)
        assert lines[0].startswith("g_over_kappa,power_q,noise_q,fano_q,power_w")
        assert len(lines) == 4
        assert lines[2].split(",")[0] == "1"

    def test_empty_sweep_writes_header_only(self):
        code, out, _ = run("sweep", "--num", "0")
        assert code == SUCCESS
        assert body(out) == ["g_over_kappa,power_q,noise_q,fano_q,power_w,noise_w,fano_w,"
                             "power_p,noise_p,fano_p,tur_bound,tur_bound_wave"]

    def test_unrequested_models_leave_empty_cells(self):
        code, out, _ = run("sweep", "--num", "1", "--start", "1", "--stop", "1", "--models", "particle")
        assert code == SUCCESS
        cells = body(out)[1].split(",")
        assert cells[1:7] == [""] * 6
        assert cells[7] == "0.76"

    def test_json_output_file(self):
        with TemporaryDirectory() as directory:
            # Given
            with patch.dict(environ, {"WAVICLE_OUTPUT_DIR": directory}):

                # When
                code, out, _ = run("sweep", "--axis", "nh", "--num", "2", "--format", "json", "-o", "sweep.json")

            # Then
            assert code == SUCCESS
            assert "# output = sweep.json" in out
            with open(path_join(directory, "sweep.json")) as f:
                document = loads(f.read())
        assert document["columns"][0] == "nbar_h"
        assert len(document["rows"]) == 2
        assert document["rows"][0]["errors"] == {}

    def test_unwritable_output(self):
        with TemporaryDirectory() as directory:
            path = path_join(directory, "missing", "sweep.csv")
            code, _, err = run("sweep", "--num", "2", "-o", path)
            assert not exists(path)
        assert code == IO_ERROR
        assert "missing" in err

    def test_bad_range(self):
        code, _, _ = run("sweep", "--start", "0")
        assert code == USAGE_ERROR

    def test_bad_axis(self):
        code, _, _ = run("sweep", "--axis", "kappa")
        assert code == USAGE_ERROR


class SimulateTestCase(TestCase):

    def test_particle_without_coupling(self):
        # When
        code, out, _ = run("simulate", "particle", "--g", "0", "--n-traj", "8", "--t-total", "30", "--seed", "4")

        # Then
        assert code == SUCCESS
        assert "# seed = 4" in out
        assert "# n_traj = 8" in out
        lines = body(out)
        assert lines[0] == "model particle"
        assert lines[1].startswith("power 0 ± 0 (closed form 0")

    def test_seed_determinism(self):
        args = ("simulate", "particle", "--n-traj", "8", "--t-total", "40", "--record-dt", "1", "--seed", "9")
        _, first, _ = run(*args)
        _, second, _ = run(*args + ("--workers", "2"))
        assert body(first) == body(second)

    def test_dump(self):
        with TemporaryDirectory() as directory:
            path = path_join(directory, "trajectory.csv")
            code, _, _ = run("simulate", "wave", "--n-traj", "8", "--t-total", "20", "--record-dt", "1",
                             "--dump", path)
            with open(path) as f:
                header = f.readline().strip()
        assert code in (0, 1)
        assert header == "t,re_a_h,im_a_h,re_a_c,im_a_c,current"

    def test_too_few_trajectories(self):
        code, _, err = run("simulate", "particle", "--n-traj", "4", "--t-total", "30")
        assert code == USAGE_ERROR
        assert "at least 8 trajectories" in err

    def test_unknown_model(self):
        code, _, _ = run("simulate", "quantum")
        assert code == USAGE_ERROR


class VerifyTestCase(TestCase):

    def test_quick(self):
        # When
        code, out, _ = run("verify", "--quick")

        # Then
        assert code == SUCCESS
        lines = body(out)
        assert lines[-1].endswith("0 failed")
        assert all(" pass " in line for line in lines[:-1])

    def test_single_check(self):
        code, out, _ = run("verify", "--check", "power_equality")
        assert code == SUCCESS
        assert body(out)[0].startswith("power_equality")

    def test_impossible_tolerance_fails(self):
        code, out, _ = run("verify", "--check", "limits", "--tolerance", "limit=1e-30")
        assert code == 1
        assert "FAIL" in out

    def test_unknown_tolerance(self):
        code, _, _ = run("verify", "--quick", "--tolerance", "nonsense=1")
        assert code == USAGE_ERROR

    def test_malformed_tolerance(self):
        code, _, _ = run("verify", "--quick", "--tolerance", "power")
        assert code == USAGE_ERROR
