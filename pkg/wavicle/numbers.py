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

""" Numerical constants shared across the package. Tolerances are in
natural units, with rates measured against a caller-chosen reference
coupling.
"""

# Fano factors are reported as undefined below this absolute mean power.
FANO_FLOOR = 1e-14

# Maximum imaginary residue accepted from a regression solve, relative to
# max(1, |real part|).
IMAGINARY_RESIDUE = 1e-10

# Steady-state covariance Hermiticity check.
HERMITICITY_TOLERANCE = 1e-9

# Drazin identities (entrywise).
DRAZIN_TOLERANCE = 1e-8

# Probabilities more negative than this indicate a broken steady state.
NEGATIVE_PROBABILITY = -1e-14

# Particle lattice: adaptive truncation stops once the steady-state mass on
# the boundary falls below this.
BOUNDARY_MASS = 1e-10
MAX_LATTICE_DIMENSION = 4000000
MAX_TRUNCATION_DOUBLINGS = 6

# Fock oracle: the default cut-off leaves at most TOP_SHELL_TARGET on each
# mode's top shell of a geometric distribution with the steady occupation.
# Results with more than TOP_SHELL_MASS on the actual top shell are refused.
TOP_SHELL_TARGET = 1e-8
TOP_SHELL_MASS = 1e-7
FOCK_MAX_TRUNCATION = 30

# Monte Carlo.
MIN_NOISE_TRAJECTORIES = 8
JACKKNIFE_GROUPS = 32
OCCUPANCY_CAP = 100000
AMPLITUDE_CAP = 1e150
Z_SCORE_FAILURE = 4.0

# Golden-section search over log10(g/kappa).
MAXIMIZER_TOLERANCE = 1e-6
MAXIMIZER_SCAN_POINTS = 200
