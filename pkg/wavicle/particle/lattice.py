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

""" Rate-equation (particle) model on a truncated occupation lattice.

Six transition classes act on a state (n_h, n_c):

    bath h up     κ_h n̄_h (n_h+1)
    bath h down   κ_h (n̄_h+1) n_h
    bath c up     κ_c n̄_c (n_c+1)
    bath c down   κ_c (n̄_c+1) n_c
    hot to cold   Γ_I n_h (n_c+1)     counted +1
    cold to hot   Γ_I n_c (n_h+1)     counted −1

Transitions that would leave the lattice are dropped, so the boundary
reflects and every column of the generator sums to zero.
"""

from collections import namedtuple
from logging import getLogger
from math import ceil

import numpy as np
from scipy import sparse
from scipy.sparse.linalg import eigs, splu

from wavicle.core import ParameterError, PowerStats, SolverError, TruncationError
from wavicle.numbers import (BOUNDARY_MASS, MAX_LATTICE_DIMENSION, MAX_TRUNCATION_DOUBLINGS,
                             NEGATIVE_PROBABILITY)


__all__ = ["TruncatedStateSpace", "RateMatrix", "build_generator", "steady_state", "drazin_action",
           "drazin_inverse_dense", "fcs_cumulants_drazin", "ParticleMoments", "particle_moments",
           "moment_residuals", "fcs_cumulants_moments", "adaptive_space", "dressed_generator",
           "scaled_cumulants", "power_stats"]

log = getLogger("wavicle.particle")

BATH_H_UP = 0
BATH_H_DOWN = 1
BATH_C_UP = 2
BATH_C_DOWN = 3
HOT_TO_COLD = 4
COLD_TO_HOT = 5

#: (Δn_h, Δn_c) per transition class
MOVES = ((1, 0), (-1, 0), (0, 1), (0, -1), (-1, 1), (1, -1))


class TruncatedStateSpace(object):
    """ Occupation lattice 0 ≤ n_h ≤ n_max_h, 0 ≤ n_c ≤ n_max_c with
    flat index n_h·(n_max_c+1) + n_c.
    """

    def __init__(self, n_max_h, n_max_c):
        n_max_h, n_max_c = int(n_max_h), int(n_max_c)
        if n_max_h < 1 or n_max_c < 1:
            raise ParameterError("lattice needs at least two levels per mode")
        dimension = (n_max_h + 1) * (n_max_c + 1)
        if dimension > MAX_LATTICE_DIMENSION:
            raise SolverError("lattice of %d states exceeds the limit of %d" % (dimension, MAX_LATTICE_DIMENSION))
        self.n_max_h = n_max_h
        self.n_max_c = n_max_c
        self.dimension = dimension
        flat = np.arange(dimension)
        self.n_h = flat // (n_max_c + 1)
        self.n_c = flat % (n_max_c + 1)

    def __repr__(self):
        return "<TruncatedStateSpace n_max=(%d, %d)>" % (self.n_max_h, self.n_max_c)

    def __eq__(self, other):
        return (isinstance(other, TruncatedStateSpace) and
                (self.n_max_h, self.n_max_c) == (other.n_max_h, other.n_max_c))

    def __hash__(self):
        return hash((self.n_max_h, self.n_max_c))

    def index(self, n_h, n_c):
        if not (0 <= n_h <= self.n_max_h and 0 <= n_c <= self.n_max_c):
            raise IndexError("state (%d, %d) is outside the lattice" % (n_h, n_c))
        return n_h * (self.n_max_c + 1) + n_c

    def state(self, index):
        if not 0 <= index < self.dimension:
            raise IndexError("index %d is outside the lattice" % index)
        return int(index // (self.n_max_c + 1)), int(index % (self.n_max_c + 1))

    def contains(self, n_h, n_c):
        return (0 <= n_h) & (n_h <= self.n_max_h) & (0 <= n_c) & (n_c <= self.n_max_c)

    @property
    def hot_edge(self):
        return self.n_h == self.n_max_h

    @property
    def cold_edge(self):
        return self.n_c == self.n_max_c

    def doubled(self, hot=True, cold=True):
        return TruncatedStateSpace(2 * self.n_max_h if hot else self.n_max_h,
                                   2 * self.n_max_c if cold else self.n_max_c)


class RateMatrix(namedtuple("RateMatrix", ["generator", "forward", "backward", "bath", "escape",
                                           "space", "transfer_rate"])):
    """ Generator L with its pieces. `forward` and `backward` are the
    hot-to-cold and cold-to-hot jump blocks, carrying their rates, and
    `bath` holds all bath-induced jumps. `escape` is the total outflow
    rate of each state.
    """

    @property
    def current(self):
        """ W₁ = Γ_I(𝒱⁺ − 𝒱⁻).
        """
        return self.forward - self.backward

    @property
    def activity(self):
        """ W₂ = Γ_I(𝒱⁺ + 𝒱⁻).
        """
        return self.forward + self.backward


def transition_rates(params, n_h, n_c):
    """ Rates of the six transition classes at occupation arrays (n_h, n_c),
    in the order of `MOVES`.
    """
    k_h, k_c = params.kappa_h, params.kappa_c
    m_h, m_c = params.nbar_h, params.nbar_c
    rate = params.transfer_rate
    return (k_h * m_h * (n_h + 1), k_h * (m_h + 1) * n_h,
            k_c * m_c * (n_c + 1), k_c * (m_c + 1) * n_c,
            rate * n_h * (n_c + 1), rate * n_c * (n_h + 1))


def build_generator(params, space):
    n_h, n_c = space.n_h, space.n_c
    source = np.arange(space.dimension)
    shape = (space.dimension, space.dimension)
    blocks = []
    for (d_h, d_c), rates in zip(MOVES, transition_rates(params, n_h, n_c)):
        rates = np.broadcast_to(np.asarray(rates, dtype=float), n_h.shape)
        keep = space.contains(n_h + d_h, n_c + d_c) & (rates > 0)
        target = (n_h[keep] + d_h) * (space.n_max_c + 1) + n_c[keep] + d_c
        blocks.append(sparse.csr_matrix((rates[keep], (target, source[keep])), shape=shape))
    bath = blocks[BATH_H_UP] + blocks[BATH_H_DOWN] + blocks[BATH_C_UP] + blocks[BATH_C_DOWN]
    forward, backward = blocks[HOT_TO_COLD], blocks[COLD_TO_HOT]
    off_diagonal = bath + forward + backward
    escape = np.asarray(off_diagonal.sum(axis=0)).ravel()
    generator = (off_diagonal - sparse.diags(escape)).tocsc()
    log.debug("Built generator on %r with %d non-zeros", space, generator.nnz)
    return RateMatrix(generator, forward.tocsr(), backward.tocsr(), bath.tocsr(), escape, space,
                      params.transfer_rate)


def _bordered(generator):
    """ Factorise L with its first row replaced by the normalisation
    functional 1ᵀ. The dropped row is implied by the others because the
    columns of L sum to zero.
    """
    dimension = generator.shape[0]
    ones = sparse.csr_matrix(np.ones((1, dimension)))
    bordered = sparse.vstack([ones, sparse.csr_matrix(generator)[1:, :]]).tocsc()
    try:
        return splu(bordered)
    except RuntimeError as error:
        raise SolverError("generator has more than one stationary state: %s" % error)


def steady_state(rates, factor=None):
    """ Stationary distribution of the generator, normalised to one.
    """
    generator = rates.generator
    if factor is None:
        factor = _bordered(generator)
    rhs = np.zeros(generator.shape[0])
    rhs[0] = 1.0
    p = factor.solve(rhs)
    if not np.all(np.isfinite(p)):
        raise SolverError("steady-state solve did not converge")
    if p.min() < NEGATIVE_PROBABILITY:
        raise SolverError("steady state has negative probability %g" % p.min())
    p = np.clip(p, 0.0, None)
    p /= p.sum()
    residual = np.max(np.abs(generator.dot(p)))
    scale = max(1.0, np.max(rates.escape))
    if residual > 1e-10 * scale:
        raise SolverError("steady-state residual %g is too large" % residual)
    return p


def drazin_action(rates, p, vector, factor=None):
    """ Apply the Drazin inverse of L to `vector`. This solves
    L x = (1 − p1ᵀ) vector subject to 1ᵀx = 0.
    """
    if factor is None:
        factor = _bordered(rates.generator)
    projected = vector - p * vector.sum()
    projected[0] = 0.0
    x = factor.solve(projected)
    if not np.all(np.isfinite(x)):
        raise SolverError("projected solve did not converge")
    return x


def drazin_inverse_dense(rates, p):
    """ Explicit Drazin inverse (L − p1ᵀ)⁻¹ + p1ᵀ for small lattices.
    """
    generator = rates.generator.toarray()
    projector = np.outer(p, np.ones_like(p))
    return np.linalg.inv(generator - projector) + projector


def fcs_cumulants_drazin(rates, p=None):
    """ First two cumulants of the net hot-to-cold count, per unit time:
    ⟨⟨I⟩⟩ = 1ᵀW₁p and ⟨⟨I²⟩⟩ = 1ᵀW₂p − 2·1ᵀW₁ℒᴰW₁p.
    """
    factor = _bordered(rates.generator)
    if p is None:
        p = steady_state(rates, factor)
    flow = rates.current.dot(p)
    mean = flow.sum()
    response = drazin_action(rates, p, flow, factor)
    noise = rates.activity.dot(p).sum() - 2.0 * rates.current.dot(response).sum()
    return float(mean), float(noise)


class ParticleMoments(namedtuple("ParticleMoments", ["hot", "cold", "hot_squared", "cold_squared", "cross"])):
    """ Stationary ⟨N_h⟩, ⟨N_c⟩, ⟨N_h²⟩, ⟨N_c²⟩ and ⟨N_hN_c⟩.
    """


def _moment_equations(params):
    k_h, k_c = params.kappa_h, params.kappa_c
    m_h, m_c = params.nbar_h, params.nbar_c
    rate = params.transfer_rate
    matrix = np.array([
        [-(k_h + rate), rate, 0.0, 0.0, 0.0],
        [rate, -(k_c + rate), 0.0, 0.0, 0.0],
        [k_h * (4.0 * m_h + 1.0) + rate, rate, -2.0 * (k_h + rate), 0.0, 4.0 * rate],
        [rate, k_c * (4.0 * m_c + 1.0) + rate, 0.0, -2.0 * (k_c + rate), 4.0 * rate],
        [k_c * m_c - rate, k_h * m_h - rate, rate, rate, -(k_h + k_c + 4.0 * rate)],
    ])
    constant = np.array([k_h * m_h, k_c * m_c, k_h * m_h, k_c * m_c, 0.0])
    return matrix, constant


def particle_moments(params):
    """ Stationary first and second occupation moments. The hierarchy closes
    at second order, so no truncation is involved.
    """
    matrix, constant = _moment_equations(params)
    try:
        solution = np.linalg.solve(matrix, -constant)
    except np.linalg.LinAlgError as error:
        raise SolverError("particle moment system is singular: %s" % error)
    return ParticleMoments(*solution)


def moment_residuals(params, moments):
    """ Time derivatives of the moments at `moments`; zero at stationarity.
    """
    matrix, constant = _moment_equations(params)
    return matrix.dot(np.asarray(moments)) + constant


def fcs_cumulants_moments(params):
    """ Current cumulants from the closed moment hierarchy and the
    regression theorem in the basis σ = (𝓘, 𝓥) = Γ_I(N_h − N_c, N_h + N_c).
    """
    rate = params.transfer_rate
    k_h, k_c = params.kappa_h, params.kappa_c
    moments = particle_moments(params)
    n_h, n_c = moments.hot, moments.cold
    current = rate * (n_h - n_c)
    volume = rate * (n_h + n_c)
    exchange = n_h + n_c + 2.0 * moments.cross
    activity = rate * exchange
    rate2 = rate * rate
    current_jump = rate2 * (moments.hot_squared - 2.0 * moments.cross + moments.cold_squared) - 2.0 * rate2 * exchange
    volume_jump = rate2 * (moments.hot_squared - moments.cold_squared)
    correlations = np.array([current_jump - current * current, volume_jump - volume * current])
    G = np.array([
        [-2.0 * rate - 0.5 * (k_h + k_c), -0.5 * (k_h - k_c)],
        [-0.5 * (k_h - k_c), -0.5 * (k_h + k_c)],
    ])
    response = np.linalg.solve(G, correlations)
    return float(current), float(activity - 2.0 * response[0])


def adaptive_space(params, tolerance=BOUNDARY_MASS):
    """ Grow the lattice until the stationary mass on each edge is below
    `tolerance`. Returns (space, rates, p).
    """
    space = TruncatedStateSpace(ceil(10 * (params.nbar_h + 1)), ceil(10 * (params.nbar_c + 1)))
    for _ in range(MAX_TRUNCATION_DOUBLINGS + 1):
        rates = build_generator(params, space)
        p = steady_state(rates)
        hot_mass = p[space.hot_edge].sum()
        cold_mass = p[space.cold_edge].sum()
        log.info("Lattice %r has edge mass (%.3g, %.3g)", space, hot_mass, cold_mass)
        if hot_mass < 0.5 * tolerance and cold_mass < 0.5 * tolerance:
            return space, rates, p
        space = space.doubled(hot=hot_mass >= 0.5 * tolerance, cold=cold_mass >= 0.5 * tolerance)
    raise TruncationError("edge mass did not fall below %g after %d doublings" % (tolerance, MAX_TRUNCATION_DOUBLINGS))


def dressed_generator(rates, chi):
    """ L(χ) with the hot-to-cold block weighted by e^{iχ} and the
    cold-to-hot block by e^{−iχ}.
    """
    return (rates.generator.astype(complex) + (np.exp(1j * chi) - 1.0) * rates.forward +
            (np.exp(-1j * chi) - 1.0) * rates.backward)


def _leading_eigenvalue(matrix):
    if matrix.shape[0] <= 1500:
        values = np.linalg.eigvals(matrix.toarray())
        return values[np.argmax(values.real)]
    values = eigs(matrix.tocsc(), k=1, sigma=0, return_eigenvectors=False)
    return values[0]


def scaled_cumulants(rates, step=1e-3):
    """ First two cumulants from the leading eigenvalue λ(χ) of the dressed
    generator, by central differences in χ.
    """
    plus = _leading_eigenvalue(dressed_generator(rates, step))
    minus = _leading_eigenvalue(dressed_generator(rates, -step))
    mean = (-1j * (plus - minus) / (2.0 * step)).real
    noise = (-(plus + minus) / step ** 2).real
    return float(mean), float(noise)


def power_stats(params, route="moment"):
    """ `PowerStats` from the moment hierarchy ("moment") or from the
    Drazin inverse on an adaptively truncated lattice ("fcs").
    """
    if route == "moment":
        mean, noise = fcs_cumulants_moments(params)
    elif route == "fcs":
        _, rates, p = adaptive_space(params)
        mean, noise = fcs_cumulants_drazin(rates, p)
    else:
        raise ParameterError("unknown particle route %r" % (route,))
    delta = params.delta
    return PowerStats(delta * mean, delta ** 2 * noise, delta)
