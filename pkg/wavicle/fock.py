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

""" Truncated Fock-space reference for the quantum model.

The rotating-frame Lindbladian

    ℒρ = −i[g(a_h†a_c + a_c†a_h), ρ] + Σ_α κ_α(n̄_α+1)D[a_α]ρ + κ_α n̄_α D[a_α†]ρ

is vectorised by column stacking on a per-mode truncated basis. Every term
shifts the total excitation number of ket and bra by the same amount, so
the steady state and Î ρ both lie in the block of |n⟩⟨m| with
N(n) = N(m). Only that block is assembled.

This module shares no algebra with the moment route and serves as an
independent check on it.
"""

from collections import namedtuple
from logging import getLogger
from math import ceil, log as ln

import numpy as np
from scipy import sparse
from scipy.sparse.linalg import splu

from wavicle import closed_form
from wavicle.core import ConsistencyError, ParameterError, PowerStats, SolverError, TruncationError
from wavicle.numbers import FOCK_MAX_TRUNCATION, TOP_SHELL_MASS, TOP_SHELL_TARGET


__all__ = ["Monomial", "FockSpace", "FockSuperoperator", "steady_occupations", "default_truncation",
           "oracle_power_stats"]

log = getLogger("wavicle.fock")

HOT = "h"
COLD = "c"


class Monomial(namedtuple("Monomial", ["target", "value"])):
    """ Operator with at most one non-zero per column: basis state i maps
    to `target[i]` (−1 for none) with amplitude `value[i]`.
    """

    def __mul__(self, other):
        """ Composition, `other` applied first.
        """
        if not isinstance(other, Monomial):
            return Monomial(self.target, self.value * other)
        valid = other.target >= 0
        target = np.full_like(other.target, -1)
        target[valid] = self.target[other.target[valid]]
        value = np.zeros_like(self.value, dtype=complex)
        value[valid] = self.value[other.target[valid]] * other.value[valid]
        target[value == 0] = -1
        return Monomial(target, value)

    __rmul__ = __mul__

    @property
    def dagger(self):
        valid = self.target >= 0
        target = np.full_like(self.target, -1)
        value = np.zeros_like(self.value, dtype=complex)
        target[self.target[valid]] = np.flatnonzero(valid)
        value[self.target[valid]] = np.conj(self.value[valid])
        return Monomial(target, value)

    def matrix(self):
        valid = self.target >= 0
        size = len(self.target)
        return sparse.csr_matrix((self.value[valid], (self.target[valid], np.flatnonzero(valid))),
                                 shape=(size, size))


class FockSpace(object):
    """ Product basis |n_h, n_c⟩ with flat index n_h·(n_max_c+1) + n_c.
    """

    def __init__(self, n_max_h, n_max_c):
        if n_max_h < 1 or n_max_c < 1:
            raise ParameterError("Fock truncation must be at least 1 per mode")
        self.n_max_h = int(n_max_h)
        self.n_max_c = int(n_max_c)
        self.dimension = (self.n_max_h + 1) * (self.n_max_c + 1)
        index = np.arange(self.dimension)
        self.n_h, self.n_c = np.divmod(index, self.n_max_c + 1)
        self.total = self.n_h + self.n_c

    def __repr__(self):
        return "<FockSpace n_max=(%d, %d)>" % (self.n_max_h, self.n_max_c)

    def identity(self):
        return Monomial(np.arange(self.dimension), np.ones(self.dimension, dtype=complex))

    def lowering(self, mode):
        n, stride = (self.n_h, self.n_max_c + 1) if mode == HOT else (self.n_c, 1)
        target = np.where(n > 0, np.arange(self.dimension) - stride, -1)
        return Monomial(target, np.sqrt(n).astype(complex))

    def raising(self, mode):
        return self.lowering(mode).dagger

    @property
    def top_shell(self):
        return (self.n_h == self.n_max_h) | (self.n_c == self.n_max_c)


class _Block(object):
    """ Index map of the equal-excitation block: pairs (i, j) of basis
    states with total[i] == total[j], grouped by excitation number.
    """

    def __init__(self, space):
        order = np.argsort(space.total, kind="stable")
        counts = np.bincount(space.total)
        starts = np.concatenate([[0], np.cumsum(counts)[:-1]])
        self.rank = np.empty(space.dimension, dtype=np.int64)
        self.rank[order] = np.arange(space.dimension) - np.repeat(starts, counts)
        self.count = counts[space.total]
        self.offset = np.concatenate([[0], np.cumsum(counts.astype(np.int64) ** 2)[:-1]])[space.total]
        self.size = int(np.sum(counts.astype(np.int64) ** 2))
        kets, bras = [], []
        for members in np.split(order, np.cumsum(counts)[:-1]):
            kets.append(np.repeat(members, len(members)))
            bras.append(np.tile(members, len(members)))
        self.ket = np.concatenate(kets)
        self.bra = np.concatenate(bras)
        self.diagonal = np.flatnonzero(self.ket == self.bra)

    def position(self, ket, bra):
        return self.offset[ket] + self.rank[ket] * self.count[ket] + self.rank[bra]


class FockSuperoperator(object):
    """ Lindbladian of the engine on a truncated Fock space, restricted to
    the equal-excitation block, with its bordered LU factorisation.
    """

    def __init__(self, params, n_max):
        if np.ndim(n_max) == 0:
            n_max = (n_max, n_max)
        if max(n_max) > FOCK_MAX_TRUNCATION:
            raise TruncationError("Fock truncation %r exceeds %d per mode" % (tuple(n_max), FOCK_MAX_TRUNCATION))
        self.params = params
        self.space = space = FockSpace(*n_max)
        self.block = _Block(space)
        a_h, a_c = space.lowering(HOT), space.lowering(COLD)
        identity = space.identity()
        hopping = [(a_h.dagger * a_c) * params.g, (a_c.dagger * a_h) * params.g]
        terms = []
        for monomial in hopping:
            terms.append((-1j, monomial, identity))
            terms.append((1j, identity, monomial))
        for kappa, nbar, lowering in ((params.kappa_h, params.nbar_h, a_h), (params.kappa_c, params.nbar_c, a_c)):
            for rate, jump in ((kappa * (nbar + 1.0), lowering), (kappa * nbar, lowering.dagger)):
                if rate == 0:
                    continue
                number = jump.dagger * jump
                terms.append((rate, jump, jump))
                terms.append((-0.5 * rate, number, identity))
                terms.append((-0.5 * rate, identity, number))
        self.liouvillian = self._assemble(terms)
        self.current = self._assemble([(1j, hopping[0], identity), (-1j, hopping[1], identity)])
        self.current_operator = 1j * (hopping[0].matrix() - hopping[1].matrix())
        log.info("Assembled Fock Liouvillian on %r with block size %d and %d non-zeros",
                 space, self.block.size, self.liouvillian.nnz)
        self._factor = None
        self._state = None

    def _assemble(self, terms):
        """ Sum of c·MρN† over (c, M, N), as a matrix on the block.
        """
        block = self.block
        rows, cols, values = [], [], []
        columns = np.arange(block.size)
        for coefficient, left, right in terms:
            ket = left.target[block.ket]
            bra = right.target[block.bra]
            valid = (ket >= 0) & (bra >= 0)
            rows.append(block.position(ket[valid], bra[valid]))
            cols.append(columns[valid])
            values.append(coefficient * left.value[block.ket[valid]] * np.conj(right.value[block.bra[valid]]))
        return sparse.coo_matrix((np.concatenate(values), (np.concatenate(rows), np.concatenate(cols))),
                                 shape=(block.size, block.size)).tocsc()

    def trace(self, vector):
        return vector[self.block.diagonal].sum()

    def trace_defect(self):
        """ Largest entry of 1ᵀℒ over the diagonal positions; zero for a
        trace-preserving generator.
        """
        row = np.asarray(self.liouvillian[self.block.diagonal, :].sum(axis=0)).ravel()
        return float(np.max(np.abs(row)))

    @property
    def factor(self):
        if self._factor is None:
            size = self.block.size
            keep = np.ones(size)
            keep[0] = 0.0
            diagonal = self.block.diagonal
            trace_row = sparse.csr_matrix((np.ones(len(diagonal)), (np.zeros(len(diagonal), dtype=int), diagonal)),
                                          shape=(size, size))
            bordered = sparse.diags(keep).dot(self.liouvillian) + trace_row
            try:
                self._factor = splu(sparse.csc_matrix(bordered))
            except RuntimeError as error:
                raise SolverError("Fock Liouvillian has more than one stationary state: %s" % error)
            except (MemoryError, SystemError) as error:
                raise SolverError("Fock LU factorisation of block size %d failed: %s" % (size, error))
        return self._factor

    def steady_state(self):
        """ Vectorised steady state on the block, unit trace.
        """
        if self._state is None:
            rhs = np.zeros(self.block.size, dtype=complex)
            rhs[0] = 1.0
            state = self.factor.solve(rhs)
            if not np.all(np.isfinite(state)):
                raise SolverError("Fock steady-state solve did not converge")
            self._state = state / self.trace(state)
        return self._state

    def density_matrix(self):
        block = self.block
        size = self.space.dimension
        return sparse.csr_matrix((self.steady_state(), (block.ket, block.bra)), shape=(size, size))

    def expect(self, operator):
        """ Tr[Oρ] for a sparse or dense operator on the truncated space.
        """
        rho = self.density_matrix()
        return complex(sparse.csr_matrix(operator).multiply(rho.T).sum())

    def top_shell_mass(self):
        state = self.steady_state()
        diagonal = self.block.diagonal
        return float(state[diagonal][self.space.top_shell[self.block.ket[diagonal]]].real.sum())

    def check_state(self, tolerance=1e-10):
        rho = self.density_matrix()
        asymmetry = abs(rho - rho.conj().T).max() if rho.nnz else 0.0
        if asymmetry > tolerance:
            raise ConsistencyError("Fock steady state is not Hermitian (defect %g)" % asymmetry)
        if self.space.dimension <= 1500:
            smallest = np.linalg.eigvalsh(rho.toarray()).min()
        else:
            smallest = rho.diagonal().real.min()
        if smallest < -tolerance:
            raise ConsistencyError("Fock steady state is not positive (eigenvalue %g)" % smallest)
        return rho

    def mean_current(self):
        return float(self.trace(self.current.dot(self.steady_state())).real)

    def current_noise(self):
        """ −2 Re Tr[Î ℒᴰ(Î ρ − ⟨I⟩ρ)], with the Drazin action taken as the
        traceless solution of the bordered system.
        """
        state = self.steady_state()
        flow = self.current.dot(state)
        source = flow - self.trace(flow) * state
        source[0] = 0.0
        response = self.factor.solve(source)
        return float(-2.0 * self.trace(self.current.dot(response)).real)


def steady_occupations(params):
    """ Mean mode occupations at steady state, from the balance of the
    heat current between each bath and its mode.
    """
    flow = closed_form.mean_power(params) / params.delta
    return params.nbar_h - flow / params.kappa_h, params.nbar_c + flow / params.kappa_c


def _cut(occupation, target):
    if occupation <= 0:
        return 1
    ratio = occupation / (occupation + 1.0)
    return max(4, int(ceil(ln(target * (occupation + 1.0)) / ln(ratio))))


def default_truncation(params, target=TOP_SHELL_TARGET):
    """ Per-mode cut-off N at which a geometric distribution with the
    steady occupation n puts r^N/(n+1) ≤ `target` on the top shell,
    where r = n/(n+1). Raises `TruncationError` above the per-mode cap.
    """
    cuts = tuple(_cut(occupation, target) for occupation in steady_occupations(params))
    if max(cuts) > FOCK_MAX_TRUNCATION:
        raise TruncationError("Fock oracle needs n_max %r for top-shell mass %g, above the cap of %d per mode" %
                              (cuts, target, FOCK_MAX_TRUNCATION))
    return cuts


def oracle_power_stats(params, n_max=None, tolerance=TOP_SHELL_MASS):
    """ Mean power and zero-frequency noise of the quantum model from the
    truncated Lindbladian. Raises `TruncationError` when the steady state
    puts more than `tolerance` on the top occupation shell.
    """
    if n_max is None:
        n_max = default_truncation(params)
    superoperator = FockSuperoperator(params, n_max)
    top = superoperator.top_shell_mass()
    log.info("Fock oracle top-shell mass %.3g on %r", top, superoperator.space)
    if top > tolerance:
        raise TruncationError("top-shell mass %g exceeds %g on %r" % (top, tolerance, superoperator.space))
    superoperator.check_state()
    delta = params.delta
    return PowerStats(delta * superoperator.mean_current(), delta ** 2 * superoperator.current_noise(), delta)
