"""Quantum Vlasov reference solver for linearly polarized pulses.

Deliberately shares no right-hand-side code with :mod:`pairgen.wigner`; only
the pulse and potential kernels and the stepper are common.  The standard
three-variable form is

    f' = W u / 2,   u' = W (1 - 2 f) - 2 Omega v,   v' = 2 Omega u,

with ``W = eE eps_perp / Omega**2``, ``eps_perp**2 = m**2 + q_perp**2`` and
``Omega**2 = eps_perp**2 + (q_par - eA)**2``.  Its ``f`` counts a single spin
state; :func:`integrate_qve` returns the spin-summed value ``2 f`` so it can
be compared directly with the Wigner solver.
"""
from __future__ import annotations

import math

import numpy as np
from numba import njit

from . import _dopri
from .errors import UnsupportedConfiguration
from .field import PotentialInterpolant, efield_at, potential_at
from .solver import SolverSettings, initial_step, raise_for_status

SPIN_DEGENERACY = 2.0


@njit(cache=True, nogil=True)
def rhs_qve_kernel(t, y, dy, q, fp, grid, av, ad):
    ax, _, _ = potential_at(t, grid[0], grid[1], av, ad)
    ex, _ = efield_at(t, fp)
    eps2 = 1.0 + q[1] * q[1] + q[2] * q[2]
    ppar = q[0] - ax
    om2 = eps2 + ppar * ppar
    om = math.sqrt(om2)
    w = ex * math.sqrt(eps2) / om2
    dy[0] = 0.5 * w * y[1]
    dy[1] = w * (1.0 - 2.0 * y[0]) - 2.0 * om * y[2]
    dy[2] = 2.0 * om * y[1]


def _check_linear(field: PotentialInterpolant):
    if field.cfg.delta != 0.0:
        raise UnsupportedConfiguration(
            f"quantum Vlasov reference requires delta = 0, got {field.cfg.delta}"
        )


def integrate_qve(q, field: PotentialInterpolant, settings: SolverSettings | None = None) -> float:
    """Spin-summed asymptotic occupation of mode ``q`` for a linearly polarized pulse."""
    _check_linear(field)
    settings = settings or SolverSettings()
    qv = np.asarray(q, dtype=float).reshape(3)
    y = np.zeros(3)
    grid = np.array([field.t_start, field.step])
    code, t_reached, _, _ = _dopri.dopri5(
        rhs_qve_kernel, y, field.t_start, field.t_end, qv, field.fp, grid,
        field.values, field.slopes, settings.rel_tol, settings.abs_tol,
        settings.max_steps, initial_step(qv, field), np.empty(0), np.empty((0, 3)),
    )
    raise_for_status(code, qv, t_reached)
    return SPIN_DEGENERACY * float(y[0])


def integrate_qve_trajectory(q, field: PotentialInterpolant, sample_times,
                             settings: SolverSettings | None = None) -> np.ndarray:
    _check_linear(field)
    settings = settings or SolverSettings()
    qv = np.asarray(q, dtype=float).reshape(3)
    ts = np.asarray(sample_times, dtype=float)
    out = np.empty((ts.size, 3))
    y = np.zeros(3)
    grid = np.array([field.t_start, field.step])
    code, t_reached, _, _ = _dopri.dopri5(
        rhs_qve_kernel, y, field.t_start, field.t_end, qv, field.fp, grid,
        field.values, field.slopes, settings.rel_tol, settings.abs_tol,
        settings.max_steps, initial_step(qv, field), ts, out,
    )
    raise_for_status(code, qv, t_reached)
    return SPIN_DEGENERACY * out[:, 0]
