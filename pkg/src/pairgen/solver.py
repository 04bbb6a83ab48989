"""Per-mode integration from vacuum through the pulse."""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass

import numpy as np

from . import _dopri
from .errors import ConfigError, NumericalFailure, StepBudgetExceeded
from .field import PotentialInterpolant
from .wigner import distribution_from_p, rhs_full10_kernel, rhs_reduced_kernel

FORMULATIONS = ("reduced", "full10")


@dataclass(frozen=True)
class SolverSettings:
    rel_tol: float = 1e-8
    abs_tol: float = 1e-10
    max_steps: int = 2_000_000
    formulation: str = "reduced"

    def __post_init__(self):
        if not 0.0 < self.rel_tol < 1e-3:
            raise ConfigError("rel_tol must lie in (0, 1e-3)", field="rel_tol")
        if not 0.0 < self.abs_tol < 1e-6:
            raise ConfigError("abs_tol must lie in (0, 1e-6)", field="abs_tol")
        if self.max_steps < 10_000:
            raise ConfigError("max_steps must be at least 1e4", field="max_steps")
        if self.formulation not in FORMULATIONS:
            raise ConfigError(
                f"formulation must be one of {FORMULATIONS}, got {self.formulation!r}",
                field="formulation",
            )

    def to_dict(self) -> dict:
        return asdict(self)


def initial_step(q, field: PotentialInterpolant) -> float:
    """First step guess: the fastest time scale divided by 50."""
    qn = float(np.linalg.norm(q))
    omega_max = math.sqrt(1.0 + (qn + field.max_abs) ** 2)
    scale = 1.0 / omega_max
    if field.cfg.omega > 0:
        scale = min(scale, 1.0 / field.cfg.omega)
    return scale / 50.0


def raise_for_status(code, q, t_reached, index=None):
    if code == _dopri.OK:
        return
    q = np.asarray(q, dtype=float).tolist()
    where = f"q={q}" + (f" grid index {index}" if index is not None else "")
    if code == _dopri.BUDGET:
        raise StepBudgetExceeded(
            f"step budget exhausted at t={t_reached:.6g} for {where}",
            q=q, t_reached=t_reached, index=index,
        )
    if code == _dopri.NONFINITE:
        raise NumericalFailure(
            f"non-finite state at t={t_reached:.6g} for {where}",
            q=q, t_reached=t_reached, index=index,
        )
    raise NumericalFailure(
        f"step size underflow at t={t_reached:.6g} for {where}",
        q=q, t_reached=t_reached, index=index,
    )


def _kernel(formulation):
    return rhs_reduced_kernel if formulation == "reduced" else rhs_full10_kernel


def initial_state(q, formulation: str) -> np.ndarray:
    """Zero (f, w9) for the reduced system; the vacuum components otherwise.

    The potential vanishes at the window start, so the kinetic momentum there
    equals q.
    """
    y = np.zeros(10)
    if formulation == "full10":
        q = np.asarray(q, dtype=float)
        om = math.sqrt(1.0 + q @ q)
        y[0] = -2.0 / om
        y[1:4] = -2.0 * q / om
    return y


def final_distribution(state: np.ndarray, q, field: PotentialInterpolant, formulation: str,
                       t: float | None = None) -> float:
    if formulation == "reduced":
        return float(state[0])
    t = field.t_end if t is None else t
    from .field import vector_potential

    p = np.asarray(q, dtype=float) - vector_potential(t, field)
    return distribution_from_p(state, p)


def _run(q, field, settings, sample_times):
    qv = np.asarray(q, dtype=float).reshape(3)
    if not np.all(np.isfinite(qv)):
        raise ValueError("canonical momentum must be finite")
    y = initial_state(qv, settings.formulation)
    grid = np.array([field.t_start, field.step])
    samples = np.empty((sample_times.size, 10))
    code, t_reached, nacc, nrej = _dopri.dopri5(
        _kernel(settings.formulation), y, field.t_start, field.t_end, qv, field.fp, grid,
        field.values, field.slopes, settings.rel_tol, settings.abs_tol, settings.max_steps,
        initial_step(qv, field), sample_times, samples,
    )
    raise_for_status(code, qv, t_reached)
    return qv, y, samples, nacc + nrej


def integrate_mode_state(q, field: PotentialInterpolant,
                         settings: SolverSettings | None = None) -> np.ndarray:
    """Final flat state vector of the chosen formulation at the window end."""
    settings = settings or SolverSettings()
    return _run(q, field, settings, np.empty(0))[1]


def integrate_mode(q, field: PotentialInterpolant, settings: SolverSettings | None = None) -> float:
    """Asymptotic one-particle distribution of the mode with canonical momentum q."""
    settings = settings or SolverSettings()
    qv, y, _, _ = _run(q, field, settings, np.empty(0))
    return final_distribution(y, qv, field, settings.formulation)


def integrate_mode_trajectory(q, field: PotentialInterpolant, sample_times,
                              settings: SolverSettings | None = None):
    """Return ``[(t, f(t)), ...]`` from the integrator's continuous extension."""
    settings = settings or SolverSettings()
    ts = np.asarray(sample_times, dtype=float).reshape(-1)
    if ts.size and (ts[0] < field.t_start or ts[-1] > field.t_end):
        raise ValueError("sample times must lie inside the integration window")
    if np.any(np.diff(ts) < 0):
        raise ValueError("sample times must be sorted")
    qv, _, samples, _ = _run(q, field, settings, ts)
    if settings.formulation == "reduced":
        fs = samples[:, 0]
    else:
        fs = [final_distribution(samples[i], qv, field, "full10", t=ts[i]) for i in range(ts.size)]
    return [(float(t), float(f)) for t, f in zip(ts, fs)]


def integrate_rows(qs: np.ndarray, rows: np.ndarray, field: PotentialInterpolant,
                   settings: SolverSettings, states: np.ndarray, status: np.ndarray,
                   t_reached: np.ndarray, nsteps: np.ndarray) -> None:
    """Integrate ``qs[rows]`` in place into the preallocated result arrays.

    Releases the GIL, so disjoint row sets may run on separate threads.
    """
    h0s = np.array([initial_step(q, field) for q in qs[rows]])
    h0_full = np.zeros(qs.shape[0])
    h0_full[rows] = h0s
    for r in rows:
        states[r] = initial_state(qs[r], settings.formulation)
    grid = np.array([field.t_start, field.step])
    _dopri.dopri5_batch(
        _kernel(settings.formulation), qs, rows, field.fp, grid, field.values, field.slopes,
        field.t_start, field.t_end, settings.rel_tol, settings.abs_tol, settings.max_steps,
        h0_full, states, status, t_reached, nsteps,
    )
