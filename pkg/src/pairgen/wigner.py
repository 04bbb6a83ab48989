"""Wigner-component dynamics for one momentum mode in a homogeneous field.

Two equivalent representations are provided:

* the ten nontrivial components ``w = (s, v, a, t1)``, and
* the stabilized pair ``(f, w9)`` with ``w = 2(f - 1) e1 + F w9``, which keeps
  the occupation ``f`` as a state variable so that tiny values of ``f`` are
  not lost to cancellation against the vacuum part.

Layout of flat state vectors (length 10):
``full10  = [s, vx, vy, vz, ax, ay, az, tx, ty, tz]``,
``reduced = [f, wv(3), wa(3), wt(3)]``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from numba import njit

from .field import PotentialInterpolant, efield_at, electric_field, potential_at, vector_potential


@dataclass
class WignerState10:
    s: float
    v: np.ndarray
    a: np.ndarray
    t1: np.ndarray

    def to_array(self) -> np.ndarray:
        return np.concatenate(([self.s], self.v, self.a, self.t1)).astype(float)

    @classmethod
    def from_array(cls, y) -> "WignerState10":
        y = np.asarray(y, dtype=float)
        return cls(float(y[0]), y[1:4].copy(), y[4:7].copy(), y[7:10].copy())

    def norm2(self) -> float:
        return float(self.s**2 + self.v @ self.v + self.a @ self.a + self.t1 @ self.t1)


@dataclass
class ReducedModeState:
    f: float
    w9: np.ndarray

    @property
    def wv(self):
        return self.w9[0:3]

    @property
    def wa(self):
        return self.w9[3:6]

    @property
    def wt(self):
        return self.w9[6:9]

    def to_array(self) -> np.ndarray:
        return np.concatenate(([self.f], self.w9)).astype(float)

    @classmethod
    def from_array(cls, y) -> "ReducedModeState":
        y = np.asarray(y, dtype=float)
        return cls(float(y[0]), y[1:10].copy())

    @classmethod
    def initial(cls) -> "ReducedModeState":
        return cls(0.0, np.zeros(9))


@dataclass(frozen=True)
class ModeContext:
    """Canonical momentum of a mode plus the shared field interpolant."""

    q: np.ndarray
    field: PotentialInterpolant

    def __post_init__(self):
        q = np.asarray(self.q, dtype=float).reshape(3)
        if not np.all(np.isfinite(q)):
            raise ValueError("canonical momentum must be finite")
        object.__setattr__(self, "q", q)

    def kinetic_momentum(self, t: float) -> np.ndarray:
        return self.q - vector_potential(t, self.field)

    def efield(self, t: float) -> np.ndarray:
        return electric_field(t, self.field.cfg)


# --- compiled cores -------------------------------------------------------

@njit(cache=True, nogil=True)
def reduced_core(px, py, pz, ex, ey, ez, y, dy):
    """Right-hand side of the (f, w9) system for kinetic momentum p and field e."""
    om2 = 1.0 + px * px + py * py + pz * pz
    om = math.sqrt(om2)
    f = y[0]
    vx, vy, vz = y[1], y[2], y[3]
    ax, ay, az = y[4], y[5], y[6]
    tx, ty, tz = y[7], y[8], y[9]
    ew = ex * vx + ey * vy + ez * vz
    pe = px * ex + py * ey + pz * ez
    pw = px * vx + py * vy + pz * vz
    dy[0] = 0.5 * ew / om
    # Source 2(1 - f) * vector slot of d(e1)/dt.
    src = 2.0 * (1.0 - f)
    c1 = src / om
    c3 = src * pe / (om2 * om)
    g = ew / om2
    dy[1] = -g * px - 2.0 * (py * az - pz * ay) - 2.0 * tx + c1 * ex - c3 * px
    dy[2] = -g * py - 2.0 * (pz * ax - px * az) - 2.0 * ty + c1 * ey - c3 * py
    dy[3] = -g * pz - 2.0 * (px * ay - py * ax) - 2.0 * tz + c1 * ez - c3 * pz
    dy[4] = -2.0 * (py * vz - pz * vy)
    dy[5] = -2.0 * (pz * vx - px * vz)
    dy[6] = -2.0 * (px * vy - py * vx)
    dy[7] = 2.0 * (vx + px * pw)
    dy[8] = 2.0 * (vy + py * pw)
    dy[9] = 2.0 * (vz + pz * pw)


@njit(cache=True, nogil=True)
def full10_core(px, py, pz, y, dy):
    """Ten-component equations; only the kinetic momentum enters explicitly."""
    s = y[0]
    vx, vy, vz = y[1], y[2], y[3]
    ax, ay, az = y[4], y[5], y[6]
    tx, ty, tz = y[7], y[8], y[9]
    dy[0] = 2.0 * (px * tx + py * ty + pz * tz)
    dy[1] = -2.0 * (py * az - pz * ay) - 2.0 * tx
    dy[2] = -2.0 * (pz * ax - px * az) - 2.0 * ty
    dy[3] = -2.0 * (px * ay - py * ax) - 2.0 * tz
    dy[4] = -2.0 * (py * vz - pz * vy)
    dy[5] = -2.0 * (pz * vx - px * vz)
    dy[6] = -2.0 * (px * vy - py * vx)
    dy[7] = -2.0 * px * s + 2.0 * vx
    dy[8] = -2.0 * py * s + 2.0 * vy
    dy[9] = -2.0 * pz * s + 2.0 * vz


@njit(cache=True, nogil=True)
def rhs_reduced_kernel(t, y, dy, q, fp, grid, av, ad):
    ax, ay, az = potential_at(t, grid[0], grid[1], av, ad)
    ex, ey = efield_at(t, fp)
    reduced_core(q[0] - ax, q[1] - ay, q[2] - az, ex, ey, 0.0, y, dy)


@njit(cache=True, nogil=True)
def rhs_full10_kernel(t, y, dy, q, fp, grid, av, ad):
    ax, ay, az = potential_at(t, grid[0], grid[1], av, ad)
    full10_core(q[0] - ax, q[1] - ay, q[2] - az, y, dy)


# --- python-facing operations --------------------------------------------

def omega_energy(p) -> float:
    """Total energy sqrt(m^2 + p^2) with m = 1."""
    p = np.asarray(p, dtype=float)
    return float(math.sqrt(1.0 + p @ p))


def basis_e1_from_p(p) -> np.ndarray:
    p = np.asarray(p, dtype=float)
    om = omega_energy(p)
    out = np.zeros(10)
    out[0] = 1.0 / om
    out[1:4] = p / om
    return out


def e1_dot_from_p(p, e) -> np.ndarray:
    p = np.asarray(p, dtype=float)
    e = np.asarray(e, dtype=float)
    om = omega_energy(p)
    pe = p @ e
    out = np.zeros(10)
    out[0] = -pe / om**3
    out[1:4] = e / om - p * pe / om**3
    return out


def decomposition_matrix(p) -> np.ndarray:
    """The 10x9 matrix F mapping w9 into the ten-component space."""
    F = np.zeros((10, 9))
    F[0, 0:3] = -np.asarray(p, dtype=float)
    F[1:, :] = np.eye(9)
    return F


def vacuum_state(q, t, field: PotentialInterpolant) -> WignerState10:
    p = np.asarray(q, dtype=float) - vector_potential(t, field)
    om = omega_energy(p)
    return WignerState10(-2.0 / om, -2.0 * p / om, np.zeros(3), np.zeros(3))


def basis_e1(q, t, field: PotentialInterpolant) -> np.ndarray:
    return basis_e1_from_p(np.asarray(q, dtype=float) - vector_potential(t, field))


def e1_dot(q, t, field: PotentialInterpolant) -> np.ndarray:
    p = np.asarray(q, dtype=float) - vector_potential(t, field)
    return e1_dot_from_p(p, electric_field(t, field.cfg))


def rhs_reduced(state: ReducedModeState, ctx: ModeContext, t: float,
                check: bool = False) -> ReducedModeState:
    """Time derivative of (f, w9).

    With ``check=True`` the closed-form ``df/dt = eE.wv / (2 Omega)`` is
    compared against the unsimplified product ``0.5 * e1dot^T F w9``.
    """
    p = ctx.kinetic_momentum(t)
    e = ctx.efield(t)
    y = state.to_array()
    dy = np.empty(10)
    reduced_core(p[0], p[1], p[2], e[0], e[1], e[2], y, dy)
    if check:
        direct = 0.5 * e1_dot_from_p(p, e) @ decomposition_matrix(p) @ state.w9
        assert abs(direct - dy[0]) <= 1e-12 * max(1.0, abs(direct)), (direct, dy[0])
    return ReducedModeState.from_array(dy)


def rhs_full10(state: WignerState10, ctx: ModeContext, t: float) -> WignerState10:
    p = ctx.kinetic_momentum(t)
    dy = np.empty(10)
    full10_core(p[0], p[1], p[2], state.to_array(), dy)
    return WignerState10.from_array(dy)


def reduced_to_full(state: ReducedModeState, p) -> np.ndarray:
    """Map (f, w9) to the ten-component vector 2(f-1) e1 + F w9."""
    return 2.0 * (state.f - 1.0) * basis_e1_from_p(p) + decomposition_matrix(p) @ state.w9


def distribution_from_p(w, p) -> float:
    """0.5 * e1^T (w - w_vac) = 0.5 * e1^T w + 1, since e1^T w_vac = -2."""
    e1 = basis_e1_from_p(p)
    w = np.asarray(w, dtype=float)
    return float(0.5 * (e1 @ (w + 2.0 * e1)))


def distribution_from_state10(w, q, t, field: PotentialInterpolant) -> float:
    if isinstance(w, WignerState10):
        w = w.to_array()
    p = np.asarray(q, dtype=float) - vector_potential(t, field)
    return distribution_from_p(w, p)
