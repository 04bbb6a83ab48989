"""Elliptically polarized Gaussian pulse and its vector potential.

Natural units with the electron mass as the unit: times in 1/m, momenta and
frequencies in m.  Field strengths enter only as ``eE/m**2 = E/E_cr`` and
potentials as ``eA/m``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from numba import njit

from .errors import ConfigError, WindowRangeError

DEFAULT_ENVELOPE_FLOOR = 1e-8

# Gauss-Legendre nodes for the per-interval field integrals.
_GL_X, _GL_W = np.polynomial.legendre.leggauss(10)


@dataclass(frozen=True)
class FieldConfig:
    """Pulse parameters ``E0/E_cr, tau, omega, phi, delta``."""

    e0_over_ecr: float
    tau: float
    omega: float
    phi: float = 0.0
    delta: float = 0.0

    def __post_init__(self):
        for name in ("e0_over_ecr", "tau", "omega", "phi", "delta"):
            value = getattr(self, name)
            if not math.isfinite(value):
                raise ConfigError(f"{name} must be finite, got {value!r}", field=name)
        # E0 = 0 is accepted as the null field used by vacuum-persistence checks.
        if self.e0_over_ecr < 0:
            raise ConfigError("e0_over_ecr must be non-negative", field="e0_over_ecr")
        if self.tau <= 0:
            raise ConfigError("tau must be positive", field="tau")
        if self.omega < 0:
            raise ConfigError("omega must be non-negative", field="omega")
        if abs(self.delta) > 1:
            raise ConfigError(f"|delta| must be <= 1, got {self.delta}", field="delta")

    @property
    def peak_amplitude(self) -> float:
        """Amplitude of the x component, ``E0 / sqrt(1 + delta**2)``."""
        return self.e0_over_ecr / math.sqrt(1.0 + self.delta**2)

    @property
    def sigma(self) -> float:
        """Number of carrier radians per pulse duration, ``omega * tau``."""
        return self.omega * self.tau

    @property
    def gamma(self) -> float:
        return keldysh(self)

    def to_dict(self) -> dict:
        return {
            "e0_over_ecr": self.e0_over_ecr,
            "tau": self.tau,
            "omega": self.omega,
            "phi": self.phi,
            "delta": self.delta,
        }


def electric_field(t, cfg: FieldConfig) -> np.ndarray:
    """Return ``eE(t)/m**2``; shape ``(3,)`` for scalar t, ``(n, 3)`` otherwise."""
    t = np.asarray(t, dtype=float)
    env = cfg.peak_amplitude * np.exp(-(t**2) / (2.0 * cfg.tau**2))
    phase = cfg.omega * t + cfg.phi
    out = np.zeros(t.shape + (3,))
    out[..., 0] = env * np.cos(phase)
    out[..., 1] = env * cfg.delta * np.sin(phase)
    return out


def keldysh(cfg: FieldConfig) -> float:
    """Keldysh parameter ``m*omega/(e*E)`` built on the peak amplitude E0/sqrt(1+delta^2)."""
    if cfg.e0_over_ecr <= 0:
        raise ConfigError("Keldysh parameter needs e0_over_ecr > 0", field="e0_over_ecr")
    return cfg.omega * math.sqrt(1.0 + cfg.delta**2) / cfg.e0_over_ecr


def integration_window(cfg: FieldConfig, envelope_floor: float = DEFAULT_ENVELOPE_FLOOR):
    """Symmetric window where the Gaussian envelope has dropped to ``envelope_floor``."""
    if not 0.0 < envelope_floor < 1.0:
        raise ConfigError("envelope_floor must lie in (0, 1)", field="envelope_floor")
    half = cfg.tau * math.sqrt(2.0 * math.log(1.0 / envelope_floor))
    return -half, half


def field_params(cfg: FieldConfig) -> np.ndarray:
    """Pack the pulse into the flat array consumed by the compiled kernels."""
    ax = cfg.peak_amplitude
    return np.array([ax, ax * cfg.delta, cfg.tau, cfg.omega, cfg.phi], dtype=np.float64)


@njit(cache=True, nogil=True)
def efield_at(t, fp):
    """Field components ``(E_x, E_y)``; E_z vanishes."""
    env = math.exp(-t * t / (2.0 * fp[2] * fp[2]))
    ph = fp[3] * t + fp[4]
    return fp[0] * env * math.cos(ph), fp[1] * env * math.sin(ph)


@njit(cache=True, nogil=True)
def potential_at(t, t0, h, values, slopes):
    """Cubic Hermite evaluation on uniform knots ``t0 + k*h``; returns ``(A_x, A_y, A_z)``."""
    n = values.shape[0]
    x = (t - t0) / h
    k = int(math.floor(x))
    if k < 0:
        k = 0
    elif k > n - 2:
        k = n - 2
    s = x - k
    s2 = s * s
    s3 = s2 * s
    h00 = 2.0 * s3 - 3.0 * s2 + 1.0
    h10 = (s3 - 2.0 * s2 + s) * h
    h01 = -2.0 * s3 + 3.0 * s2
    h11 = (s3 - s2) * h
    a0 = h00 * values[k, 0] + h10 * slopes[k, 0] + h01 * values[k + 1, 0] + h11 * slopes[k + 1, 0]
    a1 = h00 * values[k, 1] + h10 * slopes[k, 1] + h01 * values[k + 1, 1] + h11 * slopes[k + 1, 1]
    a2 = h00 * values[k, 2] + h10 * slopes[k, 2] + h01 * values[k + 1, 2] + h11 * slopes[k + 1, 2]
    return a0, a1, a2


def _segment_integrals(cfg: FieldConfig, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Integral of eE over each interval [a_k, b_k] by Gauss-Legendre."""
    half = 0.5 * (b - a)
    mid = 0.5 * (b + a)
    nodes = mid[:, None] + half[:, None] * _GL_X[None, :]
    e = electric_field(nodes, cfg)
    return half[:, None] * np.einsum("kjc,j->kc", e, _GL_W)


@dataclass(frozen=True)
class PotentialInterpolant:
    """Read-only cubic Hermite interpolant of ``eA(t)/m`` with ``A(t_start) = 0``.

    Slopes at the knots are the exact values ``-eE(t)/m**2``.  Knots are
    uniform so evaluation is O(1) inside the compiled right-hand sides.
    """

    cfg: FieldConfig
    t_start: float
    t_end: float
    step: float
    values: np.ndarray
    slopes: np.ndarray
    fp: np.ndarray = field(repr=False)
    max_midpoint_error: float = 0.0

    @property
    def knots(self) -> np.ndarray:
        return self.t_start + self.step * np.arange(self.values.shape[0])

    @property
    def tolerance(self) -> float:
        return potential_tolerance(self.cfg)

    @property
    def max_abs(self) -> float:
        return float(np.max(np.linalg.norm(self.values, axis=1)))

    def __call__(self, t) -> np.ndarray:
        return vector_potential(t, self)

    @classmethod
    def build(cls, cfg: FieldConfig, envelope_floor: float = DEFAULT_ENVELOPE_FLOOR,
              window=None, max_knots: int = 1 << 23) -> "PotentialInterpolant":
        t0, t1 = window if window is not None else integration_window(cfg, envelope_floor)
        tol = potential_tolerance(cfg)
        scale = min(cfg.tau, 1.0 / cfg.omega) if cfg.omega > 0 else cfg.tau
        n = max(16, int(math.ceil((t1 - t0) / (scale / 4.0))))
        while True:
            knots = np.linspace(t0, t1, n + 1)
            seg = _segment_integrals(cfg, knots[:-1], knots[1:])
            values = np.zeros((n + 1, 3))
            values[1:] = -np.cumsum(seg, axis=0)
            slopes = -electric_field(knots, cfg)
            step = (t1 - t0) / n
            # Midpoint check against the quadrature reference.
            mids = 0.5 * (knots[:-1] + knots[1:])
            ref = values[:-1] - _segment_integrals(cfg, knots[:-1], mids)
            approx = 0.5 * (values[:-1] + values[1:]) + 0.125 * step * (slopes[:-1] - slopes[1:])
            err = float(np.max(np.abs(approx - ref))) if n else 0.0
            if err <= tol or n >= max_knots:
                break
            n *= 2
        return cls(cfg, t0, t1, step, values, slopes, field_params(cfg), err)


def potential_tolerance(cfg: FieldConfig) -> float:
    return 1e-12 * max(1.0, cfg.e0_over_ecr * cfg.tau)


def vector_potential(t, interp: PotentialInterpolant) -> np.ndarray:
    """Return ``eA(t)/m`` for t inside the interpolant window."""
    ts = np.atleast_1d(np.asarray(t, dtype=float))
    if np.any(ts < interp.t_start) or np.any(ts > interp.t_end):
        raise WindowRangeError(
            f"t outside integration window [{interp.t_start}, {interp.t_end}]"
        )
    out = np.empty((ts.size, 3))
    for i, ti in enumerate(ts):
        out[i] = potential_at(ti, interp.t_start, interp.step, interp.values, interp.slopes)
    return out[0] if np.ndim(t) == 0 else out.reshape(np.shape(t) + (3,))
