"""Effective-mass ring formulas and feature extraction from computed spectra."""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass

import numpy as np
from scipy.optimize import brentq

from .errors import ConfigError, EmptySpectrum, RingNotFound
from .field import FieldConfig
from .sweep import SpectrumField

RING_GATE_BINS = 3
LOBE_THRESHOLD = 0.5
RING_PROFILES = ("radial", "axis")


@dataclass
class RingReport:
    photon_order: int
    analytic_radius: float
    detected_radius: float
    detection_prominence: float
    found: bool = True
    profile: str = "radial"

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass
class SpectrumFeatures:
    peak_location: tuple
    asymmetry_y: float
    lobe_count_y: int

    def to_dict(self) -> dict:
        return {
            "peak_location": [float(v) for v in self.peak_location],
            "asymmetry_y": float(self.asymmetry_y),
            "lobe_count_y": int(self.lobe_count_y),
        }


def effective_mass(cfg: FieldConfig) -> float:
    """Field-dressed mass ``sqrt(1 + (E0/omega)^2 / 2)`` in units of m.

    The full E0 is used for every polarization since the intensity is fixed.
    """
    if cfg.omega <= 0:
        raise ConfigError("effective mass is undefined for omega = 0", field="omega")
    return math.sqrt(1.0 + 0.5 * (cfg.e0_over_ecr / cfg.omega) ** 2)


def threshold_order(cfg: FieldConfig) -> int:
    """Smallest photon number with n*omega >= 2 m*."""
    ms = effective_mass(cfg)
    n = max(1, math.ceil(2.0 * ms / cfg.omega))
    # Guard against ceil of a value that is an integer up to rounding.
    if (n - 1) >= 1 and ((n - 1) * cfg.omega / 2.0) ** 2 >= ms**2:
        n -= 1
    return n


def ring_radius_analytic(n: int, cfg: FieldConfig) -> float:
    """Radius of the n-photon ring, ``sqrt((n omega/2)^2 - m*^2)``."""
    ms = effective_mass(cfg)
    disc = (n * cfg.omega / 2.0) ** 2 - 1.0 - 0.5 * (cfg.e0_over_ecr / cfg.omega) ** 2
    if disc < 0:
        thr = threshold_order(cfg)
        raise RingNotFound(
            f"{n}-photon absorption is below threshold (2m* = {2 * ms:.6g}); "
            f"lowest open order is {thr}",
            threshold_order=thr,
        )
    return math.sqrt(disc)


def ring_radius_energy_balance(n: int, cfg: FieldConfig) -> float:
    """Root of ``n omega = 2 sqrt(m*^2 + q^2)`` found numerically."""
    ms = effective_mass(cfg)
    target = n * cfg.omega
    g = lambda q: 2.0 * math.sqrt(ms * ms + q * q) - target  # noqa: E731
    if g(0.0) > 0:
        raise RingNotFound(f"{n}-photon absorption is below threshold",
                           threshold_order=threshold_order(cfg))
    if g(0.0) == 0:
        return 0.0
    return brentq(g, 0.0, target / 2.0, xtol=1e-15, rtol=4 * np.finfo(float).eps)


def radial_profile(spec: SpectrumField):
    """Angle-averaged spectrum binned by |q| in bins one grid step wide.

    Returns ``(centers, means, counts)``; bin k covers [(k-1/2) d, (k+1/2) d).
    """
    qx, qy = spec.grid.qx, spec.grid.qy
    d = min(qx[1] - qx[0], qy[1] - qy[0])
    rx, ry = np.meshgrid(qx, qy, indexing="ij")
    r = np.hypot(rx, ry).ravel()
    vals = spec.values.ravel()
    ok = np.isfinite(vals)
    idx = np.floor(r[ok] / d + 0.5).astype(int)
    nb = idx.max() + 1
    sums = np.bincount(idx, weights=vals[ok], minlength=nb)
    counts = np.bincount(idx, minlength=nb)
    with np.errstate(invalid="ignore", divide="ignore"):
        means = np.where(counts > 0, sums / np.maximum(counts, 1), np.nan)
    return np.arange(nb) * d, means, counts


def axis_profile(spec: SpectrumField):
    """Spectrum along the major polarization axis (q_y = 0) as a function of |q_x|.

    Values at +q_x and -q_x are averaged; rows bracketing q_y = 0 are
    interpolated linearly when the grid has no node there.  Returns
    ``(radii, values)``.
    """
    qx, qy = spec.grid.qx, spec.grid.qy
    if not qy[0] <= 0.0 <= qy[-1] or not qx[0] < 0.0 < qx[-1]:
        raise ConfigError("axis profile needs a grid spanning q_x = 0 and q_y = 0", field="grid")
    j = min(int(np.searchsorted(qy, 0.0, side="right")) - 1, qy.size - 2)
    w = (0.0 - qy[j]) / (qy[j + 1] - qy[j])
    row = (1.0 - w) * spec.values[:, j] + w * spec.values[:, j + 1]
    pos = qx >= 0.0
    r = qx[pos]
    keep = r <= -qx[0]
    r = r[keep]
    plus = row[pos][keep]
    minus = np.interp(-r, qx, row)
    return r, 0.5 * (plus + minus)


def _local_maxima(prof: np.ndarray) -> list:
    out = []
    for k in range(1, prof.size - 1):
        a, b, c = prof[k - 1], prof[k], prof[k + 1]
        if np.isfinite(a) and np.isfinite(b) and np.isfinite(c) and b > a and b >= c:
            out.append(k)
    return out


def _refine(centers, prof, k):
    a, b, c = prof[k - 1], prof[k], prof[k + 1]
    denom = a - 2.0 * b + c
    shift = 0.0 if denom == 0 else 0.5 * (a - c) / denom
    return centers[k] + shift * (centers[1] - centers[0])


def detect_rings(spec: SpectrumField, orders, profile: str = "radial") -> list:
    """Match profile maxima to the analytic n-photon radii.

    ``profile="radial"`` bins every node by |q| (angle average);
    ``profile="axis"`` uses the cut along the major polarization axis q_x.
    """
    if profile == "radial":
        centers, prof, _ = radial_profile(spec)
    elif profile == "axis":
        centers, prof = axis_profile(spec)
    else:
        raise ConfigError(f"ring profile must be one of {RING_PROFILES}", field="profile")
    d = centers[1] - centers[0]
    maxima = _local_maxima(prof)
    reports = []
    for n in orders:
        qn = ring_radius_analytic(int(n), spec.cfg)
        near = [k for k in maxima if abs(centers[k] - qn) <= RING_GATE_BINS * d]
        if not near:
            reports.append(RingReport(int(n), qn, float("nan"), 0.0, found=False,
                                      profile=profile))
            continue
        k = min(near, key=lambda k: abs(centers[k] - qn))
        lo, hi = max(0, k - RING_GATE_BINS), min(prof.size, k + RING_GATE_BINS + 1)
        floor = np.nanmin(prof[lo:hi])
        prominence = float(prof[k] / floor) if floor > 0 else float("inf")
        reports.append(RingReport(int(n), qn, float(_refine(centers, prof, k)), prominence,
                                  profile=profile))
    return reports


def mirror_index(qy: np.ndarray) -> np.ndarray:
    """Index j' with qy[j'] == -qy[j], or -1 where the grid has no mirror node."""
    step = qy[1] - qy[0]
    out = np.full(qy.size, -1)
    for j, y in enumerate(qy):
        k = int(np.argmin(np.abs(qy + y)))
        if abs(qy[k] + y) <= 1e-9 * max(1.0, abs(step)):
            out[j] = k
    return out


def asymmetry_y(values: np.ndarray, qy: np.ndarray) -> float:
    m = mirror_index(qy)
    cols = np.nonzero(m >= 0)[0]
    if cols.size == 0:
        return float("nan")
    f = values[:, cols]
    fm = values[:, m[cols]]
    total = f.sum()
    if total == 0:
        return 0.0
    return float(np.abs(f - fm).sum() / total)


def count_runs(column: np.ndarray, threshold: float) -> int:
    above = column > threshold
    return int(np.count_nonzero(above[1:] & ~above[:-1]) + int(above[0]))


def spectrum_features(spec: SpectrumField) -> SpectrumFeatures:
    vals = np.where(np.isfinite(spec.values), spec.values, -np.inf)
    fmax = vals.max()
    if not fmax > 0:
        raise EmptySpectrum("spectrum is identically zero")
    i, j = np.unravel_index(int(np.argmax(vals)), vals.shape)
    peak = (float(spec.grid.qx[i]), float(spec.grid.qy[j]))
    lobes = count_runs(vals[i, :], LOBE_THRESHOLD * fmax)
    return SpectrumFeatures(peak, asymmetry_y(spec.values, spec.grid.qy), lobes)
