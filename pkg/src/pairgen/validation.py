"""Executable oracle suites behind ``pairgen validate``."""
from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np

from .field import FieldConfig, PotentialInterpolant
from .presets import E0_FIGURES
from .qve import integrate_qve
from .solver import SolverSettings, _run, integrate_mode
from .sweep import MomentumGrid, compute_spectrum

logger = logging.getLogger(__name__)

SEED = 2016
FIG1A = FieldConfig(E0_FIGURES, 100.0, 0.05, 0.0, 0.0)
# Production tolerances; the norm check exercises the same stepper as the spectra.
CONSERVATION_SETTINGS = SolverSettings(formulation="full10")


@dataclass
class CheckResult:
    name: str
    value: float
    tolerance: float

    @property
    def passed(self) -> bool:
        return bool(np.isfinite(self.value) and self.value <= self.tolerance)

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"[{status}] {self.name}: {self.value:.3e} (tolerance {self.tolerance:.1e})"


def random_modes(n: int, radius: float = 1.0, seed: int = SEED) -> np.ndarray:
    """n momenta drawn uniformly from the ball |q| <= radius."""
    rng = np.random.default_rng(seed)
    d = rng.normal(size=(n, 3))
    d /= np.linalg.norm(d, axis=1)[:, None]
    r = radius * rng.random(n) ** (1.0 / 3.0)
    return d * r[:, None]


def dual_formulation(modes, field: PotentialInterpolant, settings: SolverSettings | None = None):
    settings = settings or SolverSettings()
    full = SolverSettings(settings.rel_tol, settings.abs_tol, settings.max_steps, "full10")
    diffs = [abs(integrate_mode(q, field, settings) - integrate_mode(q, field, full))
             for q in modes]
    return float(max(diffs))


def qve_agreement(modes, field: PotentialInterpolant, settings: SolverSettings | None = None):
    settings = settings or SolverSettings()
    diffs = [abs(integrate_mode(q, field, settings) - integrate_qve(q, field, settings))
             for q in modes]
    return float(max(diffs))


def norm_deviation(q, field: PotentialInterpolant, settings=CONSERVATION_SETTINGS,
                   n_samples: int = 400) -> float:
    """Max |s^2 + v^2 + a^2 + t1^2 - 4| along a ten-component trajectory."""
    ts = np.linspace(field.t_start, field.t_end, n_samples)
    _, _, samples, _ = _run(q, field, settings, ts)
    return float(np.max(np.abs(np.sum(samples**2, axis=1) - 4.0)))


def mirror_deviation(values: np.ndarray) -> float:
    """max |f(qx, qy) - f(qx, -qy)| on a grid symmetric in q_y."""
    return float(np.max(np.abs(values - values[:, ::-1])))


def run_suite(quick: bool = False) -> list:
    field = PotentialInterpolant.build(FIG1A)
    n_modes = 8 if quick else 50
    modes = random_modes(n_modes)
    results = [
        CheckResult(f"dual formulation ({n_modes} modes)", dual_formulation(modes, field), 1e-6),
        CheckResult(f"QVE oracle ({n_modes} modes)", qve_agreement(modes, field), 1e-6),
    ]
    n_traj = 3 if quick else 10
    dev = max(norm_deviation(q, field) for q in random_modes(n_traj, seed=SEED + 1))
    results.append(CheckResult(f"norm conservation ({n_traj} trajectories)", dev, 1e-8))
    n = 15 if quick else 41
    spec = compute_spectrum(MomentumGrid.square(1.0, n), FIG1A, field=field)
    results.append(CheckResult(f"q_y mirror symmetry ({n}x{n})", mirror_deviation(spec.values),
                               1e-6))
    results.append(CheckResult("occupation lower bound", float(-spec.values.min()), 1e-8))
    results.append(CheckResult("occupation upper bound", float(spec.values.max() - 2.0), 1e-8))
    for r in results:
        logger.info(r.line())
    return results
