"""Parameter sets reproducing the published figures.

Every preset keeps ``E0 = 0.1*sqrt(2) E_cr``, ``phi = 0`` and, unless noted,
``tau = 100/m``.  ``desk`` scale halves the grid resolution and thins the
scan sampling so each preset runs in minutes on a single core.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

from .field import FieldConfig
from .sweep import MomentumGrid

E0_FIGURES = 0.1 * math.sqrt(2.0)
SCALES = ("full", "desk")


@dataclass(frozen=True)
class Preset:
    name: str
    kind: str  # "spectrum", "spectra" or "scan"
    omega: float
    tau: float = 100.0
    deltas: tuple = (0.0,)
    half_width: float = 1.0
    n_full: int = 201
    n_desk: int = 101
    scan_axis: str | None = None
    scan_full: tuple = ()
    scan_desk: tuple = ()
    series_full: tuple = ()
    series_desk: tuple = ()
    rings: tuple = ()
    ring_profiles: tuple = ("radial",)
    description: str = ""

    def grid(self, scale: str) -> MomentumGrid:
        n = self.n_full if scale == "full" else self.n_desk
        return MomentumGrid.square(self.half_width, n)

    def field(self, delta: float | None = None, omega: float | None = None) -> FieldConfig:
        return FieldConfig(
            e0_over_ecr=E0_FIGURES,
            tau=self.tau,
            omega=self.omega if omega is None else omega,
            phi=0.0,
            delta=self.deltas[0] if delta is None else delta,
        )


def _steps(a, b, n):
    return tuple(round(a + (b - a) * k / (n - 1), 10) for k in range(n))


def _build() -> dict:
    out = {}
    for suffix, delta in zip("abcd", (0.0, 0.5, 0.9, 1.0)):
        out[f"fig1{suffix}"] = Preset(
            f"fig1{suffix}", "spectrum", omega=0.05, deltas=(delta,), half_width=2.5,
            description=f"few-cycle pulse (sigma=5), omega=0.05m, delta={delta}",
        )
    for suffix, delta in zip("abc", (0.5, 0.9, 1.0)):
        out[f"fig2{suffix}"] = Preset(
            f"fig2{suffix}", "spectrum", omega=0.05, tau=300.0, deltas=(delta,),
            half_width=2.5,
            description=f"many-cycle pulse (sigma=15), omega=0.05m, delta={delta}",
        )
    out["fig3"] = Preset(
        "fig3", "spectra", omega=0.1, half_width=1.5,
        series_full=(0.0, 0.1, 0.2, 0.3, 0.4, 0.5, 0.7, 1.0),
        series_desk=(0.0, 0.2, 0.5, 1.0),
        description="polarization series at omega=0.1m",
    )
    for suffix, delta in zip("abcd", (0.0, 0.5, 0.9, 1.0)):
        out[f"fig4{suffix}"] = Preset(
            f"fig4{suffix}", "spectrum", omega=0.5, deltas=(delta,), half_width=1.0,
            n_full=181, n_desk=91, rings=(5, 6), ring_profiles=("radial", "axis"),
            description=f"multiphoton rings, omega=0.5m, delta={delta}",
        )
    out["fig5"] = Preset(
        "fig5", "scan", omega=0.05, half_width=2.5, n_full=101, n_desk=51,
        scan_axis="omega",
        scan_full=_steps(0.05, 0.7, 27), scan_desk=(0.05, 0.2, 0.35, 0.5),
        series_full=(0.0, 0.5, 0.9, 1.0), series_desk=(0.0, 0.5, 1.0),
        description="plane density versus omega for several delta",
    )
    out["fig6"] = Preset(
        "fig6", "scan", omega=0.05, half_width=2.5, n_full=101, n_desk=51,
        scan_axis="delta",
        scan_full=_steps(0.0, 1.0, 21), scan_desk=(0.0, 0.5, 1.0),
        series_full=(0.05, 0.1, 0.3, 0.5), series_desk=(0.05, 0.5),
        description="plane density versus delta for several omega",
    )
    return out


PRESETS = _build()
