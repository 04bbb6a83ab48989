"""Run orchestration shared by the CLI: spectra, scans and figure presets."""
from __future__ import annotations

import logging
import time
from pathlib import Path

from .analysis import detect_rings, spectrum_features
from .config import RunConfig
from .errors import ConfigError, EmptySpectrum, RingNotFound
from .io import RunManifest, derived_parameters, write_json, write_outputs, write_scan
from .presets import PRESETS, SCALES, Preset
from .solver import SolverSettings
from .sweep import compute_spectrum, number_density_plane, scan

logger = logging.getLogger(__name__)


def _features_or_none(spec):
    try:
        return spectrum_features(spec)
    except EmptySpectrum:
        return None


def _rings_or_none(spec, orders, profiles=("radial",)):
    if not orders:
        return None
    try:
        return [r for p in profiles for r in detect_rings(spec, orders, profile=p)]
    except RingNotFound as exc:
        logger.warning("ring detection skipped: %s", exc)
        return None


def run_spectrum(run: RunConfig, out_dir, workers: int = 1, rings=(), stem="spectrum",
                 extra: dict | None = None, ring_profiles=("radial",)) -> dict:
    """Compute one spectrum and write CSV, features, rings and manifest."""
    started = time.perf_counter()
    spec = compute_spectrum(run.grid, run.field, run.settings, workers=workers,
                            envelope_floor=run.envelope_floor)
    features = _features_or_none(spec)
    found = _rings_or_none(spec, rings, ring_profiles)
    manifest = RunManifest(
        config=run.echo(),
        derived=derived_parameters(run.field),
        wall_time=time.perf_counter() - started,
        extra={"plane_density": number_density_plane(spec),
               "density_normalization": "(2 pi)^-2 * trapezoid integral over (q_x, q_y) at q_z",
               "failures": spec.failures, **(extra or {})},
    )
    files = write_outputs(spec, features, found, manifest, out_dir, stem=stem)
    return {"spectrum": spec, "features": features, "rings": found, "manifest": manifest,
            "files": files}


def run_scan(run: RunConfig, axis: str, values, out_dir, workers: int = 1,
             auto_widen: bool = False, stem: str = "scan", extra: dict | None = None) -> dict:
    started = time.perf_counter()
    result = scan(run.field, axis, values, run.grid, run.settings, workers=workers,
                  auto_widen=auto_widen)
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    csv_path = write_scan(result, out / f"{stem}.csv")
    manifest = RunManifest(
        config=run.echo(),
        derived=derived_parameters(run.field),
        wall_time=time.perf_counter() - started,
        outputs={"scan": csv_path.name, "manifest": f"{stem}_manifest.json"},
        extra={"scan": {"axis": axis, "values": list(result.parameters),
                        "auto_widen": auto_widen, "points": result.metadata},
               **(extra or {})},
    )
    write_json(out / f"{stem}_manifest.json", manifest.to_dict())
    return {"scan": result, "manifest": manifest, "files": {"scan": csv_path}}


def _tag(x: float) -> str:
    return f"{x:g}".replace(".", "p")


def run_preset(name: str, scale: str = "desk", out_dir=None, workers: int = 1,
               settings: SolverSettings | None = None) -> dict:
    """Run one figure preset; returns the per-run result dicts keyed by output stem."""
    if name not in PRESETS:
        raise ConfigError(f"unknown preset {name!r}; choose from {sorted(PRESETS)}",
                          field="preset")
    if scale not in SCALES:
        raise ConfigError(f"scale must be one of {SCALES}", field="scale")
    preset: Preset = PRESETS[name]
    out = Path(out_dir or f"out/{name}_{scale}")
    settings = settings or SolverSettings()
    grid = preset.grid(scale)
    extra = {"preset": {"name": name, "scale": scale, "description": preset.description}}
    results = {}
    if preset.kind == "spectrum":
        run = RunConfig(preset.field(), grid, settings)
        results["spectrum"] = run_spectrum(run, out, workers, preset.rings, extra=extra,
                                           ring_profiles=preset.ring_profiles)
    elif preset.kind == "spectra":
        series = preset.series_full if scale == "full" else preset.series_desk
        for delta in series:
            run = RunConfig(preset.field(delta=delta), grid, settings)
            stem = f"spectrum_delta{_tag(delta)}"
            results[stem] = run_spectrum(run, out, workers, preset.rings, stem=stem, extra=extra,
                                         ring_profiles=preset.ring_profiles)
    else:
        values = preset.scan_full if scale == "full" else preset.scan_desk
        series = preset.series_full if scale == "full" else preset.series_desk
        for s in series:
            if preset.scan_axis == "omega":
                cfg, stem = preset.field(delta=s), f"scan_delta{_tag(s)}"
            else:
                cfg, stem = preset.field(omega=s), f"scan_omega{_tag(s)}"
            run = RunConfig(cfg, grid, settings)
            results[stem] = run_scan(run, preset.scan_axis, values, out, workers,
                                     auto_widen=True, stem=stem, extra=extra)
    logger.info("preset %s (%s) written to %s", name, scale, out)
    return results
