"""Spectrum CSV, JSON side files and the run manifest."""
from __future__ import annotations

import csv
import json
import math
import platform
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import __version__
from .analysis import effective_mass, ring_radius_analytic, threshold_order
from .errors import PairgenError
from .field import FieldConfig, keldysh
from .sweep import MomentumGrid, ScanResult, SpectrumField

SPECTRUM_HEADER = ("q_x", "q_y", "f")
N_RING_ORDERS = 5


class OutputError(PairgenError, OSError):
    pass


def fmt(x: float) -> str:
    return format(float(x), ".17g")


def derived_parameters(cfg: FieldConfig) -> dict:
    """Keldysh parameter, cycle parameter, effective mass and the first open rings."""
    out = {"sigma": cfg.sigma, "peak_amplitude": cfg.peak_amplitude}
    out["gamma"] = keldysh(cfg) if cfg.e0_over_ecr > 0 else None
    if cfg.omega > 0:
        n0 = threshold_order(cfg)
        out["effective_mass"] = effective_mass(cfg)
        out["threshold_order"] = n0
        out["ring_radii"] = {str(n): ring_radius_analytic(n, cfg)
                             for n in range(n0, n0 + N_RING_ORDERS)}
    else:
        out["effective_mass"] = None
        out["threshold_order"] = None
        out["ring_radii"] = {}
    return out


@dataclass
class RunManifest:
    config: dict
    derived: dict
    wall_time: float = 0.0
    outputs: dict = field(default_factory=dict)
    extra: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "pairgen_version": __version__,
            "config": self.config,
            "derived": self.derived,
            "wall_time_s": self.wall_time,
            "outputs": self.outputs,
            "determinism": {
                "seed_free": True,
                "note": "no random numbers; results depend only on config and platform",
            },
            "platform": {"python": platform.python_version(), "numpy": np.__version__},
            **self.extra,
        }


def _json_default(obj):
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.floating):
        return float(obj)
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    raise TypeError(f"not serializable: {type(obj).__name__}")


def _clean(obj):
    # JSON has no NaN; missing ring detections are written as null.
    if isinstance(obj, float) and not math.isfinite(obj):
        return None
    if isinstance(obj, dict):
        return {k: _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    return obj


def write_json(path: Path, payload) -> Path:
    try:
        path.write_text(json.dumps(_clean(payload), indent=2, sort_keys=True,
                                   default=_json_default) + "\n", encoding="utf-8")
    except OSError as exc:
        raise OutputError(f"cannot write {path}: {exc}") from exc
    return path


def write_spectrum_csv(spec: SpectrumField, path) -> Path:
    """Row-major (q_x outer, q_y inner) CSV at 17 significant digits."""
    path = Path(path)
    qx, qy = spec.grid.qx, spec.grid.qy
    lines = [",".join(SPECTRUM_HEADER)]
    for i, x in enumerate(qx):
        sx = fmt(x)
        for j, y in enumerate(qy):
            lines.append(f"{sx},{fmt(y)},{fmt(spec.values[i, j])}")
    try:
        path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    except OSError as exc:
        raise OutputError(f"cannot write {path}: {exc}") from exc
    return path


def read_spectrum_csv(path, cfg: FieldConfig | None = None, settings=None) -> SpectrumField:
    """Rebuild a :class:`SpectrumField` from a CSV written by :func:`write_spectrum_csv`."""
    from .solver import SolverSettings

    path = Path(path)
    try:
        with path.open(newline="", encoding="utf-8") as fh:
            reader = csv.reader(fh)
            header = next(reader)
            rows = [tuple(float(v) for v in row) for row in reader if row]
    except OSError as exc:
        raise OutputError(f"cannot read {path}: {exc}") from exc
    if tuple(h.strip() for h in header) != SPECTRUM_HEADER:
        raise PairgenError(f"{path}: expected header {','.join(SPECTRUM_HEADER)}")
    data = np.array(rows)
    qx = np.unique(data[:, 0])
    qy = np.unique(data[:, 1])
    if qx.size * qy.size != data.shape[0]:
        raise PairgenError(f"{path}: rows do not form a rectangular grid")
    grid = MomentumGrid(qx[0], qx[-1], qx.size, qy[0], qy[-1], qy.size)
    values = data[:, 2].reshape(qx.size, qy.size)
    if cfg is None:
        cfg = FieldConfig(0.0, 1.0, 0.0)
    if not (np.array_equal(grid.qx, qx) and np.array_equal(grid.qy, qy)):
        raise PairgenError(f"{path}: grid nodes are not uniformly spaced")
    return SpectrumField(grid, values, cfg, settings or SolverSettings())


def write_outputs(spec: SpectrumField, features, rings, manifest: RunManifest, out_dir,
                  stem: str = "spectrum") -> dict:
    """Write the spectrum CSV, features/rings JSON and the manifest; return the file map."""
    out = Path(out_dir)
    try:
        out.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise OutputError(f"cannot create {out}: {exc}") from exc
    files = {"spectrum": write_spectrum_csv(spec, out / f"{stem}.csv").name}
    if features is not None:
        files["features"] = write_json(out / f"{stem}_features.json", features.to_dict()).name
    if rings is not None:
        files["rings"] = write_json(out / f"{stem}_rings.json",
                                    [r.to_dict() for r in rings]).name
    manifest.outputs.update(files)
    manifest.outputs["manifest"] = f"{stem}_manifest.json"
    write_json(out / f"{stem}_manifest.json", manifest.to_dict())
    return {k: out / v for k, v in manifest.outputs.items()}


def write_scan(result: ScanResult, path) -> Path:
    path = Path(path)
    lines = [f"{result.axis},n_plane"]
    lines += [f"{fmt(p)},{fmt(n)}" for p, n in result.points]
    try:
        path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    except OSError as exc:
        raise OutputError(f"cannot write {path}: {exc}") from exc
    return path
