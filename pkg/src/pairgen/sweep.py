"""Momentum-plane spectra, plane densities and parameter scans."""
from __future__ import annotations

import logging
import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field, replace

import numpy as np

from .errors import ConfigError, NumericalFailure
from .field import DEFAULT_ENVELOPE_FLOOR, FieldConfig, PotentialInterpolant
from .solver import SolverSettings, final_distribution, integrate_rows, raise_for_status

logger = logging.getLogger(__name__)

SCAN_AXES = ("delta", "omega")


def grid_axis(lo: float, hi: float, n: int) -> np.ndarray:
    """Inclusive uniform nodes; exactly antisymmetric when ``lo == -hi``.

    Exact mirror nodes keep q_y-symmetric spectra bit-symmetric.
    """
    x = np.linspace(lo, hi, n)
    if lo == -hi:
        x = 0.5 * (x - x[::-1])
    return x


@dataclass(frozen=True)
class MomentumGrid:
    """Inclusive rectangular grid in the (q_x, q_y) plane at fixed q_z."""

    qx_min: float
    qx_max: float
    nx: int
    qy_min: float
    qy_max: float
    ny: int
    qz: float = 0.0

    def __post_init__(self):
        if self.nx < 2 or self.ny < 2:
            raise ConfigError("grid needs at least 2 nodes per axis", field="grid")
        if not self.qx_max > self.qx_min:
            raise ConfigError("qx_max must exceed qx_min", field="qx")
        if not self.qy_max > self.qy_min:
            raise ConfigError("qy_max must exceed qy_min", field="qy")

    @classmethod
    def square(cls, half_width: float, n: int, qz: float = 0.0) -> "MomentumGrid":
        return cls(-half_width, half_width, n, -half_width, half_width, n, qz)

    @property
    def qx(self) -> np.ndarray:
        return grid_axis(self.qx_min, self.qx_max, self.nx)

    @property
    def qy(self) -> np.ndarray:
        return grid_axis(self.qy_min, self.qy_max, self.ny)

    @property
    def shape(self):
        return (self.nx, self.ny)

    def points(self) -> np.ndarray:
        """Row-major (q_x outer, q_y inner) array of canonical momenta, shape (nx*ny, 3)."""
        qx, qy = np.meshgrid(self.qx, self.qy, indexing="ij")
        return np.column_stack([qx.ravel(), qy.ravel(), np.full(qx.size, self.qz)])

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass
class SpectrumField:
    grid: MomentumGrid
    values: np.ndarray
    cfg: FieldConfig
    settings: SolverSettings
    steps: np.ndarray | None = None
    failures: list = field(default_factory=list)
    wall_time: float = 0.0

    @property
    def metadata(self) -> dict:
        return {"field": self.cfg.to_dict(), "solver": self.settings.to_dict()}


@dataclass
class ScanResult:
    axis: str
    points: list
    metadata: list = field(default_factory=list)

    @property
    def parameters(self) -> np.ndarray:
        return np.array([p for p, _ in self.points])

    @property
    def densities(self) -> np.ndarray:
        return np.array([n for _, n in self.points])


def _blocks(nrows: int, workers: int):
    """Static contiguous partition of row indices."""
    return [b for b in np.array_split(np.arange(nrows), max(1, workers)) if b.size]


def compute_spectrum(grid: MomentumGrid, cfg: FieldConfig, settings: SolverSettings | None = None,
                     workers: int = 1, failure_budget: int = 0,
                     envelope_floor: float = DEFAULT_ENVELOPE_FLOOR,
                     field: PotentialInterpolant | None = None) -> SpectrumField:
    """Asymptotic distribution on every grid node.

    Grid rows (fixed q_x) are split into ``workers`` contiguous blocks that
    run on a thread pool; each node is written to its own slot so the result
    does not depend on the worker count.
    """
    settings = settings or SolverSettings()
    started = time.perf_counter()
    if field is None:
        field = PotentialInterpolant.build(cfg, envelope_floor)
    qs = grid.points()
    nmodes = qs.shape[0]
    states = np.zeros((nmodes, 10))
    status = np.zeros(nmodes, dtype=np.int64)
    t_reached = np.zeros(nmodes)
    nsteps = np.zeros(nmodes, dtype=np.int64)
    ny = grid.ny

    def work(rows_x):
        rows = (rows_x[:, None] * ny + np.arange(ny)[None, :]).ravel()
        integrate_rows(qs, rows, field, settings, states, status, t_reached, nsteps)

    blocks = _blocks(grid.nx, workers)
    if len(blocks) == 1:
        work(blocks[0])
    else:
        with ThreadPoolExecutor(max_workers=len(blocks)) as pool:
            for fut in [pool.submit(work, b) for b in blocks]:
                fut.result()

    values = np.empty(nmodes)
    failures = []
    for r in range(nmodes):
        if status[r] != 0:
            i, j = divmod(r, ny)
            try:
                raise_for_status(status[r], qs[r], t_reached[r], index=(i, j))
            except NumericalFailure as exc:
                failures.append(exc)
            values[r] = np.nan
        else:
            values[r] = final_distribution(states[r], qs[r], field, settings.formulation)
    if len(failures) > failure_budget:
        logger.error("%d mode failures exceed budget %d", len(failures), failure_budget)
        raise failures[0]
    elapsed = time.perf_counter() - started
    logger.info("spectrum %dx%d done in %.1fs (%d steps)", grid.nx, grid.ny, elapsed,
                int(nsteps.sum()))
    return SpectrumField(
        grid=grid,
        values=values.reshape(grid.shape),
        cfg=cfg,
        settings=settings,
        steps=nsteps.reshape(grid.shape),
        failures=[str(f) for f in failures],
        wall_time=elapsed,
    )


def trapezoid_weights(x: np.ndarray) -> np.ndarray:
    w = np.empty_like(x)
    d = np.diff(x)
    w[0] = 0.5 * d[0]
    w[-1] = 0.5 * d[-1]
    w[1:-1] = 0.5 * (d[:-1] + d[1:])
    return w


def number_density_plane(spec: SpectrumField) -> float:
    """Plane density ``(2 pi)^-2 * integral f dq_x dq_y`` by the trapezoidal rule."""
    wx = trapezoid_weights(spec.grid.qx)
    wy = trapezoid_weights(spec.grid.qy)
    rows = (spec.values * wy[None, :]).sum(axis=1)
    return float((rows * wx).sum() / (2.0 * math.pi) ** 2)


def widened_grid(grid: MomentumGrid, cfg: FieldConfig, extra_rings: int = 4) -> MomentumGrid:
    """Square grid enlarged, if needed, to hold the first few multiphoton rings."""
    from .analysis import ring_radius_analytic, threshold_order

    if cfg.omega <= 0:
        return grid
    n0 = threshold_order(cfg)
    reach = 1.1 * ring_radius_analytic(n0 + extra_rings, cfg)
    half = max(abs(grid.qx_min), abs(grid.qx_max), abs(grid.qy_min), abs(grid.qy_max))
    if reach <= half:
        return grid
    return replace(grid, qx_min=-reach, qx_max=reach, qy_min=-reach, qy_max=reach)


def scan(cfg_base: FieldConfig, axis: str, values, grid: MomentumGrid,
         settings: SolverSettings | None = None, workers: int = 1,
         auto_widen: bool = False, spectra: list | None = None) -> ScanResult:
    """Plane density as a function of ``delta`` or ``omega``.

    Computed spectra are appended to ``spectra`` when a list is supplied.
    """
    if axis not in SCAN_AXES:
        raise ConfigError(f"scan axis must be one of {SCAN_AXES}", field="axis")
    values = [float(v) for v in values]
    if len(values) == 0:
        raise ConfigError("scan needs at least one value", field="values")
    d = np.diff(values)
    if len(values) > 1 and not (np.all(d > 0) or np.all(d < 0)):
        raise ConfigError("scan values must be strictly monotone", field="values")
    points, meta = [], []
    for v in values:
        cfg = replace(cfg_base, **{axis: v})
        g = widened_grid(grid, cfg) if auto_widen else grid
        spec = compute_spectrum(g, cfg, settings, workers=workers)
        n = number_density_plane(spec)
        logger.info("scan %s=%g -> n=%.6e", axis, v, n)
        points.append((v, n))
        meta.append({"field": cfg.to_dict(), "grid": g.to_dict(), "wall_time": spec.wall_time})
        if spectra is not None:
            spectra.append(spec)
    return ScanResult(axis, points, meta)
