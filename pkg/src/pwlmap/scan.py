"""Parameter-space scans: classification grids and rotation-number curves.

Each cell is computed independently from its own parameters and a seed
derived from (config seed, row, column), so results do not depend on how
the grid is split between workers.
"""
from __future__ import annotations

import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import _kernels as K
from .circle_map import rotation_number
from .plane_map import SOFT_LIMIT, MapParams
from .rational_dynamics import (FiniteOrder, HyperbolicPair, Irrational, UniqueParabolic,
                                Unresolved, classify)

SCAN_HEADER = "mu,nu,a,b,rotation,err,class,period,lambda"
CURVE_HEADER = "param,rotation,err"
CIRCLE_HEADER = "angle,radius"

PALETTE = {
    "F": (0, 0, 255),
    "P": (0, 255, 0),
    "H": (255, 0, 0),
    "I": (255, 255, 255),
    "D": (0, 0, 0),
    "U": (128, 128, 128),
}


def fmt(x) -> str:
    """17 significant digits (round-trips a double); empty for None."""
    if x is None:
        return ""
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    return "%.17g" % x


def axis(lo: float, hi: float, n: int) -> np.ndarray:
    if n == 1:
        return np.array([float(lo)])
    return np.linspace(lo, hi, n)


@dataclass
class ScanConfig:
    """Rectangle [x_range] x [y_range] in ``space`` ("munu" or "ab") at width x height.

    Columns run along the first parameter (mu or a), rows along the second.
    """

    x_range: tuple = (0.0, 2.0)
    y_range: tuple = (-2.0, 2.0)
    width: int = 200
    height: int = 200
    space: str = "munu"
    N: int = 10**4
    q_max: int = 64
    soft_limit: float = SOFT_LIMIT
    n_probes: int = 4
    probe_steps: int | None = None
    seed: int = 0
    workers: int = 1
    csv_path: str | None = None
    ppm_path: str | None = None

    def __post_init__(self):
        if self.width < 1 or self.height < 1:
            raise ValueError("grid dimensions must be >= 1")
        if self.N < 1:
            raise ValueError("N must be >= 1")
        if self.space not in ("munu", "ab"):
            raise ValueError(f"unknown parameter space {self.space!r}")
        if self.workers < 1:
            raise ValueError("workers must be >= 1")

    def params_at(self, row: int, col: int) -> MapParams:
        u = axis(*self.x_range, self.width)[col]
        w = axis(*self.y_range, self.height)[row]
        return MapParams.from_mu_nu(u, w) if self.space == "munu" else MapParams(u, w)


@dataclass
class ScanCell:
    row: int
    col: int
    params: MapParams
    rotation: float
    err: float
    tag: str
    period: int | None = None
    lam: float | None = None
    detail: object = field(default=None, repr=False)

    def csv_row(self) -> str:
        p = self.params
        return ",".join([fmt(p.mu), fmt(p.nu), fmt(p.a), fmt(p.b), fmt(self.rotation),
                         fmt(self.err), self.tag, fmt(self.period), fmt(self.lam)])


def _probe_tag(params, rng, n_probes, steps, limit):
    """'D' when every seeded probe direction diverges, else 'I'."""
    phis = rng.uniform(0.0, 2.0 * math.pi, n_probes)
    for phi in phis:
        status = K.modulus_probe(params.a, params.b, math.cos(phi), math.sin(phi),
                                 steps, limit, 1.0 / limit)[0]
        if status != 1:
            return "I"
    return "D"


def scan_cell(config: ScanConfig, row: int, col: int) -> ScanCell:
    params = config.params_at(row, col)
    # T_ba is conjugate to T_ab by v -> -v, so both share one computation
    canon = params if params.a >= params.b else params.swapped()
    est = rotation_number(canon, 0.0, config.N)
    cls = classify(canon, q_max=config.q_max, estimate=est)
    period = lam = None
    if isinstance(cls, FiniteOrder):
        period = cls.period
    elif isinstance(cls, UniqueParabolic):
        period, lam = cls.q, cls.ray.multiplier
    elif isinstance(cls, HyperbolicPair):
        period, lam = cls.q, cls.expanding.multiplier
    if isinstance(cls, Irrational):
        rng = np.random.default_rng([config.seed, row, col])
        steps = config.probe_steps or config.N
        tag = _probe_tag(canon, rng, config.n_probes, steps, config.soft_limit)
    else:
        tag = cls.tag
    return ScanCell(row, col, params, est.value_turns, est.error_bound_turns, tag,
                    period, lam, cls)


def _scan_row(args):
    config, row = args
    return [scan_cell(config, row, col) for col in range(config.width)]


def _open_outputs(config):
    # fail on unwritable paths before any computation
    handles = []
    for path in (config.csv_path, config.ppm_path):
        handles.append(open(path, "wb") if path else None)
    return handles


def scan_grid(config: ScanConfig) -> list:
    """All cells in row-major order (row = second parameter, increasing).

    With ``workers > 1`` rows are farmed out to processes; the collected
    order and every value are the same as a serial run.
    """
    csv_fh, ppm_fh = _open_outputs(config)
    try:
        jobs = [(config, r) for r in range(config.height)]
        if config.workers == 1 or config.height == 1:
            rows = [_scan_row(j) for j in jobs]
        else:
            with ProcessPoolExecutor(max_workers=config.workers) as ex:
                rows = list(ex.map(_scan_row, jobs, chunksize=max(1, config.height // (4 * config.workers))))
        cells = [c for r in rows for c in r]
        if csv_fh:
            csv_fh.write(scan_csv(cells).encode())
        if ppm_fh:
            ppm_fh.write(scan_ppm(cells, config.width, config.height))
    finally:
        for fh in (csv_fh, ppm_fh):
            if fh:
                fh.close()
    return cells


def scan_csv(cells) -> str:
    return "\n".join([SCAN_HEADER] + [c.csv_row() for c in cells]) + "\n"


def scan_ppm(cells, width: int, height: int) -> bytes:
    """Binary P6 raster, one pixel per cell; the top image row is the last grid row."""
    img = np.zeros((height, width, 3), dtype=np.uint8)
    for c in cells:
        img[height - 1 - c.row, c.col] = PALETTE[c.tag]
    return b"P6\n%d %d\n255\n" % (width, height) + img.tobytes()


def rotation_curve(fixed: str, value: float, sweep: tuple, N: int = 10**4,
                   samples: int = 200, theta0: float = 0.0) -> list:
    """(param, rotation, err) along a line with ``fixed`` ("a" or "mu") held at ``value``.

    Fixing a sweeps b; fixing mu sweeps nu.
    """
    if fixed not in ("a", "mu"):
        raise ValueError("fixed must be 'a' or 'mu'")
    if samples < 1:
        raise ValueError("samples must be >= 1")
    rows = []
    for s in axis(sweep[0], sweep[1], samples):
        params = MapParams(value, s) if fixed == "a" else MapParams.from_mu_nu(value, s)
        est = rotation_number(params, theta0, N)
        rows.append((float(s), est.value_turns, est.error_bound_turns))
    return rows


def curve_csv(rows) -> str:
    return "\n".join([CURVE_HEADER] + [",".join(fmt(v) for v in r) for r in rows]) + "\n"


def circle_csv(profile) -> str:
    lines = [CIRCLE_HEADER]
    lines += [f"{fmt(t)},{fmt(r)}" for t, r in zip(profile.angles, profile.radii)]
    return "\n".join(lines) + "\n"


def default_workers() -> int:
    return max(1, os.cpu_count() or 1)
