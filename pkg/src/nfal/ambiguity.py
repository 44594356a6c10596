"""Discrete ambiguity function over candidate grids, with peak measurement.

The ambiguity function at a tentative point is the sum over antennas of the
matched product between the received field and the field a source at that
point would produce. Its peak sharpness measures resolution; spurious peaks
reveal spatial aliasing.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np
from numpy.typing import NDArray

from . import field
from .errors import BorderPeakError, InvalidArgumentError
from .geometry import SINGULARITY_RADIUS, ArrayGeometry, Rect, Scene

DB_FLOOR = -60.0
# Cells per evaluation chunk; fixed so results do not depend on worker count.
CHUNK_CELLS = 8192


@dataclass
class ScalarFieldGrid:
    """Complex field values at the cell centers of a scene region.

    ``values[iy, ix]`` is stored complex so callers can renormalize or read
    phase; cells that collide with an antenna hold NaN and are excluded from
    peak search and exports.
    """

    region: Rect
    shape: tuple[int, int]
    values: NDArray[np.complex128]
    source: NDArray[np.float64] | None = None

    def x_centers(self) -> NDArray[np.float64]:
        return self.region.cell_centers(self.shape)[0]

    def y_centers(self) -> NDArray[np.float64]:
        return self.region.cell_centers(self.shape)[1]

    def magnitude(self) -> NDArray[np.float64]:
        return np.abs(self.values)

    def db(self, floor: float = DB_FLOOR) -> NDArray[np.float64]:
        """Peak-normalized magnitude in dB, clamped at ``floor``.

        Invalid cells map to the floor.
        """
        mag = self.magnitude()
        peak = np.nanmax(mag)
        if not peak > 0:
            raise InvalidArgumentError("grid has no positive magnitude")
        with np.errstate(divide="ignore", invalid="ignore"):
            d = 20.0 * np.log10(mag / peak)
        return np.nan_to_num(np.maximum(d, floor), nan=floor)

    def valid(self) -> NDArray[np.bool_]:
        return np.isfinite(self.values.real)


def _grid_points(region: Rect, shape: tuple[int, int]) -> NDArray[np.float64]:
    xs, ys = region.cell_centers(shape)
    gx, gy = np.meshgrid(xs, ys, indexing="xy")
    return np.stack([gx.ravel(), gy.ravel()], axis=-1)


def _af_chunk(
    points: NDArray[np.float64],
    elements: NDArray[np.float64],
    source_field: NDArray[np.complex128],
    k: float,
) -> NDArray[np.complex128]:
    diff = points[:, None, :] - elements[None, :, :]
    d = np.linalg.norm(diff, axis=-1)
    bad = (d <= SINGULARITY_RADIUS).any(axis=1)
    d[d <= SINGULARITY_RADIUS] = 1.0  # placeholder; rows flagged below
    vals = (np.exp(1j * k * d) / d) @ source_field
    vals[bad] = np.nan + 1j * np.nan
    return vals


def evaluate_af(
    array: ArrayGeometry, scene: Scene, workers: int = 1
) -> ScalarFieldGrid:
    """Ambiguity function of ``scene.source`` sampled on the scene grid.

    Deterministic for a fixed chunk size: chunk boundaries do not depend on
    ``workers``, each chunk is reduced by the same BLAS product, and chunks
    are written back by index.
    """
    if len(array) == 0:
        raise InvalidArgumentError("array must not be empty")
    scene.validate_against(array)
    k = scene.k
    pts = _grid_points(scene.region, scene.grid_shape)
    src = field.channel(array.elements, scene.source, k)

    chunks = [
        (i, pts[i : i + CHUNK_CELLS]) for i in range(0, len(pts), CHUNK_CELLS)
    ]
    out = np.empty(len(pts), dtype=complex)
    if workers <= 1:
        for i, blk in chunks:
            out[i : i + len(blk)] = _af_chunk(blk, array.elements, src, k)
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = pool.map(
                lambda ib: (ib[0], _af_chunk(ib[1], array.elements, src, k)), chunks
            )
            for i, vals in results:
                out[i : i + len(vals)] = vals
    nx, ny = scene.grid_shape
    return ScalarFieldGrid(scene.region, scene.grid_shape, out.reshape(ny, nx), scene.source.copy())


@dataclass(frozen=True)
class PeakReport:
    """Sub-cell peak location, interpolated magnitude, and per-axis FWHM."""

    location: NDArray[np.float64]
    value: float
    fwhm_x: float
    fwhm_y: float


def _parabolic_offset(fm: float, f0: float, fp: float) -> tuple[float, float]:
    denom = fm - 2.0 * f0 + fp
    if denom >= 0:
        return 0.0, f0
    off = 0.5 * (fm - fp) / denom
    off = float(np.clip(off, -0.5, 0.5))
    peak = f0 - 0.25 * (fm - fp) * off
    return off, peak


def _half_crossing(profile, coords, i_peak, half, direction):
    i = i_peak
    while 0 <= i + direction < len(profile):
        j = i + direction
        if np.isnan(profile[j]):
            raise BorderPeakError("invalid cell before the half-power crossing")
        if profile[j] < half:
            f0, f1 = profile[i], profile[j]
            t = (f0 - half) / (f0 - f1)
            return coords[i] + t * (coords[j] - coords[i])
        i = j
    raise BorderPeakError("profile never falls to half maximum inside the region")


def measure_peak(grid: ScalarFieldGrid, near=None) -> PeakReport:
    """Locate the magnitude peak and measure its full width at half maximum.

    Starting from the cell nearest ``near`` (grid maximum when omitted), the
    search hill-climbs to a local maximum, refines the peak by per-axis
    parabolic interpolation, and measures the 50%-of-peak crossings of the
    axis-parallel profiles through the peak cell.
    """
    mag = grid.magnitude()
    nx, ny = grid.shape
    xs, ys = grid.region.cell_centers(grid.shape)

    if near is None:
        iy, ix = np.unravel_index(np.nanargmax(mag), mag.shape)
    else:
        near = np.asarray(near, dtype=float)
        ix = int(np.argmin(np.abs(xs - near[0])))
        iy = int(np.argmin(np.abs(ys - near[1])))
        while True:
            y0, y1 = max(iy - 1, 0), min(iy + 2, ny)
            x0, x1 = max(ix - 1, 0), min(ix + 2, nx)
            window = mag[y0:y1, x0:x1]
            jy, jx = np.unravel_index(np.nanargmax(window), window.shape)
            jy, jx = jy + y0, jx + x0
            if (jy, jx) == (iy, ix):
                break
            iy, ix = jy, jx

    if ix in (0, nx - 1) or iy in (0, ny - 1):
        raise BorderPeakError("peak sits on the region border")
    row = mag[iy, :]
    col = mag[:, ix]
    if np.isnan(row[ix - 1 : ix + 2]).any() or np.isnan(col[iy - 1 : iy + 2]).any():
        raise BorderPeakError("peak neighborhood contains invalid cells")

    dx, dy = grid.region.cell_size(grid.shape)
    offx, px = _parabolic_offset(row[ix - 1], row[ix], row[ix + 1])
    offy, py = _parabolic_offset(col[iy - 1], col[iy], col[iy + 1])
    value = max(px, py)
    loc = np.array([xs[ix] + offx * dx, ys[iy] + offy * dy])

    half = 0.5 * value
    right = _half_crossing(row, xs, ix, half, +1)
    left = _half_crossing(row, xs, ix, half, -1)
    top = _half_crossing(col, ys, iy, half, +1)
    bottom = _half_crossing(col, ys, iy, half, -1)
    return PeakReport(loc, float(value), float(right - left), float(top - bottom))
