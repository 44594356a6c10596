"""Boolean region masks over scene grids, with extracted boundary polylines.

A mask is built from a signed margin field (positive inside); the boundary is
the zero level set traced by marching squares with linear interpolation, so
boundary points sit at sub-cell accuracy where the margin data supports it.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from numpy.typing import NDArray
from skimage import measure

from .errors import InvalidArgumentError
from .geometry import Rect


@dataclass
class RegionMask:
    """Boolean grid plus boundary polylines in scene coordinates.

    ``bits[iy, ix]`` refers to the cell centered at
    ``(xmin + (ix + 0.5) dx, ymin + (iy + 0.5) dy)``. ``margin`` is the signed
    field the mask was thresholded from (NaN marks invalid cells, counted as
    outside), kept so boundaries interpolate below cell resolution.
    """

    region: Rect
    shape: tuple[int, int]
    bits: NDArray[np.bool_]
    margin: NDArray[np.float64] | None = None
    boundary: list[NDArray[np.float64]] = field(default_factory=list)

    def __post_init__(self):
        nx, ny = self.shape
        if self.bits.shape != (ny, nx):
            raise InvalidArgumentError("bits shape must be (ny, nx)")

    @classmethod
    def from_margin(
        cls,
        region: Rect,
        shape: tuple[int, int],
        margin: NDArray[np.float64],
        tol: float = 0.0,
    ) -> "RegionMask":
        """Threshold a signed margin field at ``-tol`` and trace its zero set."""
        margin = np.asarray(margin, dtype=float)
        bits = np.where(np.isnan(margin), False, margin >= -tol)
        mask = cls(region, shape, bits, margin=margin)
        mask.boundary = mask._trace_boundary()
        return mask

    def _trace_boundary(self) -> list[NDArray[np.float64]]:
        if self.margin is None:
            level_field = self.bits.astype(float)
            level = 0.5
        else:
            level_field = np.where(np.isfinite(self.margin), self.margin, -1e30)
            level = 0.0
        if not (level_field.max() > level > level_field.min()):
            return []
        nx, ny = self.shape
        dx, dy = self.region.cell_size(self.shape)
        polylines = []
        for contour in measure.find_contours(level_field, level):
            # contour rows are (row=iy, col=ix) in cell-index space
            xs = self.region.xmin + (contour[:, 1] + 0.5) * dx
            ys = self.region.ymin + (contour[:, 0] + 0.5) * dy
            polylines.append(np.column_stack([xs, ys]))
        return polylines

    @property
    def cell_area(self) -> float:
        dx, dy = self.region.cell_size(self.shape)
        return dx * dy

    def area(self) -> float:
        """Total true area, cells times cell area."""
        return float(self.bits.sum()) * self.cell_area

    def cell_centers(self) -> tuple[NDArray[np.float64], NDArray[np.float64]]:
        return self.region.cell_centers(self.shape)

    def cell_index(self, points) -> tuple[NDArray[np.intp], NDArray[np.intp]]:
        """Clamped (ix, iy) cell indices containing each query point."""
        p = np.atleast_2d(np.asarray(points, dtype=float))
        nx, ny = self.shape
        dx, dy = self.region.cell_size(self.shape)
        ix = np.clip(((p[:, 0] - self.region.xmin) / dx).astype(int), 0, nx - 1)
        iy = np.clip(((p[:, 1] - self.region.ymin) / dy).astype(int), 0, ny - 1)
        return ix, iy

    def contains(self, points) -> NDArray[np.bool_]:
        ix, iy = self.cell_index(points)
        return self.bits[iy, ix]

    def boundary_cells(self) -> NDArray[np.intp]:
        """Indices ``(iy, ix)`` of true cells with at least one false 4-neighbor.

        The discrete stand-in for the region boundary: predictions that
        quantify over boundary points are evaluated at these cell centers.
        """
        b = self.bits
        padded = np.pad(b, 1, constant_values=False)
        neigh_all_true = (
            padded[:-2, 1:-1] & padded[2:, 1:-1] & padded[1:-1, :-2] & padded[1:-1, 2:]
        )
        edge = b & ~neigh_all_true
        return np.argwhere(edge)

    def boundary_cell_points(self) -> NDArray[np.float64]:
        """Scene coordinates of the boundary cell centers."""
        idx = self.boundary_cells()
        xs, ys = self.cell_centers()
        return np.column_stack([xs[idx[:, 1]], ys[idx[:, 0]]])

    def differs_beyond_one_cell(self, other: "RegionMask") -> bool:
        """True when the two masks disagree somewhere farther than one cell
        from this mask's bit boundary (the quantization slack used by the
        region-comparison checks)."""
        if self.shape != other.shape:
            raise InvalidArgumentError("masks must share a grid")
        diff = self.bits ^ other.bits
        if not diff.any():
            return False
        near = _dilate(_edge_cells(self.bits), 1)
        return bool((diff & ~near).any())


def _edge_cells(bits: NDArray[np.bool_]) -> NDArray[np.bool_]:
    padded = np.pad(bits, 1, constant_values=False)
    interior = (
        padded[:-2, 1:-1] & padded[2:, 1:-1] & padded[1:-1, :-2] & padded[1:-1, 2:]
    )
    pad_out = np.pad(~bits, 1, constant_values=True)
    ext_interior = (
        pad_out[:-2, 1:-1] & pad_out[2:, 1:-1] & pad_out[1:-1, :-2] & pad_out[1:-1, 2:]
    )
    return (bits & ~interior) | (~bits & ~ext_interior)


def _dilate(bits: NDArray[np.bool_], steps: int) -> NDArray[np.bool_]:
    out = bits.copy()
    for _ in range(steps):
        p = np.pad(out, 1, constant_values=False)
        out = (
            p[1:-1, 1:-1]
            | p[:-2, 1:-1]
            | p[2:, 1:-1]
            | p[1:-1, :-2]
            | p[1:-1, 2:]
            | p[:-2, :-2]
            | p[:-2, 2:]
            | p[2:, :-2]
            | p[2:, 2:]
        )
    return out


def polyline_nearest_distance(
    polylines: Sequence[NDArray[np.float64]], points: NDArray[np.float64]
) -> NDArray[np.float64]:
    """Distance from each point to the nearest vertex of any polyline."""
    if not polylines:
        return np.full(len(np.atleast_2d(points)), np.inf)
    verts = np.vstack(polylines)
    p = np.atleast_2d(np.asarray(points, dtype=float))
    d = np.linalg.norm(p[:, None, :] - verts[None, :, :], axis=-1)
    return d.min(axis=1)
