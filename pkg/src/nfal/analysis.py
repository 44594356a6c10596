"""Aliasing and resolution analysis built on local spatial frequencies.

Everything here reduces to extrema of local frequency components over the
antenna set: the spatial bandwidth (resolution), the maximum matched-product
frequency (aliasing), the aliasing-free region where that maximum stays
below the sampling limit, the antennas attaining it (critical elements), and
the zone where an added antenna cannot extend the bandwidth.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dfield

import numpy as np
from numpy.typing import NDArray
from scipy.spatial import cKDTree

from . import field
from .errors import (
    InvalidArgumentError,
    UnboundedRegionError,
    UnsupportedGeometryError,
)
from .geometry import SINGULARITY_RADIUS, ArrayGeometry, Rect, Scene
from .masks import RegionMask

TWO_PI = 2.0 * np.pi

# Relative slack on closed inequalities and CAE ties (fraction of k).
TIE_TOL = 1e-9
AXIS_ALIGNED = "axis_aligned"
BEAM_ALIGNED = "beam_aligned"

CARTESIAN_AXES = ("x", "y")
POLAR_AXES = ("r", "theta")


def safe_spacing(kind: str, radius: float | None = None) -> float:
    """Spacing bound that guarantees an all-true aliasing-free region.

    ``"cartesian"``: half a wavelength along each lattice axis. ``"circular"``
    (ring of the given radius, sources and test points inside): an angular
    step of half a wavelength over the radius, in radians.
    """
    if kind == "cartesian":
        return 0.5
    if kind == "circular":
        if radius is None or radius <= 0:
            raise InvalidArgumentError("circular bound needs a positive radius")
        return 0.5 / radius
    raise InvalidArgumentError(f"unknown array kind {kind!r}")


# ---------------------------------------------------------------------------
# bandwidth / non-contributive zone


@dataclass(frozen=True)
class BandwidthReport:
    """Per-axis local-frequency extrema of the received field over an array.

    ``resolution`` is ``2*pi / bandwidth`` per axis (infinite when the
    bandwidth vanishes, e.g. a single antenna). ``argmin``/``argmax`` are the
    element indices attaining each bound.
    """

    frame: str
    axis_labels: tuple[str, str]
    k_min: NDArray[np.float64]
    k_max: NDArray[np.float64]
    argmin: NDArray[np.intp]
    argmax: NDArray[np.intp]
    rotation: NDArray[np.float64]

    @property
    def bandwidth(self) -> NDArray[np.float64]:
        return self.k_max - self.k_min

    @property
    def resolution(self) -> NDArray[np.float64]:
        with np.errstate(divide="ignore"):
            return np.where(self.bandwidth > 0, TWO_PI / self.bandwidth, np.inf)

    def same_extrema(self, other: "BandwidthReport") -> bool:
        return bool(
            np.array_equal(self.k_min, other.k_min)
            and np.array_equal(self.k_max, other.k_max)
        )


def _frame_rotation(array: ArrayGeometry, x_src, frame: str) -> NDArray[np.float64]:
    if frame == AXIS_ALIGNED:
        return np.eye(2)
    if frame != BEAM_ALIGNED:
        raise InvalidArgumentError(f"unknown frame {frame!r}")
    beam = np.asarray(x_src, float) - array.centroid
    norm = np.linalg.norm(beam)
    if norm == 0:
        raise InvalidArgumentError("source coincides with the array centroid")
    e1 = beam / norm
    return np.array([e1, [-e1[1], e1[0]]])


def bandwidth(
    array: ArrayGeometry,
    x_src,
    k: float = TWO_PI,
    frame: str = AXIS_ALIGNED,
) -> BandwidthReport:
    """Extrema of the received-field local frequency per axis.

    In the beam-aligned frame, axis 1 points from the array centroid toward
    the source and axis 2 across it.
    """
    rot = _frame_rotation(array, x_src, frame)
    comps = field.k_h(array.elements, np.asarray(x_src, float), k) @ rot.T
    labels = ("parallel", "transverse") if frame == BEAM_ALIGNED else CARTESIAN_AXES
    return BandwidthReport(
        frame,
        labels,
        comps.min(axis=0),
        comps.max(axis=0),
        comps.argmin(axis=0),
        comps.argmax(axis=0),
        rot,
    )


def ncz(
    array: ArrayGeometry,
    x_src,
    probe_region: Rect,
    probe_shape: tuple[int, int],
    k: float = TWO_PI,
    frame: str = AXIS_ALIGNED,
    axis: int | None = None,
) -> RegionMask:
    """Non-contributive zone: probe positions that cannot widen the bandwidth.

    A probe is non-contributive along an axis when its received-field
    frequency component already lies inside the array's ``[k_min, k_max]``
    for that axis. ``axis`` selects one frame axis (0 or 1); ``None``
    intersects both, marking probes that improve resolution in no direction.
    """
    report = bandwidth(array, x_src, k, frame)
    xs, ys = probe_region.cell_centers(probe_shape)
    gx, gy = np.meshgrid(xs, ys, indexing="xy")
    pts = np.stack([gx.ravel(), gy.ravel()], axis=-1)
    x_src = np.asarray(x_src, float)

    d = np.linalg.norm(x_src - pts, axis=-1)
    valid = d > SINGULARITY_RADIUS
    comps = np.full((len(pts), 2), np.nan)
    comps[valid] = (k * (x_src - pts[valid]) / d[valid, None]) @ report.rotation.T

    tol = TIE_TOL * k
    margins = np.minimum(
        report.k_max[None, :] + tol - comps, comps - (report.k_min[None, :] - tol)
    )
    margin = margins[:, axis] if axis is not None else margins.min(axis=1)
    nx, ny = probe_shape
    return RegionMask.from_margin(probe_region, probe_shape, margin.reshape(ny, nx) / k)


def ncz_contains(
    array: ArrayGeometry,
    x_src,
    probes,
    k: float = TWO_PI,
    frame: str = AXIS_ALIGNED,
    axis: int | None = None,
) -> NDArray[np.bool_]:
    """Pointwise non-contributive test for probe positions.

    Exact counterpart of :func:`ncz` without grid quantization: a probe is
    inside when its frequency component cannot extend the array's extrema
    along the requested axis (all axes when ``axis`` is None).
    """
    report = bandwidth(array, x_src, k, frame)
    probes = np.atleast_2d(np.asarray(probes, dtype=float))
    x_src = np.asarray(x_src, dtype=float)
    d = np.linalg.norm(x_src - probes, axis=-1)
    comps = (k * (x_src - probes) / d[:, None]) @ report.rotation.T
    tol = TIE_TOL * k
    inside = (comps <= report.k_max[None, :] + tol) & (
        comps >= report.k_min[None, :] - tol
    )
    return inside[:, axis] if axis is not None else inside.all(axis=1)


# ---------------------------------------------------------------------------
# matched-product frequencies, critical elements, aliasing-free region


def _axis_kind(array: ArrayGeometry, axis: str) -> str:
    if axis in CARTESIAN_AXES:
        return "cartesian"
    if axis in POLAR_AXES:
        return "polar"
    raise InvalidArgumentError(f"unknown axis {axis!r}")


def matched_frequency_components(
    array: ArrayGeometry,
    points: NDArray[np.float64],
    x_src,
    k: float,
    axis: str,
) -> NDArray[np.float64]:
    """``k_g`` component along ``axis`` for every (point, antenna) pair.

    Returns an ``(n_points, n_antennas)`` array; rows for points inside the
    singularity guard of some antenna are NaN. Polar axes are taken about the
    array center.
    """
    points = np.atleast_2d(np.asarray(points, dtype=float))
    x_src = np.asarray(x_src, dtype=float)
    z = array.elements
    diff_p = points[:, None, :] - z[None, :, :]
    d_p = np.linalg.norm(diff_p, axis=-1)
    bad = d_p <= SINGULARITY_RADIUS
    d_p[bad] = np.nan

    if _axis_kind(array, axis) == "cartesian":
        i = 0 if axis == "x" else 1
        d_s = np.linalg.norm(x_src - z, axis=-1)
        u_src = (x_src[i] - z[:, i]) / d_s
        u_pt = diff_p[..., i] / d_p
        comps = k * (u_src[None, :] - u_pt)
    else:
        origin = array.center
        rz = np.linalg.norm(z - origin, axis=-1)
        tz = np.arctan2(z[:, 1] - origin[1], z[:, 0] - origin[0])
        rp = np.linalg.norm(points - origin, axis=-1)
        tp = np.arctan2(points[:, 1] - origin[1], points[:, 0] - origin[0])
        rs = np.linalg.norm(x_src - origin)
        ts = np.arctan2(x_src[1] - origin[1], x_src[0] - origin[0])
        d_s = np.linalg.norm(x_src - z, axis=-1)
        if axis == "r":
            term_p = (rz[None, :] - rp[:, None] * np.cos(tz[None, :] - tp[:, None])) / d_p
            term_s = (rz - rs * np.cos(tz - ts)) / d_s
        else:
            term_p = (rz[None, :] * rp[:, None] * np.sin(tz[None, :] - tp[:, None])) / d_p
            term_s = rz * rs * np.sin(tz - ts) / d_s
        comps = k * (term_p - term_s[None, :])
    return comps


@dataclass(frozen=True)
class CAEEntry:
    """Critical antenna elements for one candidate point and axis."""

    point: NDArray[np.float64]
    axis: str
    value: float
    indices: NDArray[np.intp]


def max_matched_frequency(
    array: ArrayGeometry,
    x_test,
    x_src,
    k: float = TWO_PI,
    axis: str = "x",
) -> tuple[float, CAEEntry]:
    """Maximum matched-frequency magnitude along one axis, with its antennas.

    Antennas within ``1e-9 k`` of the maximum tie into the critical set;
    symmetric scenes legitimately produce co-critical pairs.
    """
    point = np.asarray(x_test, dtype=float)
    comps = matched_frequency_components(array, point[None, :], x_src, k, axis)[0]
    if np.isnan(comps).any():
        raise InvalidArgumentError("test point collides with an antenna")
    mags = np.abs(comps)
    value = float(mags.max())
    ties = np.flatnonzero(mags >= value - TIE_TOL * k)
    return value, CAEEntry(point, axis, value, ties)


def critical_element_table(
    array: ArrayGeometry,
    points: NDArray[np.float64],
    x_src,
    k: float,
    axis: str,
) -> list[CAEEntry]:
    """Critical sets for many candidate points along one axis."""
    points = np.atleast_2d(np.asarray(points, dtype=float))
    comps = matched_frequency_components(array, points, x_src, k, axis)
    mags = np.abs(comps)
    out = []
    for p, row in zip(points, mags):
        value = float(np.nanmax(row))
        ties = np.flatnonzero(row >= value - TIE_TOL * k)
        out.append(CAEEntry(p, axis, value, ties))
    return out


def afr_axes(array: ArrayGeometry) -> list[str]:
    """Axes along which the array declares a uniform spacing."""
    order = CARTESIAN_AXES if array.coord_system == "cartesian" else POLAR_AXES
    return [a for a in order if a in array.spacings]


@dataclass
class AliasingFreeRegion:
    """AFR mask plus the per-axis sampling bounds that produced it."""

    mask: RegionMask
    bounds: dict[str, float]
    axes: list[str]


def afr(
    array: ArrayGeometry,
    scene: Scene,
    axes: list[str] | None = None,
    chunk: int = 4096,
) -> AliasingFreeRegion:
    """Aliasing-free region of the scene for the given array.

    A cell is aliasing-free when, for every requested axis, the maximum
    matched-frequency magnitude over the array stays at or below ``2*pi``
    over that axis' spacing. The stored margin is the worst relative
    clearance, so the zero level set is the AFR boundary.
    """
    axes = list(axes) if axes is not None else afr_axes(array)
    if not axes:
        raise UnsupportedGeometryError(
            "array declares no uniformly sampled axis; aliasing bounds undefined"
        )
    for a in axes:
        if a not in array.spacings:
            raise UnsupportedGeometryError(f"array has no uniform spacing along {a!r}")
        _axis_kind(array, a)

    scene.validate_against(array)
    k = scene.k
    pts_xs, pts_ys = scene.region.cell_centers(scene.grid_shape)
    gx, gy = np.meshgrid(pts_xs, pts_ys, indexing="xy")
    pts = np.stack([gx.ravel(), gy.ravel()], axis=-1)

    bounds = {a: TWO_PI / array.spacings[a] for a in axes}
    margin = np.full(len(pts), np.inf)
    for a in axes:
        bound = bounds[a]
        for i in range(0, len(pts), chunk):
            comps = matched_frequency_components(
                array, pts[i : i + chunk], scene.source, k, a
            )
            K = np.abs(comps).max(axis=1)
            rel = (bound - K) / bound
            margin[i : i + chunk] = np.minimum(margin[i : i + chunk], rel)

    nx, ny = scene.grid_shape
    mask = RegionMask.from_margin(
        scene.region, scene.grid_shape, margin.reshape(ny, nx), tol=TIE_TOL
    )
    return AliasingFreeRegion(mask, bounds, axes)


# ---------------------------------------------------------------------------
# resolution region


def resolution_region(
    array: ArrayGeometry,
    x_src,
    k: float = TWO_PI,
    region: Rect | None = None,
    shape: tuple[int, int] = (256, 256),
    frame: str = BEAM_ALIGNED,
) -> RegionMask:
    """Resolution cell: the box of half-width ``resolution / 2`` per axis.

    Axes follow the requested frame (beam-aligned by default, matching how
    the resolution of off-axis and circular layouts is read). Raises when
    some axis has zero bandwidth, which would make the box unbounded.
    """
    report = bandwidth(array, x_src, k, frame)
    if np.any(report.bandwidth <= 0):
        raise UnboundedRegionError("zero bandwidth along some axis")
    half = report.resolution / 2.0
    x_src = np.asarray(x_src, float)
    if region is None:
        pad = 4.0 * float(half.max())
        region = Rect(
            x_src[0] - pad, x_src[0] + pad, x_src[1] - pad, x_src[1] + pad
        )
    xs, ys = region.cell_centers(shape)
    gx, gy = np.meshgrid(xs, ys, indexing="xy")
    rel = np.stack([gx.ravel(), gy.ravel()], axis=-1) - x_src
    local = rel @ report.rotation.T
    margin = np.min(1.0 - np.abs(local) / half[None, :], axis=1)
    nx, ny = shape
    return RegionMask.from_margin(region, shape, margin.reshape(ny, nx))


def resolution_box_corners(
    array: ArrayGeometry, x_src, k: float = TWO_PI, frame: str = BEAM_ALIGNED
) -> NDArray[np.float64]:
    """Corners of the resolution box in scene coordinates (closed loop)."""
    report = bandwidth(array, x_src, k, frame)
    if np.any(report.bandwidth <= 0):
        raise UnboundedRegionError("zero bandwidth along some axis")
    h1, h2 = report.resolution / 2.0
    corners = np.array(
        [[h1, h2], [-h1, h2], [-h1, -h2], [h1, -h2], [h1, h2]]
    )
    return np.asarray(x_src, float) + corners @ report.rotation


# ---------------------------------------------------------------------------
# proposition checkers


def _require_matching_spacings(a: ArrayGeometry, b: ArrayGeometry, axes) -> None:
    for ax in axes:
        sa, sb = a.spacings.get(ax), b.spacings.get(ax)
        if sa is None or sb is None or abs(sa - sb) > 1e-9:
            raise InvalidArgumentError(f"arrays disagree on spacing along {ax!r}")


def _require_subset(small: ArrayGeometry, big: ArrayGeometry) -> None:
    if not small.is_subset_of(big):
        raise InvalidArgumentError("expected an element-wise subset relation")


@dataclass(frozen=True)
class InclusionReport:
    """Cell-wise verification that adding antennas never grows the AFR."""

    holds: bool
    violating_cells: int
    total_cells: int


def check_inclusion(
    small: ArrayGeometry, big: ArrayGeometry, scene: Scene, axes=None
) -> InclusionReport:
    """Verify AFR(big) is contained in AFR(small) for nested arrays."""
    axes = list(axes) if axes is not None else afr_axes(small)
    _require_matching_spacings(small, big, axes)
    _require_subset(small, big)
    m_small = afr(small, scene, axes).mask
    m_big = afr(big, scene, axes).mask
    violations = m_big.bits & ~m_small.bits
    return InclusionReport(not violations.any(), int(violations.sum()), m_small.bits.size)


@dataclass(frozen=True)
class ChangeReport:
    """CAE-based prediction vs direct AFR comparison for an array change."""

    predicted: str
    direct: str
    consistent: bool
    boundary_cells: int
    unsupported_points: list[NDArray[np.float64]] = dfield(default_factory=list)


def _direct_verdict(base: RegionMask, other: RegionMask, grown_label: str) -> str:
    if not (base.bits ^ other.bits).any():
        return "equal"
    return grown_label if base.differs_beyond_one_cell(other) else "equal"


def check_removal(
    full: ArrayGeometry, sub: ArrayGeometry, scene: Scene, axes=None
) -> ChangeReport:
    """Does removing antennas (full -> sub) preserve the AFR?

    Predicted from critical elements: if every boundary cell of the full
    array's AFR keeps at least one of its critical antennas in the reduced
    set, for every axis, the AFR cannot change; otherwise it strictly grows.
    Cross-checked against directly computed regions.
    """
    axes = list(axes) if axes is not None else afr_axes(full)
    _require_matching_spacings(full, sub, axes)
    _require_subset(sub, full)

    region_full = afr(full, scene, axes)
    pts = region_full.mask.boundary_cell_points()
    tree = cKDTree(sub.elements)
    unsupported = []
    for ax in axes:
        for entry in critical_element_table(full, pts, scene.source, scene.k, ax):
            dist, _ = tree.query(full.elements[entry.indices], k=1)
            if not np.any(dist <= 1e-9):
                unsupported.append(entry.point)
    predicted = "equal" if not unsupported else "strictly_larger"

    region_sub = afr(sub, scene, axes)
    direct = _direct_verdict(region_full.mask, region_sub.mask, "strictly_larger")
    return ChangeReport(
        predicted, direct, predicted == direct, len(pts), unsupported
    )


def check_addition(
    small: ArrayGeometry, big: ArrayGeometry, scene: Scene, axes=None
) -> ChangeReport:
    """Does adding antennas (small -> big) preserve the AFR?

    Predicted from critical elements: the AFR is preserved exactly when, at
    every boundary cell of the small array's AFR and every axis, the two
    arrays share a critical antenna; otherwise it strictly shrinks.
    """
    axes = list(axes) if axes is not None else afr_axes(small)
    _require_matching_spacings(small, big, axes)
    _require_subset(small, big)

    region_small = afr(small, scene, axes)
    pts = region_small.mask.boundary_cell_points()
    unsupported = []
    for ax in axes:
        table_small = critical_element_table(small, pts, scene.source, scene.k, ax)
        table_big = critical_element_table(big, pts, scene.source, scene.k, ax)
        for e_small, e_big in zip(table_small, table_big):
            pos_small = small.elements[e_small.indices]
            pos_big = big.elements[e_big.indices]
            d = np.linalg.norm(pos_small[:, None, :] - pos_big[None, :, :], axis=-1)
            if not (d <= 1e-9).any():
                unsupported.append(e_small.point)
    predicted = "equal" if not unsupported else "strictly_smaller"

    region_big = afr(big, scene, axes)
    direct = _direct_verdict(region_small.mask, region_big.mask, "strictly_smaller")
    return ChangeReport(
        predicted, direct, predicted == direct, len(pts), unsupported
    )
