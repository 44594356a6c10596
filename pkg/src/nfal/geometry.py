"""Antenna array construction and coordinate handling.

All lengths are expressed in wavelengths, so the wavenumber is ``2*pi`` unless
a scene declares a different wavelength unit. Arrays are planar point sets;
uniform builders record the per-axis spacing that the aliasing conditions
consume. Angular spacings are in radians.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping

import numpy as np
from numpy.typing import ArrayLike, NDArray
from scipy.spatial import cKDTree

from .errors import InvalidArgumentError

# Two antennas closer than this are considered coincident.
DUPLICATE_TOL = 1e-9
# Field evaluations closer than this to an antenna raise SingularityError.
SINGULARITY_RADIUS = 1e-6

CARTESIAN = "cartesian"
POLAR = "polar"


def to_polar(p: ArrayLike) -> tuple[NDArray[np.float64], NDArray[np.float64]]:
    """Cartesian ``(x, y)`` to ``(r, theta)`` with ``theta = atan2(y, x)``.

    Works on a single 2-vector or an ``(..., 2)`` stack. The origin maps to
    ``(0, 0)`` by convention.
    """
    p = np.asarray(p, dtype=float)
    r = np.hypot(p[..., 0], p[..., 1])
    theta = np.arctan2(p[..., 1], p[..., 0])
    return r, theta


def from_polar(r: ArrayLike, theta: ArrayLike) -> NDArray[np.float64]:
    """Inverse of :func:`to_polar`; returns an ``(..., 2)`` stack."""
    r = np.asarray(r, dtype=float)
    theta = np.asarray(theta, dtype=float)
    return np.stack((r * np.cos(theta), r * np.sin(theta)), axis=-1)


def _check_no_duplicates(elements: NDArray[np.float64]) -> None:
    if len(elements) < 2:
        return
    tree = cKDTree(elements)
    pairs = tree.query_pairs(r=DUPLICATE_TOL)
    if pairs:
        i, j = sorted(pairs)[0]
        raise InvalidArgumentError(
            f"antennas {i} and {j} coincide within {DUPLICATE_TOL} wavelengths"
        )


@dataclass(frozen=True)
class ArrayGeometry:
    """An ordered set of antenna positions plus sampling metadata.

    Attributes
    ----------
    elements : (N, 2) float array
        Antenna coordinates in wavelengths.
    coord_system : str
        ``"cartesian"`` or ``"polar"``. Polar-tagged arrays interpret their
        sampling axes as ``(r, theta)`` about ``center``.
    spacings : dict
        Per-axis inter-element spacing: ``{"x": dx, "y": dy}`` in wavelengths
        for cartesian lattices, ``{"theta": dt[, "r": dr]}`` (radians /
        wavelengths) for rings. Only axes that are uniformly sampled appear;
        aliasing tests refuse axes that are absent.
    extents : dict
        Aperture extent per axis (max minus min coordinate along the axis).
    center : (2,) float array
        Reference point; the polar origin for polar-tagged arrays.
    """

    elements: NDArray[np.float64]
    coord_system: str = CARTESIAN
    spacings: Mapping[str, float] = field(default_factory=dict)
    extents: Mapping[str, float] = field(default_factory=dict)
    center: NDArray[np.float64] = field(default_factory=lambda: np.zeros(2))

    def __post_init__(self):
        elements = np.ascontiguousarray(np.asarray(self.elements, dtype=float))
        if elements.ndim != 2 or elements.shape[1] != 2:
            raise InvalidArgumentError("elements must be an (N, 2) array")
        if len(elements) == 0:
            raise InvalidArgumentError("array must contain at least one antenna")
        if not np.all(np.isfinite(elements)):
            raise InvalidArgumentError("antenna coordinates must be finite")
        for s in self.spacings.values():
            if not s > 0:
                raise InvalidArgumentError("spacings must be strictly positive")
        _check_no_duplicates(elements)
        object.__setattr__(self, "elements", elements)
        object.__setattr__(self, "spacings", dict(self.spacings))
        object.__setattr__(self, "extents", dict(self.extents))
        object.__setattr__(self, "center", np.asarray(self.center, dtype=float))

    def __len__(self) -> int:
        return len(self.elements)

    @property
    def centroid(self) -> NDArray[np.float64]:
        return self.elements.mean(axis=0)

    def polar_elements(self) -> tuple[NDArray[np.float64], NDArray[np.float64]]:
        """Element coordinates as ``(r, theta)`` about the array center."""
        return to_polar(self.elements - self.center)

    def subset(self, indices: Iterable[int]) -> "ArrayGeometry":
        """New geometry keeping ``indices`` (order preserved), same metadata."""
        idx = np.asarray(list(indices), dtype=int)
        return ArrayGeometry(
            self.elements[idx],
            coord_system=self.coord_system,
            spacings=dict(self.spacings),
            extents=dict(self.extents),
            center=self.center.copy(),
        )

    def is_subset_of(self, other: "ArrayGeometry", tol: float = DUPLICATE_TOL) -> bool:
        """True when every element of self appears in ``other`` within ``tol``."""
        tree = cKDTree(other.elements)
        dist, _ = tree.query(self.elements, k=1)
        return bool(np.all(dist <= tol))

    def min_distance_to(self, points: ArrayLike) -> NDArray[np.float64]:
        """Distance from each query point to the nearest antenna."""
        points = np.atleast_2d(np.asarray(points, dtype=float))
        tree = cKDTree(self.elements)
        dist, _ = tree.query(points, k=1)
        return dist


def from_points(points: ArrayLike, coord_system: str = CARTESIAN) -> ArrayGeometry:
    """Wrap a raw point set without any spacing metadata.

    Aliasing-region operations reject such arrays because the sampling
    conditions presume uniform spacing; field and bandwidth operations
    accept them.
    """
    return ArrayGeometry(np.asarray(points, dtype=float), coord_system=coord_system)


def _uniform_extent(values: NDArray[np.float64]) -> float:
    return float(values.max() - values.min()) if len(values) else 0.0


def build_linear(
    n: int,
    aperture: float,
    center: ArrayLike = (0.0, 0.0),
    axis: ArrayLike = (1.0, 0.0),
) -> ArrayGeometry:
    """Uniform linear array of ``n`` elements spanning ``aperture``.

    Elements include both endpoints, so the spacing is ``aperture / (n - 1)``.
    The spacing is recorded under ``"x"`` or ``"y"`` when the axis is aligned
    with that coordinate; oblique arrays carry no per-axis spacing and are
    rejected by aliasing-region operations.
    """
    if n < 1:
        raise InvalidArgumentError("n must be >= 1")
    if aperture < 0:
        raise InvalidArgumentError("aperture must be >= 0")
    if n == 1 and aperture > 0:
        raise InvalidArgumentError("a single element cannot span a positive aperture")
    if n > 1 and aperture == 0:
        raise InvalidArgumentError("aperture 0 requires n = 1")
    axis = np.asarray(axis, dtype=float)
    norm = np.linalg.norm(axis)
    if norm == 0:
        raise InvalidArgumentError("axis must be a nonzero vector")
    axis = axis / norm
    center = np.asarray(center, dtype=float)
    offsets = (np.arange(n) - (n - 1) / 2.0) * (aperture / (n - 1) if n > 1 else 0.0)
    elements = center + offsets[:, None] * axis

    spacings: dict[str, float] = {}
    extents: dict[str, float] = {}
    if n > 1:
        delta = aperture / (n - 1)
        if abs(axis[1]) < 1e-12:
            spacings["x"] = delta
            extents["x"] = aperture
        elif abs(axis[0]) < 1e-12:
            spacings["y"] = delta
            extents["y"] = aperture
    return ArrayGeometry(elements, CARTESIAN, spacings, extents, center)


def build_rectangular(
    nx: int,
    ny: int,
    Dx: float,
    Dy: float,
    center: ArrayLike = (0.0, 0.0),
) -> ArrayGeometry:
    """Row-major ``nx x ny`` lattice spanning ``Dx`` by ``Dy``.

    Spacings are ``D / (n - 1)`` per axis; a degenerate axis (``n = 1``)
    records no spacing along that axis.
    """
    if nx < 1 or ny < 1:
        raise InvalidArgumentError("element counts must be >= 1")
    if (nx == 1 and Dx != 0) or (ny == 1 and Dy != 0):
        raise InvalidArgumentError("a single-element axis must have zero extent")
    if (nx > 1 and Dx <= 0) or (ny > 1 and Dy <= 0):
        raise InvalidArgumentError("multi-element axes need positive extent")
    center = np.asarray(center, dtype=float)
    xs = (np.arange(nx) - (nx - 1) / 2.0) * (Dx / (nx - 1) if nx > 1 else 0.0)
    ys = (np.arange(ny) - (ny - 1) / 2.0) * (Dy / (ny - 1) if ny > 1 else 0.0)
    gx, gy = np.meshgrid(xs, ys, indexing="xy")
    elements = np.column_stack((gx.ravel(), gy.ravel())) + center

    spacings: dict[str, float] = {}
    extents: dict[str, float] = {}
    if nx > 1:
        spacings["x"] = Dx / (nx - 1)
        extents["x"] = Dx
    if ny > 1:
        spacings["y"] = Dy / (ny - 1)
        extents["y"] = Dy
    return ArrayGeometry(elements, CARTESIAN, spacings, extents, center)


def build_circular(
    n_theta: int,
    arc: float,
    radius: float,
    center: ArrayLike = (0.0, 0.0),
    start_angle: float = 0.0,
) -> ArrayGeometry:
    """Single ring of ``n_theta`` elements over ``arc`` radians.

    Full circles (``arc == 2*pi``) use ``d_theta = arc / n`` so the endpoint
    is not duplicated; partial arcs include both endpoints with
    ``d_theta = arc / (n - 1)``.
    """
    if n_theta < 1:
        raise InvalidArgumentError("n_theta must be >= 1")
    if radius <= 0:
        raise InvalidArgumentError("radius must be positive")
    if not 0 < arc <= 2 * np.pi + 1e-12:
        raise InvalidArgumentError("arc must lie in (0, 2*pi]")
    center = np.asarray(center, dtype=float)
    full = abs(arc - 2 * np.pi) <= 1e-12
    if n_theta == 1:
        dtheta = 0.0
        angles = np.array([start_angle])
    elif full:
        dtheta = 2 * np.pi / n_theta
        angles = start_angle + dtheta * np.arange(n_theta)
    else:
        dtheta = arc / (n_theta - 1)
        angles = start_angle + dtheta * np.arange(n_theta)
    elements = center + radius * np.column_stack((np.cos(angles), np.sin(angles)))

    spacings: dict[str, float] = {}
    extents: dict[str, float] = {"theta": 2 * np.pi if full else arc, "r": 0.0}
    if n_theta > 1:
        spacings["theta"] = dtheta
    return ArrayGeometry(elements, POLAR, spacings, extents, center)


def build_concentric(
    n_theta: int,
    arc: float,
    radii: Iterable[float],
    center: ArrayLike = (0.0, 0.0),
    start_angle: float = 0.0,
) -> ArrayGeometry:
    """Concentric rings, ring-major, sharing the angular layout per radius.

    Radii must be strictly increasing and (for more than two rings) uniformly
    stepped, since the radial aliasing condition presumes a single spacing.
    """
    radii = np.asarray(list(radii), dtype=float)
    if len(radii) == 0:
        raise InvalidArgumentError("radii must be nonempty")
    if np.any(radii <= 0):
        raise InvalidArgumentError("radii must be positive")
    if len(radii) > 1:
        steps = np.diff(radii)
        if np.any(steps <= 0):
            raise InvalidArgumentError("radii must be strictly increasing")
        if len(radii) > 2 and np.any(np.abs(steps - steps[0]) > 1e-9):
            raise InvalidArgumentError("radial steps must be uniform")
    rings = [
        build_circular(n_theta, arc, r, center=center, start_angle=start_angle)
        for r in radii
    ]
    elements = np.vstack([ring.elements for ring in rings])
    spacings = dict(rings[0].spacings)
    extents = dict(rings[0].extents)
    extents["r"] = float(radii[-1] - radii[0])
    if len(radii) > 1:
        spacings["r"] = float(radii[1] - radii[0])
    return ArrayGeometry(elements, POLAR, spacings, extents, np.asarray(center, float))


@dataclass(frozen=True)
class Rect:
    """Axis-aligned rectangle ``[xmin, xmax] x [ymin, ymax]`` in wavelengths."""

    xmin: float
    xmax: float
    ymin: float
    ymax: float

    def __post_init__(self):
        if not (self.xmax > self.xmin and self.ymax > self.ymin):
            raise InvalidArgumentError("region must have positive area")

    @property
    def width(self) -> float:
        return self.xmax - self.xmin

    @property
    def height(self) -> float:
        return self.ymax - self.ymin

    def cell_size(self, shape: tuple[int, int]) -> tuple[float, float]:
        nx, ny = shape
        return self.width / nx, self.height / ny

    def cell_centers(
        self, shape: tuple[int, int]
    ) -> tuple[NDArray[np.float64], NDArray[np.float64]]:
        """1-D center coordinates ``(xs, ys)`` for an ``nx x ny`` cell grid."""
        nx, ny = shape
        dx, dy = self.cell_size(shape)
        xs = self.xmin + dx * (np.arange(nx) + 0.5)
        ys = self.ymin + dy * (np.arange(ny) + 0.5)
        return xs, ys

    def contains(self, points: ArrayLike) -> NDArray[np.bool_]:
        p = np.atleast_2d(np.asarray(points, dtype=float))
        return (
            (p[:, 0] >= self.xmin)
            & (p[:, 0] <= self.xmax)
            & (p[:, 1] >= self.ymin)
            & (p[:, 1] <= self.ymax)
        )

    @staticmethod
    def from_any(obj) -> "Rect":
        if isinstance(obj, Rect):
            return obj
        vals = [float(v) for v in obj]
        if len(vals) != 4:
            raise InvalidArgumentError("region must be [xmin, xmax, ymin, ymax]")
        return Rect(*vals)


@dataclass(frozen=True)
class Scene:
    """A localisation scene: wavelength, true source, and candidate region.

    ``wavelength`` sets the wavenumber ``k = 2*pi / wavelength``; with
    coordinates in wavelengths it is 1 and ``k = 2*pi``.
    """

    source: NDArray[np.float64]
    region: Rect
    grid_shape: tuple[int, int] = (512, 512)
    wavelength: float = 1.0

    def __post_init__(self):
        if self.wavelength <= 0:
            raise InvalidArgumentError("wavelength must be positive")
        nx, ny = self.grid_shape
        if nx < 2 or ny < 2:
            raise InvalidArgumentError("grid_shape must be at least 2 x 2")
        object.__setattr__(self, "source", np.asarray(self.source, dtype=float))
        object.__setattr__(self, "region", Rect.from_any(self.region))
        object.__setattr__(self, "grid_shape", (int(nx), int(ny)))

    @property
    def k(self) -> float:
        return 2 * np.pi / self.wavelength

    def validate_against(self, array: ArrayGeometry) -> None:
        """Reject scenes whose source effectively touches an antenna."""
        d = array.min_distance_to(self.source[None, :])[0]
        if d <= SINGULARITY_RADIUS:
            raise InvalidArgumentError(
                f"source lies within {SINGULARITY_RADIUS} wavelengths of an antenna"
            )
