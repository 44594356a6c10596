"""Brute-force spatial spectra of the received field and matched product.

These are direct discrete-sum transforms over antenna positions (no fast
transform: positions are arbitrary and correctness matters more than speed
here). They serve as the independent oracle that validates every chirp-based
frequency claim: the thresholded support of these spectra is compared against
analytically predicted band edges.

Support extraction works on the amplitude-equalized spectrum (per-antenna
samples normalized to unit modulus) because the quantities being validated
are phase frequencies; range-decay amplitudes only smear the picture. Cells
outside the principal sampling zone (``|kappa| > pi/spacing``, where replicas
of the spectrum live) and outside the physical frequency disk (the received
field's local frequency has fixed norm ``k``, the matched product's at most
``2k``) are excluded, a median noise floor is subtracted, and the per-axis
support edges are read off marginal-energy quantiles.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numpy.typing import NDArray

from . import field
from .errors import InvalidArgumentError
from .geometry import POLAR, ArrayGeometry, Rect

TWO_PI = 2.0 * np.pi

DEFAULT_SHAPE = (256, 256)
DEFAULT_SUPPORT_TAIL = 0.01
# Default wavevector span per axis, as a multiple of k (covers the 2k bound
# of matched-product frequencies with margin).
DEFAULT_SPAN = 2.2
# Physical norm bounds, with slack for the support mask.
H_NORM_BOUND = 1.05
G_NORM_BOUND = 2.1


@dataclass
class SpectrumEstimate:
    """Magnitudes over a wavevector grid plus thresholded support extents.

    ``magnitudes[i2, i1]`` corresponds to the cell centered at
    ``(k1_centers[i1], k2_centers[i2])``. ``axes`` labels the two wavevector
    coordinates (``("kx", "ky")`` or ``("kr", "ktheta")``). ``support_box``
    maps each axis label to the ``(low, high)`` edges of the support at the
    configured tail fraction; ``zone`` marks the cells that were eligible
    (inside the principal sampling zone and the physical frequency bound).
    """

    wavevector_region: Rect
    shape: tuple[int, int]
    magnitudes: NDArray[np.float64]
    axes: tuple[str, str]
    support_threshold: float
    support_box: dict[str, tuple[float, float]]
    zone: NDArray[np.bool_]
    equalized: bool

    def k1_centers(self) -> NDArray[np.float64]:
        return self.wavevector_region.cell_centers(self.shape)[0]

    def k2_centers(self) -> NDArray[np.float64]:
        return self.wavevector_region.cell_centers(self.shape)[1]

    def cell_size(self) -> tuple[float, float]:
        return self.wavevector_region.cell_size(self.shape)

    def half_extent(self, axis: str) -> float:
        lo, hi = self.support_box[axis]
        return max(abs(lo), abs(hi))

    def support_width(self, axis: str) -> float:
        lo, hi = self.support_box[axis]
        return hi - lo


def _direct_sum(
    coords: NDArray[np.float64],
    values: NDArray[np.complex128],
    k1: NDArray[np.float64],
    k2: NDArray[np.float64],
) -> NDArray[np.complex128]:
    """Sum of ``values[n] * exp(-j (k1 c1_n + k2 c2_n))`` on the k-grid."""
    a = np.exp(-1j * np.outer(k1, coords[:, 0]))
    b = np.exp(-1j * np.outer(k2, coords[:, 1]))
    return (b * values) @ a.T


def spectrum_value(
    coords: NDArray[np.float64],
    values: NDArray[np.complex128],
    kvec,
) -> complex:
    """Single-wavevector evaluation sharing the direct-sum path."""
    kvec = np.asarray(kvec, dtype=float)
    return complex(
        _direct_sum(coords, values, kvec[:1], kvec[1:2])[0, 0]
    )


def _support_edges(
    mag: NDArray[np.float64],
    k1: NDArray[np.float64],
    k2: NDArray[np.float64],
    zone: NDArray[np.bool_],
    tail: float,
) -> list[tuple[float, float]]:
    if not 0 < tail < 0.5:
        raise InvalidArgumentError("support tail fraction must lie in (0, 0.5)")
    if not zone.any():
        raise InvalidArgumentError("support zone is empty")
    power = np.where(zone, mag * mag, 0.0)
    floor = np.median(power[zone])
    clean = np.clip(power - floor, 0.0, None)
    clean[~zone] = 0.0
    total = clean.sum()
    if total <= 0:
        raise InvalidArgumentError("spectrum has no energy above the noise floor")
    edges = []
    for axis, kv in ((0, k1), (1, k2)):
        e = clean.sum(axis=0 if axis == 0 else 1)
        c = np.cumsum(e) / total
        lo = kv[int(np.searchsorted(c, tail))]
        hi = kv[min(int(np.searchsorted(c, 1.0 - tail)), len(kv) - 1)]
        edges.append((float(lo), float(hi)))
    return edges


def _zone_mask(
    k1: NDArray[np.float64],
    k2: NDArray[np.float64],
    caps: tuple[float | None, float | None],
    disk: tuple[float, float],
) -> NDArray[np.bool_]:
    K1, K2 = np.meshgrid(k1, k2)
    zone = (K1 / disk[0]) ** 2 + (K2 / disk[1]) ** 2 <= 1.0
    if caps[0] is not None:
        zone &= np.abs(K1) <= caps[0]
    if caps[1] is not None:
        zone &= np.abs(K2) <= caps[1]
    return zone


def _estimate(
    coords,
    values,
    region: Rect,
    shape,
    axes,
    caps,
    disk,
    threshold,
    equalize,
) -> SpectrumEstimate:
    if equalize:
        values = values / np.abs(values)
    k1, k2 = region.cell_centers(shape)
    mag = np.abs(_direct_sum(coords, values, k1, k2))
    zone = _zone_mask(k1, k2, caps, disk)
    edges = _support_edges(mag, k1, k2, zone, threshold)
    box = {axes[0]: edges[0], axes[1]: edges[1]}
    return SpectrumEstimate(region, shape, mag, axes, threshold, box, zone, equalize)


def _cartesian_region(k: float, span: float) -> Rect:
    s = span * k
    return Rect(-s, s, -s, s)


def _cartesian_caps(array: ArrayGeometry) -> tuple[float | None, float | None]:
    sx = array.spacings.get("x")
    sy = array.spacings.get("y")
    return (np.pi / sx if sx else None, np.pi / sy if sy else None)


def spectrum_h(
    array: ArrayGeometry,
    x_src,
    k: float = TWO_PI,
    region: Rect | None = None,
    shape: tuple[int, int] = DEFAULT_SHAPE,
    threshold: float = DEFAULT_SUPPORT_TAIL,
    equalize: bool = True,
) -> SpectrumEstimate:
    """Spatial spectrum of the received field over ``(kx, ky)``.

    The support box validates the predicted band ``[k_min, k_max]`` per axis
    from the local-frequency extrema across the array.
    """
    if len(array) == 0:
        raise InvalidArgumentError("array must not be empty")
    region = region or _cartesian_region(k, DEFAULT_SPAN)
    vals = field.channel(array.elements, np.asarray(x_src, float), k)
    return _estimate(
        array.elements, vals, region, shape, ("kx", "ky"),
        _cartesian_caps(array), (H_NORM_BOUND * k, H_NORM_BOUND * k),
        threshold, equalize,
    )


def spectrum_g(
    array: ArrayGeometry,
    x_test,
    x_src,
    k: float = TWO_PI,
    region: Rect | None = None,
    shape: tuple[int, int] = DEFAULT_SHAPE,
    threshold: float = DEFAULT_SUPPORT_TAIL,
    equalize: bool = True,
) -> SpectrumEstimate:
    """Spatial spectrum of the matched product over ``(kx, ky)``.

    Its support validates the maximum matched frequency entering the
    aliasing conditions. Evaluated at the zero wavevector (unequalized) this
    transform reproduces the ambiguity function exactly.
    """
    if len(array) == 0:
        raise InvalidArgumentError("array must not be empty")
    region = region or _cartesian_region(k, DEFAULT_SPAN)
    vals = field.matched_product(
        array.elements, np.asarray(x_test, float), np.asarray(x_src, float), k
    )
    return _estimate(
        array.elements, vals, region, shape, ("kx", "ky"),
        _cartesian_caps(array), (G_NORM_BOUND * k, G_NORM_BOUND * k),
        threshold, equalize,
    )


def spectrum_polar(
    array: ArrayGeometry,
    x_src,
    k: float = TWO_PI,
    x_test=None,
    region: Rect | None = None,
    shape: tuple[int, int] = DEFAULT_SHAPE,
    threshold: float = DEFAULT_SUPPORT_TAIL,
    equalize: bool = True,
) -> SpectrumEstimate:
    """Spectrum over the polar sample coordinates ``(r_z, theta_z)``.

    Computes the received-field spectrum, or the matched-product spectrum
    when ``x_test`` is given. The angular frequency axis is conjugate to the
    antenna angle itself, so its physical bound scales with the outer ring
    radius.
    """
    if array.coord_system != POLAR:
        raise InvalidArgumentError("spectrum_polar requires a polar-tagged array")
    r, theta = array.polar_elements()
    coords = np.column_stack([r, theta])
    r_max = float(r.max())
    if x_test is None:
        vals = field.channel(array.elements, np.asarray(x_src, float), k)
        norm_bound = H_NORM_BOUND
    else:
        vals = field.matched_product(
            array.elements, np.asarray(x_test, float), np.asarray(x_src, float), k
        )
        norm_bound = G_NORM_BOUND
    if region is None:
        s = DEFAULT_SPAN * k
        region = Rect(-s, s, -s * r_max, s * r_max)
    sr = array.spacings.get("r")
    st = array.spacings.get("theta")
    caps = (np.pi / sr if sr else None, np.pi / st if st else None)
    disk = (norm_bound * k, norm_bound * k * r_max)
    axes = ("kr", "ktheta")
    return _estimate(coords, vals, region, shape, axes, caps, disk, threshold, equalize)
