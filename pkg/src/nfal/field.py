"""Near-field channel, phase functions, and local spatial frequencies.

The received field from a point source is a spherical wave whose phase is a
nonlinear function of the antenna position. Treated as a spatial chirp, its
phase gradient defines a position-dependent wavevector; differences of such
gradients govern both resolution and aliasing. Everything here is pure,
vectorised over leading axes, and guarded against the amplitude singularity
at zero range.

Conventions: positions in wavelengths, ``k = 2*pi / wavelength``; the polar
angular frequency component keeps the ``r_z`` factor (it is the derivative
with respect to the angle itself, not arc length).
"""

from __future__ import annotations

import numpy as np
from numpy.typing import ArrayLike, NDArray

from .errors import InvalidArgumentError, SingularityError
from .geometry import SINGULARITY_RADIUS

__all__ = [
    "channel",
    "matched_product",
    "phase_h",
    "phase_g",
    "k_h",
    "k_g",
    "k_g_polar",
    "k_g_arclength",
    "phase_second_derivative",
]


def _distance(z: NDArray, x: NDArray, check: bool = True) -> NDArray[np.float64]:
    d = np.linalg.norm(x - z, axis=-1)
    if check and np.any(d <= SINGULARITY_RADIUS):
        raise SingularityError(
            f"evaluation point within {SINGULARITY_RADIUS} wavelengths of an antenna"
        )
    return d


def channel(z: ArrayLike, x: ArrayLike, k: float = 2 * np.pi) -> NDArray[np.complex128]:
    """Spherical-wave channel ``exp(-j k d) / d`` between ``z`` and ``x``.

    ``z`` and ``x`` are ``(..., 2)`` stacks broadcast against each other.
    """
    z = np.asarray(z, dtype=float)
    x = np.asarray(x, dtype=float)
    d = _distance(z, x)
    return np.exp(-1j * k * d) / d


def phase_h(z: ArrayLike, x: ArrayLike, k: float = 2 * np.pi) -> NDArray[np.float64]:
    """Phase of the channel, ``-k * ||x - z||``."""
    z = np.asarray(z, dtype=float)
    x = np.asarray(x, dtype=float)
    return -k * _distance(z, x)


def matched_product(
    z: ArrayLike, x_test: ArrayLike, x_src: ArrayLike, k: float = 2 * np.pi
) -> NDArray[np.complex128]:
    """Channel from the source times the conjugate channel from the test point.

    This is the integrand of the ambiguity function; its phase is the
    difference of the two channel phases.
    """
    return channel(z, x_src, k) * np.conj(channel(z, x_test, k))


def phase_g(
    z: ArrayLike, x_test: ArrayLike, x_src: ArrayLike, k: float = 2 * np.pi
) -> NDArray[np.float64]:
    """Phase of :func:`matched_product`: ``-k (||x_src - z|| - ||x_test - z||)``."""
    z = np.asarray(z, dtype=float)
    return phase_h(z, x_src, k) - phase_h(z, x_test, k)


def k_h(z: ArrayLike, x_src: ArrayLike, k: float = 2 * np.pi) -> NDArray[np.float64]:
    """Local spatial frequency of the received field at ``z``.

    The gradient of the channel phase with respect to ``z``: a vector of
    norm ``k`` pointing from the antenna toward the source.
    """
    z = np.asarray(z, dtype=float)
    x_src = np.asarray(x_src, dtype=float)
    diff = x_src - z
    d = _distance(z, x_src)
    return k * diff / d[..., None]


def k_g(
    z: ArrayLike, x_test: ArrayLike, x_src: ArrayLike, k: float = 2 * np.pi
) -> NDArray[np.float64]:
    """Local spatial frequency of the matched product at ``z``.

    Difference of the two received-field frequencies; its norm lies in
    ``[0, 2k]``, reaching ``2k`` only when ``z`` sits between collinear
    source and test points.
    """
    return k_h(z, x_src, k) - k_h(z, x_test, k)


def _polar_parts(z: NDArray, x: NDArray, origin: NDArray):
    """Distance plus radial/tangential projections about ``origin``."""
    zrel = z - origin
    xrel = x - origin
    rz = np.linalg.norm(zrel, axis=-1)
    rx = np.linalg.norm(xrel, axis=-1)
    tz = np.arctan2(zrel[..., 1], zrel[..., 0])
    tx = np.arctan2(xrel[..., 1], xrel[..., 0])
    d = _distance(z, x)
    return rz, tz, rx, tx, d


def k_g_polar(
    z: ArrayLike,
    x_test: ArrayLike,
    x_src: ArrayLike,
    k: float = 2 * np.pi,
    origin: ArrayLike = (0.0, 0.0),
) -> NDArray[np.float64]:
    """Matched-product frequency in polar coordinates about ``origin``.

    Returns ``(..., 2)`` with components ``(k_r, k_theta)``: the derivatives
    of the matched-product phase with respect to ``r_z`` and ``theta_z``.
    ``k_theta`` carries the ``r_z`` factor, so the angular aliasing test
    compares it against ``2*pi / d_theta`` directly.
    """
    z = np.asarray(z, dtype=float)
    x_test = np.asarray(x_test, dtype=float)
    x_src = np.asarray(x_src, dtype=float)
    origin = np.asarray(origin, dtype=float)

    rz, tz, rs, ts, ds = _polar_parts(z, x_src, origin)
    _, _, rt, tt, dt = _polar_parts(z, x_test, origin)

    kr = k * ((rz - rt * np.cos(tz - tt)) / dt - (rz - rs * np.cos(tz - ts)) / ds)
    ktheta = k * (rz * rt * np.sin(tz - tt) / dt - rz * rs * np.sin(tz - ts) / ds)
    return np.stack((kr, ktheta), axis=-1)


def k_g_arclength(
    z: ArrayLike,
    x_test: ArrayLike,
    x_src: ArrayLike,
    k: float = 2 * np.pi,
    origin: ArrayLike = (0.0, 0.0),
) -> NDArray[np.float64]:
    """Angular frequency per unit arc length, ``k_theta / r_z``."""
    z = np.asarray(z, dtype=float)
    origin = np.asarray(origin, dtype=float)
    rz = np.linalg.norm(z - origin, axis=-1)
    return k_g_polar(z, x_test, x_src, k, origin)[..., 1] / rz


def _d2_distance_cartesian(z: NDArray, x: NDArray, axis: int) -> NDArray:
    d = _distance(z, x)
    u = (z[..., axis] - x[..., axis]) / d
    return (1.0 - u * u) / d


def _d2_distance_polar(z: NDArray, x: NDArray, origin: NDArray, axis: str) -> NDArray:
    rz, tz, rx, tx, d = _polar_parts(z, x, origin)
    delta = tz - tx
    if axis == "r":
        a = rz - rx * np.cos(delta)
        return 1.0 / d - a * a / d**3
    s = rz * rx * np.sin(delta)
    return rz * rx * np.cos(delta) / d - s * s / d**3


_CART_AXES = {"x": 0, "y": 1}


def phase_second_derivative(
    z: ArrayLike,
    x_test: ArrayLike,
    x_src: ArrayLike,
    k: float = 2 * np.pi,
    axis: str = "x",
    origin: ArrayLike = (0.0, 0.0),
) -> NDArray[np.float64]:
    """Second derivative of the matched-product phase along one coordinate.

    ``axis`` is ``"x"``/``"y"`` (per wavelength squared) or ``"r"``/``"theta"``
    (polar about ``origin``; the angular case is per radian squared). Zeros of
    this quantity locate the extrema of the corresponding local frequency
    component, which is where critical antennas live.
    """
    z = np.asarray(z, dtype=float)
    x_test = np.asarray(x_test, dtype=float)
    x_src = np.asarray(x_src, dtype=float)
    if axis in _CART_AXES:
        i = _CART_AXES[axis]
        return k * (
            _d2_distance_cartesian(z, x_test, i) - _d2_distance_cartesian(z, x_src, i)
        )
    if axis in ("r", "theta"):
        origin = np.asarray(origin, dtype=float)
        return k * (
            _d2_distance_polar(z, x_test, origin, axis)
            - _d2_distance_polar(z, x_src, origin, axis)
        )
    raise InvalidArgumentError(f"unknown axis {axis!r}")
