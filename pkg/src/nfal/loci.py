"""Loci of critical antennas: conic fits, asymptotes, and numeric roots.

For linear arrays the extrema of the matched-product frequency component lie
on a curve that, for small vertical offset between test and source points,
fits a hyperbola in the coordinates ``(x, A)`` with ``A = y - y_src``; its
asymptotes give the straight line the critical antennas approach far from
the scene. For circular arrays no closed form exists and roots are found
numerically along the sampling curve.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numpy.typing import NDArray

from . import field
from .errors import DegenerateExpansionError, InvalidArgumentError

TWO_PI = 2.0 * np.pi

# |phase second derivative| below this (relative to its max over the scan)
# counts as identically zero, flagging the degenerate matched-at-source case.
DEGENERATE_REL = 1e-12


@dataclass(frozen=True)
class ConicCoefficients:
    """Coefficients of ``a x^2 + b x A + c A^2 + d x + e A + f = 0``.

    ``u0..u3`` are the expansion parameters behind them and ``eps`` the
    vertical offset ``y_src - y_test`` pivoting the expansion. For any valid
    input ``c == -1/2`` identically, so the discriminant ``b^2 - 4ac`` is
    positive and the conic is a hyperbola.
    """

    a: float
    b: float
    c: float
    d: float
    e: float
    f: float
    u0: float
    u1: float
    u2: float
    u3: float
    eps: float

    @property
    def discriminant(self) -> float:
        return self.b * self.b - 4.0 * self.a * self.c

    def evaluate(self, x, A):
        """Conic residual at ``(x, A)`` points."""
        x = np.asarray(x, dtype=float)
        A = np.asarray(A, dtype=float)
        return (
            self.a * x * x
            + self.b * x * A
            + self.c * A * A
            + self.d * x
            + self.e * A
            + self.f
        )

    def relative_residual(self, x, A):
        """Residual normalized by the sum of term magnitudes."""
        x = np.asarray(x, dtype=float)
        A = np.asarray(A, dtype=float)
        scale = (
            np.abs(self.a * x * x)
            + np.abs(self.b * x * A)
            + np.abs(self.c * A * A)
            + np.abs(self.d * x)
            + np.abs(self.e * A)
            + np.abs(self.f)
        )
        return np.abs(self.evaluate(x, A)) / np.where(scale > 0, scale, 1.0)


def hyperbola_coefficients(x_test, x_src) -> ConicCoefficients:
    """Small-offset conic fit of the critical-antenna locus for a linear array.

    The fit expands around equal vertical offsets, so it requires
    ``y_src != y_test``; the numeric root finder below has no such
    restriction. Note the sign of ``e``: expanding the completed square
    gives ``e = 2 u0 u1 - u3``.
    """
    x_test = np.asarray(x_test, dtype=float)
    x_src = np.asarray(x_src, dtype=float)
    eps = x_src[1] - x_test[1]
    if eps == 0:
        raise DegenerateExpansionError("offset expansion needs y_src != y_test")
    dx = x_test[0] - x_src[0]
    u0 = float(x_src[0])
    u1 = -0.75 * dx / eps
    u2 = 9.0 / 16.0 * dx * dx / (eps * eps) + 0.5
    u3 = (x_src[0] ** 2 - x_test[0] ** 2 - eps**2) / (-4.0 * eps / 3.0) - 1.5 * u0 * dx / eps
    return ConicCoefficients(
        a=1.0,
        b=-2.0 * u1,
        c=u1 * u1 - u2,
        d=-2.0 * u0,
        e=2.0 * u0 * u1 - u3,
        f=u0 * u0,
        u0=u0,
        u1=u1,
        u2=u2,
        u3=u3,
        eps=float(eps),
    )


@dataclass(frozen=True)
class AsymptoteLine:
    """Asymptote ``A = slope * x + intercept`` in the ``(x, A)`` frame."""

    slope: float
    intercept: float

    def distance(self, x, A) -> NDArray[np.float64]:
        """Perpendicular distance from ``(x, A)`` points to the line."""
        x = np.asarray(x, dtype=float)
        A = np.asarray(A, dtype=float)
        return np.abs(self.slope * x - A + self.intercept) / np.hypot(self.slope, 1.0)

    def scene_points(self, y_src: float, x_values) -> NDArray[np.float64]:
        """Line samples mapped back to scene coordinates ``(x, y)``."""
        x_values = np.asarray(x_values, dtype=float)
        return np.column_stack(
            [x_values, self.slope * x_values + self.intercept + y_src]
        )


def asymptotes(coeffs: ConicCoefficients) -> tuple[AsymptoteLine, AsymptoteLine]:
    """The two asymptotes of the fitted hyperbola.

    Slopes are the roots of ``c m^2 + b m + a = 0``; intercepts follow from
    cancelling the linear term. A vanishing ``b + 2 c m`` would make the
    asymptote vertical in this frame, which the parametrization cannot
    represent.
    """
    D = coeffs.discriminant
    if D <= 0:
        raise InvalidArgumentError("conic is not a hyperbola")
    lines = []
    for sign in (+1.0, -1.0):
        m = (-coeffs.b + sign * np.sqrt(D)) / (2.0 * coeffs.c)
        denom = coeffs.b + 2.0 * coeffs.c * m
        if abs(denom) < 1e-300:
            raise InvalidArgumentError("vertical asymptote: slope form breaks down")
        p = -(coeffs.e * m + coeffs.d) / denom
        lines.append(AsymptoteLine(float(m), float(p)))
    return lines[0], lines[1]


# ---------------------------------------------------------------------------
# numeric loci


@dataclass(frozen=True)
class SegmentCurve:
    """Straight sampling segment from ``p0`` to ``p1``."""

    p0: NDArray[np.float64]
    p1: NDArray[np.float64]
    n: int = 4096

    def points(self, t) -> NDArray[np.float64]:
        t = np.asarray(t, dtype=float)
        p0 = np.asarray(self.p0, dtype=float)
        p1 = np.asarray(self.p1, dtype=float)
        return p0 + t[..., None] * (p1 - p0)

    def params(self) -> NDArray[np.float64]:
        return np.linspace(0.0, 1.0, self.n)

    def param_scale(self) -> float:
        return float(np.linalg.norm(np.asarray(self.p1) - np.asarray(self.p0)))

    closed = False


@dataclass(frozen=True)
class ArcCurve:
    """Circular sampling arc; a full circle wraps around for bracketing."""

    center: NDArray[np.float64]
    radius: float
    theta0: float = 0.0
    theta1: float = TWO_PI
    n: int = 4096

    def points(self, t) -> NDArray[np.float64]:
        t = np.asarray(t, dtype=float)
        ang = self.theta0 + t * (self.theta1 - self.theta0)
        c = np.asarray(self.center, dtype=float)
        return c + self.radius * np.stack([np.cos(ang), np.sin(ang)], axis=-1)

    def params(self) -> NDArray[np.float64]:
        if self.closed:
            return np.arange(self.n) / self.n
        return np.linspace(0.0, 1.0, self.n)

    def param_scale(self) -> float:
        return abs(self.theta1 - self.theta0)

    @property
    def closed(self) -> bool:
        return abs(abs(self.theta1 - self.theta0) - TWO_PI) < 1e-12


@dataclass(frozen=True)
class LociResult:
    """Roots of the phase second derivative along a sampling curve."""

    points: NDArray[np.float64]
    params: NDArray[np.float64]
    degenerate: bool


def exact_loci(
    x_test,
    x_src,
    curve,
    k: float = TWO_PI,
    axis: str = "x",
    origin=(0.0, 0.0),
    param_tol: float = 1e-10,
) -> LociResult:
    """All zeros of the matched-phase second derivative along a curve.

    Dense scan (the curve's ``n`` samples) brackets every sign change, then
    bisection narrows each bracket until the curve-parameter step maps to
    less than ``param_tol`` in position (or radians for angular axes). The
    matched-at-source case makes the derivative vanish identically and is
    reported as degenerate rather than as a root list.
    """
    x_test = np.asarray(x_test, dtype=float)
    x_src = np.asarray(x_src, dtype=float)

    def f(t):
        return field.phase_second_derivative(
            curve.points(t), x_test, x_src, k, axis=axis, origin=origin
        )

    t = curve.params()
    v = f(t)
    vmax = np.abs(v).max()
    if vmax <= DEGENERATE_REL * k:
        return LociResult(np.empty((0, 2)), np.empty(0), True)

    t_next = np.roll(t, -1) if curve.closed else t[1:]
    t_here = t if curve.closed else t[:-1]
    v_next = np.roll(v, -1) if curve.closed else v[1:]
    v_here = v if curve.closed else v[:-1]
    step = 1.0 / curve.n if curve.closed else t[1] - t[0]

    roots = []
    hit = np.flatnonzero(np.sign(v_here) * np.sign(v_next) < 0)
    for i in hit:
        lo, hi = t_here[i], t_here[i] + step
        flo = v_here[i]
        scale = curve.param_scale()
        while (hi - lo) * scale > param_tol:
            mid = 0.5 * (lo + hi)
            fmid = f(np.array([mid]))[0]
            if fmid == 0.0:
                lo = hi = mid
                break
            if np.sign(fmid) == np.sign(flo):
                lo, flo = mid, fmid
            else:
                hi = mid
        roots.append(0.5 * (lo + hi))
    exact_zero = np.flatnonzero(v_here == 0.0)
    roots.extend(t_here[exact_zero])
    roots = np.asarray(roots, dtype=float)
    if curve.closed:
        roots = roots % 1.0
    roots = np.unique(roots)
    return LociResult(curve.points(roots), roots, False)


# ---------------------------------------------------------------------------
# far-field reductions


def ff_kg_approx(z, x_test, x_src, k: float = TWO_PI) -> NDArray[np.float64]:
    """Far-field matched frequency: ``k`` times the directional-cosine gap.

    Independent of the antenna position; ``z`` is accepted only to mirror
    the exact operation's signature.
    """
    x_test = np.asarray(x_test, dtype=float)
    x_src = np.asarray(x_src, dtype=float)
    s = x_src / np.linalg.norm(x_src)
    s_t = x_test / np.linalg.norm(x_test)
    return k * (s - s_t)


def ff_kg_validity(z, x_test, x_src, k: float = TWO_PI) -> dict[str, float]:
    """Empirical error report for the far-field reduction at ``z``.

    Returns the distance ratio ``rho`` driving the approximation and the
    actual error against the exact matched frequency, both absolute and as
    a fraction of ``k``.
    """
    z = np.asarray(z, dtype=float)
    approx = ff_kg_approx(z, x_test, x_src, k)
    exact = field.k_g(z, x_test, x_src, k)
    err = float(np.linalg.norm(approx - exact))
    rho = float(
        np.linalg.norm(z)
        / min(np.linalg.norm(np.asarray(x_src, float)), np.linalg.norm(np.asarray(x_test, float)))
    )
    return {"rho": rho, "abs_error": err, "error_over_k": err / k}


def ff_phi_circular(theta_z, x_test, x_src, k: float = TWO_PI) -> NDArray[np.float64]:
    """Matched-phase approximation on a large ring: a pure cosine in angle.

    Valid when the ring radius dominates both point ranges; its angle
    derivative peaks at ``k`` times the separation of the two points,
    independent of the radius.
    """
    x_test = np.asarray(x_test, dtype=float)
    x_src = np.asarray(x_src, dtype=float)
    diff = x_src - x_test
    r_ss = np.linalg.norm(diff)
    t_ss = np.arctan2(diff[1], diff[0])
    theta_z = np.asarray(theta_z, dtype=float)
    return k * r_ss * np.cos(theta_z - t_ss)
