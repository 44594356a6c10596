import numpy as np
import pytest
from hypothesis import given, strategies as st

from nfal.errors import InvalidArgumentError, UnsupportedGeometryError
from nfal.geometry import (
    Rect,
    Scene,
    build_circular,
    build_concentric,
    build_linear,
    build_rectangular,
    from_points,
    from_polar,
    to_polar,
)
from nfal import analysis


class TestLinear:
    def test_spacing_1200_over_600(self):
        arr = build_linear(1200, 600.0)
        assert arr.spacings["x"] == pytest.approx(600.0 / 1199.0, abs=1e-12)
        assert len(arr) == 1200

    def test_two_endpoints(self):
        arr = build_linear(2, 1.0)
        np.testing.assert_allclose(arr.elements, [[-0.5, 0.0], [0.5, 0.0]])
        assert arr.spacings["x"] == pytest.approx(1.0)

    def test_spacing_84_over_400(self):
        arr = build_linear(84, 400.0)
        assert arr.spacings["x"] == pytest.approx(400.0 / 83.0)

    def test_zero_count_rejected(self):
        with pytest.raises(InvalidArgumentError):
            build_linear(0, 10.0)

    def test_single_element_needs_zero_aperture(self):
        with pytest.raises(InvalidArgumentError):
            build_linear(1, 5.0)
        arr = build_linear(1, 0.0, center=[3.0, 4.0])
        np.testing.assert_allclose(arr.elements, [[3.0, 4.0]])

    def test_vertical_axis_records_y_spacing(self):
        arr = build_linear(11, 10.0, axis=(0.0, 1.0))
        assert "y" in arr.spacings and "x" not in arr.spacings

    def test_oblique_axis_has_no_axis_spacing(self):
        arr = build_linear(11, 10.0, axis=(1.0, 1.0))
        assert arr.spacings == {}


class TestRectangular:
    def test_64x64_over_15(self):
        arr = build_rectangular(64, 64, 15.0, 15.0)
        assert len(arr) == 4096
        assert arr.spacings["x"] == pytest.approx(15.0 / 63.0)
        assert arr.spacings["x"] == pytest.approx(0.238, abs=5e-4)

    def test_degenerate_row_equals_linear(self):
        rect = build_rectangular(17, 1, 8.0, 0.0)
        lin = build_linear(17, 8.0)
        np.testing.assert_array_equal(rect.elements, lin.elements)

    def test_single_column_reduces_to_vertical_linear(self):
        rect = build_rectangular(1, 9, 0.0, 4.0)
        lin = build_linear(9, 4.0, axis=(0.0, 1.0))
        np.testing.assert_array_equal(rect.elements, lin.elements)

    def test_zero_counts_rejected(self):
        with pytest.raises(InvalidArgumentError):
            build_rectangular(0, 4, 1.0, 1.0)


class TestCircular:
    def test_full_circle_no_duplicate_endpoint(self):
        arr = build_circular(384, 2 * np.pi, 100.0)
        assert arr.spacings["theta"] == pytest.approx(2 * np.pi / 384)
        assert len(arr) == 384

    def test_single_element(self):
        arr = build_circular(1, np.pi, 50.0, start_angle=0.3)
        np.testing.assert_allclose(
            arr.elements, [[50 * np.cos(0.3), 50 * np.sin(0.3)]]
        )

    def test_partial_arc_spacing(self):
        arr = build_circular(32, np.radians(60.0), 100.0)
        assert arr.spacings["theta"] == pytest.approx(np.radians(60.0) / 31)

    def test_nonpositive_radius_rejected(self):
        with pytest.raises(InvalidArgumentError):
            build_circular(8, np.pi, 0.0)


class TestConcentric:
    def test_32x10_rings(self):
        arr = build_concentric(32, np.radians(60.0), np.linspace(50, 100, 10))
        assert len(arr) == 320
        assert arr.spacings["r"] == pytest.approx(50.0 / 9.0)

    def test_single_radius_equals_circular(self):
        rings = build_concentric(16, np.pi, [70.0])
        ring = build_circular(16, np.pi, 70.0)
        np.testing.assert_array_equal(rings.elements, ring.elements)

    def test_720x5_spacing(self):
        arr = build_concentric(720, 2 * np.pi, np.linspace(700, 1000, 5))
        assert arr.spacings["r"] == pytest.approx(75.0)

    def test_nonuniform_steps_rejected(self):
        with pytest.raises(InvalidArgumentError):
            build_concentric(8, np.pi, [10.0, 20.0, 40.0])


class TestPolarConversion:
    def test_axis_point(self):
        r, t = to_polar([0.0, 10.0])
        assert r == pytest.approx(10.0) and t == pytest.approx(np.pi / 2)

    def test_diagonal_point(self):
        r, t = to_polar([-20.0, -20.0])
        assert r == pytest.approx(20.0 * np.sqrt(2.0))
        assert t == pytest.approx(-3 * np.pi / 4)

    @given(
        st.floats(-1e6, 1e6, allow_nan=False),
        st.floats(-1e6, 1e6, allow_nan=False),
    )
    def test_round_trip(self, x, y):
        p = np.array([x, y])
        back = from_polar(*to_polar(p))
        assert np.linalg.norm(back - p) <= 1e-12 * max(1.0, np.linalg.norm(p))


class TestInvariants:
    def test_builders_deterministic(self):
        a = build_rectangular(12, 7, 5.0, 3.0, center=[1.0, 2.0])
        b = build_rectangular(12, 7, 5.0, 3.0, center=[1.0, 2.0])
        assert np.array_equal(a.elements, b.elements)

    @pytest.mark.parametrize("n,aperture", [(11, 10.0), (84, 400.0), (300, 1200.0)])
    def test_spacing_is_max_consecutive_gap(self, n, aperture):
        arr = build_linear(n, aperture)
        gaps = np.diff(np.sort(arr.elements[:, 0]))
        assert abs(gaps.max() - arr.spacings["x"]) < 1e-9

    def test_duplicates_rejected(self):
        with pytest.raises(InvalidArgumentError):
            from_points([[0.0, 0.0], [1.0, 1.0], [0.0, 0.0]])

    def test_raw_points_refused_by_afr(self):
        arr = from_points([[0.0, 0.0], [1.3, 0.0], [2.1, 0.0]])
        scene = Scene(source=[0.0, 30.0], region=Rect(-5, 5, 25, 35), grid_shape=(8, 8))
        with pytest.raises(UnsupportedGeometryError):
            analysis.afr(arr, scene)

    def test_subset_detection(self):
        big = build_linear(21, 20.0)
        small = big.subset(range(0, 21, 2))
        assert small.is_subset_of(big)
        assert not big.is_subset_of(small)


class TestScene:
    def test_requires_positive_wavelength(self):
        with pytest.raises(InvalidArgumentError):
            Scene(source=[0, 1], region=Rect(-1, 1, 0, 2), wavelength=0.0)

    def test_requires_positive_area(self):
        with pytest.raises(InvalidArgumentError):
            Rect(1.0, 1.0, 0.0, 2.0)

    def test_source_on_antenna_rejected(self):
        arr = build_linear(5, 4.0)
        scene = Scene(source=[0.0, 0.0], region=Rect(-5, 5, -5, 5))
        with pytest.raises(InvalidArgumentError):
            scene.validate_against(arr)

    def test_wavenumber(self):
        scene = Scene(source=[0, 5], region=Rect(-1, 1, 4, 6), wavelength=2.0)
        assert scene.k == pytest.approx(np.pi)
