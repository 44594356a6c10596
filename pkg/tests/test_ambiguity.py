import numpy as np
import pytest

from nfal import field
from nfal.ambiguity import evaluate_af, measure_peak
from nfal.errors import BorderPeakError, InvalidArgumentError
from nfal.geometry import Rect, Scene, build_linear, from_points

K = 2 * np.pi


def scene_with_source_on_cell(source, half, shape):
    # odd cell counts put the source exactly on a cell center
    return Scene(
        source=source,
        region=Rect(source[0] - half, source[0] + half, source[1] - half, source[1] + half),
        grid_shape=shape,
    )


class TestEvaluateAf:
    def test_peak_at_source_is_sum_of_inverse_squares(self):
        arr = build_linear(31, 30.0)
        scene = scene_with_source_on_cell([0.0, 60.0], 10.0, (25, 25))
        grid = evaluate_af(arr, scene)
        iy, ix = 12, 12
        d = np.linalg.norm(scene.source - arr.elements, axis=-1)
        at_src = grid.values[iy, ix]
        assert at_src.imag == pytest.approx(0.0, abs=1e-12 * at_src.real)
        assert at_src.real == pytest.approx((1.0 / d**2).sum(), rel=1e-12)

    def test_source_value_dominates_no_closer_cells(self):
        # The triangle inequality bounds |AF| by the source value only on
        # cells at least as far from every antenna as the source is; cells
        # hugging the array can exceed it through the 1/range amplitudes.
        arr = build_linear(64, 50.0)
        scene = scene_with_source_on_cell([5.0, 80.0], 30.0, (41, 41))
        grid = evaluate_af(arr, scene)
        at_src = grid.values[20, 20].real
        d_src_max = np.linalg.norm(scene.source - arr.elements, axis=-1).max()
        xs, ys = scene.region.cell_centers(scene.grid_shape)
        gx, gy = np.meshgrid(xs, ys, indexing="xy")
        pts = np.stack([gx.ravel(), gy.ravel()], axis=-1)
        far_enough = (arr.min_distance_to(pts) >= d_src_max).reshape(41, 41)
        assert far_enough.any()
        assert np.nanmax(grid.magnitude()[far_enough]) <= at_src * (1 + 1e-12)

    def test_single_antenna_closed_form(self):
        arr = from_points([[2.0, -1.0]])
        scene = Scene(
            source=[0.0, 40.0], region=Rect(-20, 20, 20, 60), grid_shape=(16, 16)
        )
        grid = evaluate_af(arr, scene)
        xs, ys = scene.region.cell_centers(scene.grid_shape)
        gx, gy = np.meshgrid(xs, ys, indexing="xy")
        dp = np.hypot(gx - 2.0, gy + 1.0)
        ds = np.linalg.norm(scene.source - arr.elements[0])
        np.testing.assert_allclose(grid.magnitude(), 1.0 / (ds * dp), rtol=1e-12)

    def test_additive_over_disjoint_subsets(self):
        arr = build_linear(40, 39.0)
        scene = Scene(
            source=[3.0, 70.0], region=Rect(-10, 10, 60, 80), grid_shape=(12, 12)
        )
        whole = evaluate_af(arr, scene).values
        left = evaluate_af(arr.subset(range(20)), scene).values
        right = evaluate_af(arr.subset(range(20, 40)), scene).values
        np.testing.assert_allclose(whole, left + right, rtol=1e-12)

    def test_permutation_invariance(self, rng):
        arr = build_linear(64, 60.0)
        perm = rng.permutation(64)
        shuffled = arr.subset(perm)
        scene = Scene(
            source=[0.0, 90.0], region=Rect(-15, 15, 70, 110), grid_shape=(10, 10)
        )
        a = evaluate_af(arr, scene).values
        b = evaluate_af(shuffled, scene).values
        np.testing.assert_allclose(a, b, rtol=1e-12)

    def test_worker_count_does_not_change_bits(self):
        arr = build_linear(48, 50.0)
        scene = Scene(
            source=[0.0, 100.0], region=Rect(-40, 40, 60, 140), grid_shape=(96, 96)
        )
        a = evaluate_af(arr, scene, workers=1).values
        b = evaluate_af(arr, scene, workers=4).values
        assert np.array_equal(a, b)

    def test_cells_on_antennas_marked_invalid(self):
        arr = build_linear(3, 2.0)
        scene = Scene(
            source=[0.0, 30.0], region=Rect(-2, 2, -2, 2), grid_shape=(2, 2)
        )
        # cell centers at (+-1, +-1); put an antenna exactly on one
        arr2 = from_points([[-1.0, -1.0], [0.0, 5.0]])
        grid = evaluate_af(arr2, scene)
        assert np.isnan(grid.values[0, 0].real)
        assert np.isfinite(grid.values[1, 1].real)
        assert np.isfinite(grid.db()).all()

    def test_empty_region_vs_array_guard(self):
        arr = build_linear(5, 4.0)
        scene = Scene(source=[0.0, 0.0], region=Rect(-5, 5, -5, 5))
        with pytest.raises(InvalidArgumentError):
            evaluate_af(arr, scene)


class TestMeasurePeak:
    def fwhm_scene(self, shape=(129, 257)):
        # wide range extent: the range lobe is an order of magnitude broader
        # than the transverse one
        return Scene(
            source=[0.0, 300.0], region=Rect(-20, 20, 150, 450), grid_shape=shape
        )

    def test_symmetric_scene_peak_centered(self):
        arr = build_linear(101, 100.0)
        scene = self.fwhm_scene()
        grid = evaluate_af(arr, scene)
        peak = measure_peak(grid, near=[0.0, 300.0])
        dx, _ = scene.region.cell_size(scene.grid_shape)
        assert abs(peak.location[0]) < dx
        assert peak.fwhm_x > 0 and peak.fwhm_y > 0

    def test_fwhm_tracks_bandwidth_resolution(self):
        from nfal import analysis

        arr = build_linear(101, 100.0)
        scene = self.fwhm_scene()
        grid = evaluate_af(arr, scene)
        peak = measure_peak(grid, near=[0.0, 300.0])
        delta = analysis.bandwidth(arr, scene.source, scene.k).resolution
        assert delta[0] / 2 <= peak.fwhm_x <= delta[0] * 2
        assert delta[1] / 2 <= peak.fwhm_y <= delta[1] * 2

    def test_refinement_stability(self):
        arr = build_linear(101, 100.0)
        coarse = evaluate_af(arr, self.fwhm_scene((129, 257)))
        fine = evaluate_af(arr, self.fwhm_scene((257, 513)))
        w1 = measure_peak(coarse, near=[0.0, 300.0]).fwhm_x
        w2 = measure_peak(fine, near=[0.0, 300.0]).fwhm_x
        assert abs(w1 - w2) / w2 < 0.05

    def test_border_peak_rejected(self):
        arr = build_linear(21, 20.0)
        scene = Scene(
            source=[0.0, 50.0], region=Rect(-0.5, 30, 45, 55), grid_shape=(32, 32)
        )
        grid = evaluate_af(arr, scene)
        with pytest.raises(BorderPeakError):
            measure_peak(grid, near=[0.0, 50.0])
