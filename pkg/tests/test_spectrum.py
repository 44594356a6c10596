import numpy as np
import pytest

from nfal import field, spectrum
from nfal.errors import InvalidArgumentError
from nfal.geometry import Rect, build_circular, build_concentric, build_linear, build_rectangular

K = 2 * np.pi


class TestIdentity:
    def test_zero_wavevector_reproduces_ambiguity_value(self, rng):
        arr = build_rectangular(16, 16, 6.0, 6.0)
        for _ in range(5):
            xs = rng.uniform(8, 20, 2)
            xt = rng.uniform(-20, -8, 2)
            g = field.matched_product(arr.elements, xt, xs)
            got = spectrum.spectrum_value(arr.elements, g, (0.0, 0.0))
            want = g.sum()
            assert abs(got - want) <= 1e-10 * abs(want)


class TestSupport:
    def test_matches_chirp_half_extent_rect(self):
        arr = build_rectangular(64, 64, 15.0, 15.0)
        xs, xt = np.array([0.0, 10.0]), np.array([10.0, 10.0])
        est = spectrum.spectrum_g(arr, xt, xs)
        kg = field.k_g(arr.elements, xt, xs)
        c1, c2 = est.cell_size()
        for axis, cell, col in (("kx", c1, 0), ("ky", c2, 1)):
            want = np.abs(kg[:, col]).max()
            assert abs(est.half_extent(axis) - want) <= 2 * cell + 0.05 * want

    def test_far_source_support_collapses(self):
        # near plane-wave regime: the band is almost a delta and the
        # measured box is window/quantile limited to a few cells
        arr = build_linear(256, 80.0)
        xs = np.array([500.0, 4000.0])
        est = spectrum.spectrum_h(arr, xs)
        c1, _ = est.cell_size()
        lo, hi = est.support_box["kx"]
        kh = field.k_h(arr.elements, xs)[:, 0]
        assert hi - lo <= (kh.max() - kh.min()) + 6 * c1

    def test_matched_pair_concentrates_at_zero(self):
        arr = build_linear(128, 60.0)
        xs = np.array([0.0, 500.0])
        est = spectrum.spectrum_g(arr, xs, xs)
        assert est.half_extent("kx") < 0.5 * K

    def test_support_monotone_with_source_distance(self):
        arr = build_rectangular(32, 32, 12.0, 12.0)
        widths = []
        for dist in (20.0, 60.0, 200.0):
            est = spectrum.spectrum_h(arr, [0.0, dist])
            widths.append(est.support_width("kx"))
        assert widths[0] >= widths[1] >= widths[2]

    def test_refinement_is_cauchy(self):
        arr = build_rectangular(32, 32, 10.0, 10.0)
        xs = np.array([3.0, 25.0])
        coarse = spectrum.spectrum_h(arr, xs, shape=(128, 128))
        fine = spectrum.spectrum_h(arr, xs, shape=(256, 256))
        cell = coarse.cell_size()[0]
        for axis in ("kx", "ky"):
            lo_c, hi_c = coarse.support_box[axis]
            lo_f, hi_f = fine.support_box[axis]
            assert abs(lo_c - lo_f) <= cell and abs(hi_c - hi_f) <= cell


class TestTranslationInvariance:
    def test_received_field_magnitudes_shift_invariant(self):
        arr = build_linear(64, 30.0)
        shift = np.array([7.0, -4.0])
        shifted = build_linear(64, 30.0, center=shift)
        xs = np.array([5.0, 60.0])
        a = spectrum.spectrum_h(arr, xs, shape=(96, 96))
        b = spectrum.spectrum_h(shifted, xs + shift, shape=(96, 96))
        np.testing.assert_allclose(a.magnitudes, b.magnitudes, rtol=1e-9, atol=1e-9)


class TestPolar:
    def test_requires_polar_array(self):
        arr = build_linear(16, 8.0)
        with pytest.raises(InvalidArgumentError):
            spectrum.spectrum_polar(arr, [0.0, 20.0])

    def test_angular_support_bounded_by_2kR(self):
        R = 30.0
        arr = build_circular(512, 2 * np.pi, R)
        est = spectrum.spectrum_polar(arr, [5.0, -3.0], x_test=[-6.0, 8.0])
        assert est.half_extent("ktheta") <= 2 * K * R * 1.05

    def test_single_ring_radial_axis_is_window_limited(self):
        R = 25.0
        arr = build_circular(256, 2 * np.pi, R)
        est = spectrum.spectrum_polar(arr, [4.0, 6.0])
        # one radial sample: no radial structure, support spans the
        # physically allowed radial band instead of collapsing
        assert est.support_width("kr") > K

    def test_multi_ring_matches_polar_chirp(self):
        arr = build_concentric(256, np.pi, np.linspace(5, 15, 64), start_angle=np.pi)
        xs, xt = np.array([-10.0, 10.0]), np.array([0.0, 5.0])
        est = spectrum.spectrum_polar(arr, xs, x_test=xt)
        kgp = field.k_g_polar(arr.elements, xt, xs)
        c1, c2 = est.cell_size()
        for axis, cell, col in (("kr", c1, 0), ("ktheta", c2, 1)):
            want = np.abs(kgp[:, col]).max()
            assert abs(est.half_extent(axis) - want) <= 2 * cell + 0.05 * want


class TestValidation:
    def test_degenerate_region_rejected(self):
        arr = build_linear(8, 4.0)
        with pytest.raises(InvalidArgumentError):
            spectrum.spectrum_h(arr, [0.0, 20.0], region=Rect(-1.0, -1.0 + 0, 0.0, 1.0))

    def test_bad_tail_fraction_rejected(self):
        arr = build_linear(8, 4.0)
        with pytest.raises(InvalidArgumentError):
            spectrum.spectrum_h(arr, [0.0, 20.0], threshold=0.7)
