import numpy as np
import pytest

from conftest import finite_difference_gradient, finite_difference_second
from nfal import field
from nfal.errors import SingularityError
from nfal.geometry import to_polar

K = 2 * np.pi


class TestChannel:
    def test_unit_distance(self):
        v = field.channel([0.0, 0.0], [0.0, 1.0])
        assert abs(v) == pytest.approx(1.0)
        assert np.angle(v) == pytest.approx(0.0, abs=1e-12)

    def test_half_wavelength(self):
        v = field.channel([0.0, 0.0], [0.0, 0.5])
        assert abs(v) == pytest.approx(2.0)
        assert abs(np.angle(v)) == pytest.approx(np.pi)

    def test_magnitude_is_inverse_distance(self, rng):
        z = rng.uniform(-10, 10, (50, 2))
        x = rng.uniform(20, 40, 2)
        d = np.linalg.norm(x - z, axis=-1)
        np.testing.assert_allclose(np.abs(field.channel(z, x)) * d, 1.0, rtol=1e-12)

    def test_singularity_raises(self):
        with pytest.raises(SingularityError):
            field.channel([1.0, 1.0], [1.0, 1.0 + 1e-9])


class TestMatchedProduct:
    def test_self_match_is_inverse_square(self, rng):
        z = rng.uniform(-5, 5, (20, 2))
        x = np.array([3.0, 40.0])
        v = field.matched_product(z, x, x)
        d = np.linalg.norm(x - z, axis=-1)
        np.testing.assert_allclose(v.real, 1.0 / d**2, rtol=1e-12)
        np.testing.assert_allclose(v.imag, 0.0, atol=1e-15)

    def test_phase_is_range_difference(self, rng):
        z = rng.uniform(-5, 5, (20, 2))
        xs = rng.uniform(10, 30, 2)
        xt = rng.uniform(-30, -10, 2)
        got = np.angle(field.matched_product(z, xt, xs))
        want = -K * (np.linalg.norm(xs - z, axis=-1) - np.linalg.norm(xt - z, axis=-1))
        np.testing.assert_allclose(np.exp(1j * got), np.exp(1j * want), atol=1e-9)

    def test_swap_conjugates(self, rng):
        z = rng.uniform(-5, 5, (20, 2))
        a, b = rng.uniform(6, 20, 2), rng.uniform(-20, -6, 2)
        np.testing.assert_allclose(
            field.matched_product(z, a, b), np.conj(field.matched_product(z, b, a))
        )


class TestLocalFrequencies:
    def test_k_h_points_at_source(self):
        np.testing.assert_allclose(
            field.k_h([0.0, 0.0], [0.0, 10.0]), [0.0, K], atol=1e-12
        )

    def test_k_h_345_triangle(self):
        np.testing.assert_allclose(
            field.k_h([3.0, 0.0], [0.0, 4.0]), K * np.array([-0.6, 0.8]), rtol=1e-12
        )

    def test_k_h_norm_is_k(self, rng):
        z = rng.uniform(-50, 50, (200, 2))
        x = rng.uniform(60, 100, 2)
        norms = np.linalg.norm(field.k_h(z, x), axis=-1)
        np.testing.assert_allclose(norms, K, rtol=1e-9)

    def test_k_g_zero_at_match(self):
        np.testing.assert_allclose(
            field.k_g([1.0, 2.0], [5.0, 6.0], [5.0, 6.0]), [0.0, 0.0], atol=1e-15
        )

    def test_k_g_antipodal_reaches_2k(self):
        v = field.k_g([0.0, 0.0], [0.0, -7.0], [0.0, 5.0])
        assert np.linalg.norm(v) == pytest.approx(2 * K)

    def test_k_g_antisymmetry(self, rng):
        z = rng.uniform(-5, 5, (30, 2))
        a, b = rng.uniform(6, 30, 2), rng.uniform(-30, -6, 2)
        np.testing.assert_allclose(
            field.k_g(z, a, b), -field.k_g(z, b, a), rtol=1e-12
        )

    def test_k_g_norm_below_2k(self, rng):
        z = rng.uniform(-5, 5, (200, 2))
        a = rng.uniform(6, 30, 2)
        b = rng.uniform(-30, -6, 2)
        assert np.linalg.norm(field.k_g(z, a, b), axis=-1).max() <= 2 * K * (1 + 1e-12)

    def test_far_field_loses_antenna_dependence(self):
        s = np.array([0.6, 0.8])
        st = np.array([-0.8, 0.6])
        za, zb = np.array([3.0, -2.0]), np.array([-4.0, 1.0])
        va = field.k_g(za, 1e7 * st, 1e7 * s)
        vb = field.k_g(zb, 1e7 * st, 1e7 * s)
        want = K * (s - st)
        assert np.linalg.norm(va - want) < 1e-5 * K
        assert np.linalg.norm(va - vb) < 2e-6 * K


class TestGradientConsistency:
    def test_k_h_matches_phase_gradient(self, rng):
        x = rng.uniform(50, 80, 2)
        for _ in range(20):
            z = rng.uniform(-20, 20, 2)
            num = finite_difference_gradient(lambda p: field.phase_h(p, x), z)
            np.testing.assert_allclose(field.k_h(z, x), num, rtol=1e-5)

    def test_k_g_matches_phase_gradient(self, rng):
        xs = rng.uniform(40, 70, 2)
        xt = rng.uniform(-70, -40, 2)
        for _ in range(20):
            z = rng.uniform(-15, 15, 2)
            num = finite_difference_gradient(lambda p: field.phase_g(p, xt, xs), z)
            np.testing.assert_allclose(field.k_g(z, xt, xs), num, rtol=1e-5)


class TestPolarFrequencies:
    def test_zero_at_match(self):
        v = field.k_g_polar([3.0, 4.0], [10.0, -2.0], [10.0, -2.0])
        np.testing.assert_allclose(v, [0.0, 0.0], atol=1e-15)

    def test_chain_rule_against_cartesian(self, rng):
        # (k_r, k_theta / r_z) is the cartesian k_g rotated into the local
        # radial/tangential frame.
        for _ in range(50):
            z = rng.uniform(-30, 30, 2)
            if np.linalg.norm(z) < 1.0:
                continue
            xs = rng.uniform(35, 60, 2)
            xt = -rng.uniform(35, 60, 2)
            rp = field.k_g_polar(z, xt, xs)
            rz, tz = to_polar(z)
            e_r = np.array([np.cos(tz), np.sin(tz)])
            e_t = np.array([-np.sin(tz), np.cos(tz)])
            cart = field.k_g(z, xt, xs)
            np.testing.assert_allclose(rp[0], cart @ e_r, rtol=1e-9, atol=1e-12)
            np.testing.assert_allclose(rp[1] / rz, cart @ e_t, rtol=1e-9, atol=1e-12)

    def test_angular_component_bounded_by_2kR(self, rng):
        R = 40.0
        theta = rng.uniform(0, 2 * np.pi, 300)
        z = R * np.column_stack([np.cos(theta), np.sin(theta)])
        for _ in range(10):
            xs = rng.uniform(-0.7, 0.7, 2) * R
            xt = rng.uniform(-0.7, 0.7, 2) * R
            kt = field.k_g_polar(z, xt, xs)[:, 1]
            assert np.abs(kt).max() <= 2 * K * R * (1 + 1e-12)

    def test_arclength_accessor(self):
        z = np.array([5.0, 7.0])
        xs, xt = np.array([20.0, 1.0]), np.array([-4.0, 18.0])
        kp = field.k_g_polar(z, xt, xs)
        assert field.k_g_arclength(z, xt, xs) == pytest.approx(
            kp[1] / np.linalg.norm(z)
        )


class TestSecondDerivative:
    @pytest.mark.parametrize("axis", ["x", "y"])
    def test_matches_finite_differences_cartesian(self, rng, axis):
        i = 0 if axis == "x" else 1
        xs = rng.uniform(40, 70, 2)
        xt = rng.uniform(-70, -40, 2)
        for _ in range(20):
            z = rng.uniform(-15, 15, 2)

            def phase_1d(t):
                p = z.copy()
                p[i] = t
                return field.phase_g(p, xt, xs)

            num = finite_difference_second(phase_1d, z[i])
            got = field.phase_second_derivative(z, xt, xs, axis=axis)
            np.testing.assert_allclose(got, num, rtol=1e-5, atol=1e-10)

    @pytest.mark.parametrize("axis", ["r", "theta"])
    def test_matches_finite_differences_polar(self, rng, axis):
        xs = rng.uniform(40, 70, 2)
        xt = rng.uniform(-70, -40, 2)
        for _ in range(20):
            rz = rng.uniform(3.0, 20.0)
            tz = rng.uniform(0, 2 * np.pi)

            def phase_1d(t):
                if axis == "r":
                    p = t * np.array([np.cos(tz), np.sin(tz)])
                else:
                    p = rz * np.array([np.cos(t), np.sin(t)])
                return field.phase_g(p, xt, xs)

            t0 = rz if axis == "r" else tz
            num = finite_difference_second(phase_1d, t0)
            z = rz * np.array([np.cos(tz), np.sin(tz)])
            got = field.phase_second_derivative(z, xt, xs, axis=axis)
            np.testing.assert_allclose(got, num, rtol=1e-5, atol=1e-7 * K)

    def test_zero_when_matched(self, rng):
        z = rng.uniform(-5, 5, (10, 2))
        x = np.array([8.0, 9.0])
        for axis in ("x", "y", "theta"):
            vals = field.phase_second_derivative(z, x, x, axis=axis)
            np.testing.assert_allclose(vals, 0.0, atol=1e-15)

    def test_far_field_circular_reduction(self):
        # On a huge ring the angular second derivative collapses to a cosine
        # of the angle against the source/test separation.
        xs = np.array([-10.0, -10.0])
        xt = np.array([10.0, 10.0])
        R = 1e6
        diff = xs - xt
        r_ss = np.linalg.norm(diff)
        t_ss = np.arctan2(diff[1], diff[0])
        for tz in np.linspace(0, 2 * np.pi, 7):
            z = R * np.array([np.cos(tz), np.sin(tz)])
            got = field.phase_second_derivative(z, xt, xs, axis="theta")
            want = -K * r_ss * np.cos(tz - t_ss)
            assert got == pytest.approx(want, abs=2e-3 * K * r_ss)
