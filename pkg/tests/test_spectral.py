import math

import numpy as np
import pytest

from robustcf.errors import InvalidInputError, NumericError
from robustcf.spectral import conj_flip, cosine_window, dft2, gaussian_labels, idft2

from conftest import naive_dft2, naive_idft2


class TestDft2:
    def test_constant_grid_is_dc_only(self):
        s = dft2(np.full((5, 7), 3.25))
        assert s[0, 0] == pytest.approx(5 * 7 * 3.25)
        rest = s.copy()
        rest[0, 0] = 0
        assert np.max(np.abs(rest)) < 1e-10

    def test_impulse_transforms_to_all_ones(self):
        g = np.zeros((4, 6))
        g[0, 0] = 1.0
        assert np.allclose(dft2(g), np.ones((4, 6)), atol=1e-12)

    def test_matches_naive_summation(self, rng):
        g = rng.standard_normal((8, 8))
        assert np.max(np.abs(dft2(g) - naive_dft2(g))) < 1e-10

    def test_rejects_empty_and_bad_shapes(self):
        with pytest.raises(InvalidInputError):
            dft2(np.zeros((0, 4)))
        with pytest.raises(InvalidInputError):
            dft2(np.zeros(5))
        with pytest.raises(InvalidInputError):
            dft2(np.array([[1.0, np.nan]]))


class TestIdft2:
    def test_all_ones_spectrum_is_impulse(self):
        g = idft2(np.ones((4, 6), dtype=complex))
        expected = np.zeros((4, 6))
        expected[0, 0] = 1.0
        assert np.allclose(g, expected, atol=1e-12)

    def test_roundtrip_identity(self, rng):
        g = rng.standard_normal((9, 5))
        err = np.max(np.abs(idft2(dft2(g)) - g))
        assert err <= 1e-10 * np.max(np.abs(g))

    def test_shifted_impulse_spectrum(self, rng):
        h, w, u0, v0 = 6, 5, 2, 3
        uu, vv = np.meshgrid(np.arange(h), np.arange(w), indexing="ij")
        spectrum = np.exp(-2j * np.pi * (uu * u0 / h + vv * v0 / w))
        got = idft2(spectrum)
        expected = naive_idft2(spectrum)
        assert np.max(np.abs(got - expected.real)) < 1e-10
        assert got[u0, v0] == pytest.approx(1.0)

    def test_rejects_asymmetric_spectrum(self, rng):
        s = dft2(rng.standard_normal((6, 6)))
        s[1, 2] += 1.0
        with pytest.raises(NumericError):
            idft2(s)

    def test_rejects_excess_imaginary_residue(self, rng):
        # Symmetric to within tolerance but with output dominated by the
        # imaginary residue of a tiny asymmetric perturbation.
        noise = (rng.standard_normal((6, 6)) + 1j * rng.standard_normal((6, 6)))
        with pytest.raises(NumericError):
            idft2(noise * 1e-10)


class TestProperties:
    def test_parseval(self, rng):
        for _ in range(20):
            g = rng.standard_normal((rng.integers(2, 16), rng.integers(2, 16)))
            spatial = np.sum(g * g)
            spectral = np.sum(np.abs(dft2(g)) ** 2) / g.size
            assert abs(spatial - spectral) <= 1e-9 * spatial

    def test_linearity(self, rng):
        g1 = rng.standard_normal((7, 11))
        g2 = rng.standard_normal((7, 11))
        lhs = dft2(2.5 * g1 - 1.25 * g2)
        rhs = 2.5 * dft2(g1) - 1.25 * dft2(g2)
        assert np.max(np.abs(lhs - rhs)) <= 1e-10 * np.max(np.abs(rhs))

    def test_conj_flip_indexing(self, rng):
        s = dft2(rng.standard_normal((5, 8)))
        flipped = conj_flip(s)
        h, w = s.shape
        for u in range(h):
            for v in range(w):
                assert flipped[u, v] == s[(-u) % h, (-v) % w]


class TestCosineWindow:
    def test_3x3_center_one_border_zero(self):
        win = cosine_window(3, 3)
        assert win[1, 1] == pytest.approx(1.0)
        assert np.all(win[0, :] == 0) and np.all(win[-1, :] == 0)
        assert np.all(win[:, 0] == 0) and np.all(win[:, -1] == 0)

    def test_range(self):
        win = cosine_window(9, 13)
        assert win.max() <= 1.0
        assert win.min() == 0.0

    def test_4x4_matches_product_formula(self):
        win = cosine_window(4, 4)
        for u in range(4):
            for v in range(4):
                expected = 0.25 * (1 - math.cos(2 * math.pi * u / 3)) * (
                    1 - math.cos(2 * math.pi * v / 3)
                )
                assert win[u, v] == pytest.approx(expected, abs=1e-12)

    def test_rejects_degenerate_sizes(self):
        with pytest.raises(InvalidInputError):
            cosine_window(1, 5)
        with pytest.raises(InvalidInputError):
            cosine_window(5, 0)


class TestGaussianLabels:
    def test_peak_at_origin(self):
        for h, w in [(4, 4), (7, 9), (1, 5)]:
            y = gaussian_labels(h, w, 1.5)
            assert y[0, 0] == 1.0
            assert y.max() == 1.0

    def test_wrapped_symmetry(self):
        y = gaussian_labels(8, 6, 2.0)
        for u in range(1, 8):
            for v in range(1, 6):
                assert y[u, v] == pytest.approx(y[8 - u, 6 - v], abs=1e-15)

    def test_known_value(self):
        # distance (2, 0) with sigma 2: exp(-4/8)
        y = gaussian_labels(8, 8, 2.0)
        assert y[2, 0] == pytest.approx(math.exp(-0.5), abs=1e-12)

    def test_range(self):
        y = gaussian_labels(12, 10, 0.7)
        assert np.all(y > 0) and np.all(y <= 1)

    def test_rejects_bad_sigma(self):
        with pytest.raises(InvalidInputError):
            gaussian_labels(4, 4, 0.0)
