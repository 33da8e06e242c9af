import numpy as np
import pytest

from robustcf.errors import InvalidInputError
from robustcf.kernel import explicit_kernel_matrix, gaussian_correlation
from robustcf.spectral import dft2


def shift_oracle(a, b, sigma):
    """Kernel map by explicit cyclic shifting; the independent oracle."""
    h, w = a.shape[:2]
    n = a.size
    out = np.zeros((h, w))
    for u in range(h):
        for v in range(w):
            diff = np.roll(a, (u, v), axis=(0, 1)) - b
            out[u, v] = np.exp(-np.sum(diff * diff) / (sigma * sigma * n))
    return out


class TestGaussianCorrelation:
    def test_self_correlation_peak_is_one(self, rng):
        a = rng.standard_normal((6, 6))
        k = gaussian_correlation(a, a, 0.5).k
        assert k[0, 0] == pytest.approx(1.0, abs=1e-12)
        assert np.argmax(k) == 0

    def test_zero_signals_give_all_ones(self):
        z = np.zeros((4, 5))
        assert np.allclose(gaussian_correlation(z, z, 0.5).k, 1.0)

    def test_matches_shift_oracle(self, rng):
        a = rng.standard_normal((6, 6))
        b = rng.standard_normal((6, 6))
        k = gaussian_correlation(a, b, 0.6).k
        assert np.max(np.abs(k - shift_oracle(a, b, 0.6))) < 1e-10

    def test_multichannel_matches_shift_oracle(self, rng):
        a = rng.standard_normal((5, 4, 3))
        b = rng.standard_normal((5, 4, 3))
        k = gaussian_correlation(a, b, 0.5).k
        h, w = 5, 4
        expected = np.zeros((h, w))
        for u in range(h):
            for v in range(w):
                diff = np.roll(a, (u, v), axis=(0, 1)) - b
                expected[u, v] = np.exp(-np.sum(diff * diff) / (0.25 * a.size))
        assert np.max(np.abs(k - expected)) < 1e-10

    def test_swap_symmetry(self, rng):
        a = rng.standard_normal((5, 7))
        b = rng.standard_normal((5, 7))
        kab = gaussian_correlation(a, b, 0.5).k
        kba = gaussian_correlation(b, a, 0.5).k
        for u in range(5):
            for v in range(7):
                assert kab[u, v] == pytest.approx(
                    kba[(-u) % 5, (-v) % 7], abs=1e-10
                )

    def test_range(self, rng):
        a = rng.standard_normal((6, 6))
        b = rng.standard_normal((6, 6))
        k = gaussian_correlation(a, b, 0.5).k
        assert np.all(k > 0) and np.all(k <= 1)

    def test_spectrum_is_transform_of_map(self, rng):
        a = rng.standard_normal((6, 6))
        corr = gaussian_correlation(a, a, 0.5)
        assert np.allclose(corr.k_hat, dft2(corr.k))

    def test_shape_mismatch_rejected(self, rng):
        with pytest.raises(InvalidInputError):
            gaussian_correlation(np.zeros((4, 4)), np.zeros((4, 5)), 0.5)
        with pytest.raises(InvalidInputError):
            gaussian_correlation(np.zeros((4, 4, 2)), np.zeros((4, 4, 3)), 0.5)

    def test_bad_sigma_rejected(self):
        with pytest.raises(InvalidInputError):
            gaussian_correlation(np.zeros((4, 4)), np.zeros((4, 4)), 0.0)


class TestExplicitKernelMatrix:
    def test_two_element_signal(self):
        a = np.array([[1.0], [2.0]])
        dense = explicit_kernel_matrix(a, 0.5)
        assert dense.shape == (2, 2)
        assert dense[0, 0] == pytest.approx(1.0)
        assert dense[1, 1] == pytest.approx(1.0)
        assert dense[0, 1] == pytest.approx(dense[1, 0])

    def test_first_row_is_correlation_map(self, rng):
        a = rng.standard_normal((4, 5))
        dense = explicit_kernel_matrix(a, 0.5)
        k = gaussian_correlation(a, a, 0.5).k
        assert np.max(np.abs(dense[0] - k.ravel())) < 1e-12

    def test_circulant_and_symmetric(self, rng):
        a = rng.standard_normal((3, 4))
        dense = explicit_kernel_matrix(a, 0.5)
        assert np.allclose(dense, dense.T)

    def test_eigenvalues_match_spectrum(self, rng):
        for _ in range(10):
            a = rng.uniform(-0.5, 0.5, size=(5, 5))
            dense = explicit_kernel_matrix(a, 0.5)
            eigs = np.sort(np.linalg.eigvalsh(dense))
            k_hat = gaussian_correlation(a, a, 0.5).k_hat
            assert np.max(np.abs(k_hat.imag)) < 1e-8
            assert np.max(np.abs(eigs - np.sort(k_hat.real, axis=None))) < 1e-8

    def test_refuses_large_grids(self):
        with pytest.raises(InvalidInputError):
            explicit_kernel_matrix(np.zeros((17, 4)), 0.5)
