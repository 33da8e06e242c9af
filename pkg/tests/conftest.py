import numpy as np
import pytest


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


def naive_dft2(grid):
    """Direct O(n^2) DFT summation; the independent transform oracle."""
    h, w = grid.shape
    out = np.zeros((h, w), dtype=complex)
    for u in range(h):
        for v in range(w):
            acc = 0.0 + 0.0j
            for m in range(h):
                for n in range(w):
                    acc += grid[m, n] * np.exp(-2j * np.pi * (u * m / h + v * n / w))
            out[u, v] = acc
    return out


def naive_idft2(spectrum):
    """Direct inverse DFT summation with 1/(h*w) normalization."""
    h, w = spectrum.shape
    out = np.zeros((h, w), dtype=complex)
    for m in range(h):
        for n in range(w):
            acc = 0.0 + 0.0j
            for u in range(h):
                for v in range(w):
                    acc += spectrum[u, v] * np.exp(2j * np.pi * (u * m / h + v * n / w))
            out[m, n] = acc / (h * w)
    return out
