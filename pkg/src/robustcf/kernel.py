"""Gaussian kernel correlation over all cyclic shifts, computed via the FFT.

The circulant structure of the shifted training set means the full
kernel matrix never has to be materialized: its first row (the kernel
correlation map) and that row's spectrum carry everything the solver
needs.  An explicit dense construction is provided for test oracles
only.
"""

from typing import NamedTuple

import numpy as np

from .errors import InvalidInputError
from .spectral import dft2, idft2

# Oracle guard: explicit matrices are quadratic in the shift count.
MAX_EXPLICIT_GRID = 16


class KernelCorrelation(NamedTuple):
    """Kernel values per cyclic shift (spatial map) and their spectrum."""

    k: np.ndarray
    k_hat: np.ndarray


def _channels_last(x):
    x = np.asarray(x, dtype=float)
    if x.ndim == 2:
        x = x[:, :, None]
    if x.ndim != 3:
        raise InvalidInputError(
            f"expected (h, w) or (h, w, channels) features, got shape {x.shape}"
        )
    return x


def gaussian_correlation(a, b, sigma):
    """Gaussian kernel between every cyclic shift of `a` and the signal `b`.

    k[u, v] = exp(-max(0, ||a||^2 + ||b||^2 - 2*corr(a, b)[u, v]) / (sigma^2 N))

    where corr sums the per-channel circular cross-correlations (via the
    FFT) and N is the total element count, which makes sigma independent
    of the patch size.  The inner clamp removes negative floating-point
    residue; squared distances are nonnegative.
    """
    if sigma <= 0:
        raise InvalidInputError(f"kernel bandwidth must be positive, got {sigma}")
    same = b is a
    a3 = _channels_last(a)
    b3 = a3 if same else _channels_last(b)
    if a3.shape != b3.shape:
        raise InvalidInputError(
            f"feature shapes differ: {a3.shape} vs {b3.shape}"
        )
    a_hat = np.fft.fft2(a3, axes=(0, 1))
    b_hat = a_hat if same else np.fft.fft2(b3, axes=(0, 1))
    cross = np.sum(np.conj(a_hat) * b_hat, axis=2)
    corr = idft2(cross)
    sq_a = float(np.sum(a3 * a3))
    sq_b = sq_a if same else float(np.sum(b3 * b3))
    dist = np.maximum(0.0, sq_a + sq_b - 2.0 * corr)
    k = np.exp(-dist / (sigma * sigma * a3.size))
    return KernelCorrelation(k=k, k_hat=dft2(k))


def explicit_kernel_matrix(a, sigma):
    """Dense kernel matrix over all cyclic shifts (TEST ORACLE ONLY).

    Row/column index i enumerates shifts as i = u * w + v.  The result
    is circulant and symmetric; its eigenvalues equal the DFT of its
    first row, which is the identity the fast solver relies on.
    """
    a3 = _channels_last(a)
    h, w = a3.shape[:2]
    if h > MAX_EXPLICIT_GRID or w > MAX_EXPLICIT_GRID:
        raise InvalidInputError(
            f"explicit kernel matrix refused for grids over "
            f"{MAX_EXPLICIT_GRID}x{MAX_EXPLICIT_GRID}, got {(h, w)}"
        )
    if sigma <= 0:
        raise InvalidInputError(f"kernel bandwidth must be positive, got {sigma}")
    shifts = np.stack(
        [
            np.roll(a3, (u, v), axis=(0, 1)).ravel()
            for u in range(h)
            for v in range(w)
        ]
    )
    sq = np.sum(shifts * shifts, axis=1)
    gram = shifts @ shifts.T
    dist = np.maximum(0.0, sq[:, None] + sq[None, :] - 2.0 * gram)
    return np.exp(-dist / (sigma * sigma * a3.size))
