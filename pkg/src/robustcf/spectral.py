"""Frequency-domain substrate: 2D DFTs, the cosine window, and regression labels.

Grids are numpy arrays indexed [row, col]. Spectra follow the
unnormalized-forward / 1/(h*w)-inverse convention, so element-wise
spectral products and divisions map back to the spatial domain without
extra scale factors.

All functions are pure; they may be called concurrently without locking.
"""

import numpy as np

from .errors import InvalidInputError, NumericError

# Max allowed asymmetry |S[u,v] - conj(S[-u,-v])| relative to max(1, max|S|).
CONJ_SYMMETRY_TOL = 1e-9
# Max allowed imaginary residue relative to the peak of the real output.
IMAG_RESIDUE_TOL = 1e-6


def _as_real_grid(grid):
    g = np.asarray(grid, dtype=float)
    if g.ndim != 2:
        raise InvalidInputError(f"expected a 2D grid, got shape {g.shape}")
    if g.shape[0] < 1 or g.shape[1] < 1:
        raise InvalidInputError(f"grid dimensions must be positive, got {g.shape}")
    if not np.all(np.isfinite(g)):
        raise InvalidInputError("grid contains non-finite values")
    return g


def dft2(grid):
    """Unnormalized forward 2D DFT of a real grid."""
    return np.fft.fft2(_as_real_grid(grid))


def conj_flip(spectrum):
    """Index reversal S[(-u) mod h, (-v) mod w] of a spectrum."""
    return np.roll(spectrum[::-1, ::-1], (1, 1), axis=(0, 1))


def idft2(spectrum):
    """Inverse 2D DFT (1/(h*w) normalization) of a real grid's spectrum.

    The input must be conjugate-symmetric, i.e. originate from a real
    grid; the imaginary residue of the inverse transform is discarded
    after checking it is negligible against the real output.

    Raises:
        NumericError: the spectrum is asymmetric beyond tolerance, or
            the imaginary residue is too large to discard.
    """
    s = np.asarray(spectrum, dtype=complex)
    if s.ndim != 2 or s.shape[0] < 1 or s.shape[1] < 1:
        raise InvalidInputError(f"expected a 2D spectrum, got shape {s.shape}")
    scale = max(1.0, float(np.max(np.abs(s))))
    asymmetry = float(np.max(np.abs(s - np.conj(conj_flip(s)))))
    if asymmetry > CONJ_SYMMETRY_TOL * scale:
        raise NumericError(
            "spectrum is not conjugate-symmetric "
            f"(asymmetry {asymmetry:.3e}, scale {scale:.3e}); "
            "not the transform of a real grid"
        )
    out = np.fft.ifft2(s)
    imag_max = float(np.max(np.abs(out.imag)))
    real_max = float(np.max(np.abs(out.real)))
    if imag_max > IMAG_RESIDUE_TOL * real_max:
        raise NumericError(
            f"imaginary residue {imag_max:.3e} exceeds "
            f"{IMAG_RESIDUE_TOL:g} x real peak {real_max:.3e}"
        )
    return np.ascontiguousarray(out.real)


def cosine_window(height, width):
    """Separable raised-cosine (Hann) taper, zero on all four borders."""
    if height < 2 or width < 2:
        raise InvalidInputError(
            f"window dimensions must be >= 2, got {(height, width)}"
        )
    return np.outer(np.hanning(height), np.hanning(width))


def gaussian_labels(height, width, sigma):
    """Gaussian-shaped regression targets peaked at index (0, 0).

    Distances wrap around the grid because the implied training set is
    the full set of cyclic shifts; the value at shift (u, v) is
    exp(-(du^2 + dv^2) / (2 sigma^2)) with du = min(u, h - u) and
    dv = min(v, w - v).
    """
    if height < 1 or width < 1:
        raise InvalidInputError(
            f"label dimensions must be positive, got {(height, width)}"
        )
    if sigma <= 0:
        raise InvalidInputError(f"label bandwidth must be positive, got {sigma}")
    rows = np.arange(height)
    cols = np.arange(width)
    du = np.minimum(rows, height - rows)
    dv = np.minimum(cols, width - cols)
    return np.exp(-(du[:, None] ** 2 + dv[None, :] ** 2) / (2.0 * sigma * sigma))
