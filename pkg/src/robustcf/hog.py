"""31-channel cell-histogram gradient features.

The classic object-detection variant: 18 contrast-sensitive orientation
channels, 9 contrast-insensitive ones, and 4 gradient-energy channels.
Pixel gradients are snapped to the best of 9 half-circle directions
(signed by the projection), accumulated into cells with bilinear
spatial interpolation, then normalized against the four surrounding
2x2 cell-energy blocks with truncation at 0.2.  Border cells reuse the
nearest interior energies instead of being cropped, so the output grid
is exactly floor(h/cell) x floor(w/cell).
"""

import numpy as np

from .errors import InvalidInputError

NUM_CHANNELS = 31
TRUNCATION = 0.2
# Scale of the 4 texture-energy channels, 1/sqrt(18).
ENERGY_SCALE = 0.2357022603955158
_NORM_EPS = 1e-4

_ANGLES = np.arange(9) * np.pi / 9.0
_UX = np.cos(_ANGLES)
_UY = np.sin(_ANGLES)


def _pixel_gradients(image):
    """Centered differences with replicated edges; color pixels keep the
    channel with the strongest gradient."""
    right = np.concatenate([image[:, 1:], image[:, -1:]], axis=1)
    left = np.concatenate([image[:, :1], image[:, :-1]], axis=1)
    down = np.concatenate([image[1:, :], image[-1:, :]], axis=0)
    up = np.concatenate([image[:1, :], image[:-1, :]], axis=0)
    dx = right - left
    dy = down - up
    if image.shape[2] > 1:
        pick = np.argmax(dx * dx + dy * dy, axis=2)[:, :, None]
        dx = np.take_along_axis(dx, pick, axis=2)
        dy = np.take_along_axis(dy, pick, axis=2)
    return dx[:, :, 0], dy[:, :, 0]


def _orientation_bins(dx, dy):
    proj = dx[:, :, None] * _UX[None, None, :] + dy[:, :, None] * _UY[None, None, :]
    best = np.argmax(np.abs(proj), axis=2)
    signed = np.take_along_axis(proj, best[:, :, None], axis=2)[:, :, 0]
    return np.where(signed >= 0, best, best + 9)


def _cell_histograms(magnitude, bins, cell_size, grid_h, grid_w):
    """Bilinear spatial interpolation of gradient magnitude into cells."""
    h, w = magnitude.shape
    yc = (np.arange(h) + 0.5) / cell_size - 0.5
    xc = (np.arange(w) + 0.5) / cell_size - 0.5
    y0 = np.floor(yc).astype(int)
    x0 = np.floor(xc).astype(int)
    wy1 = yc - y0
    wx1 = xc - x0

    yy0 = np.broadcast_to(y0[:, None], (h, w))
    xx0 = np.broadcast_to(x0[None, :], (h, w))
    wyy1 = np.broadcast_to(wy1[:, None], (h, w))
    wxx1 = np.broadcast_to(wx1[None, :], (h, w))

    hist = np.zeros(grid_h * grid_w * 18)
    for dy_cell, wy in ((0, 1.0 - wyy1), (1, wyy1)):
        for dx_cell, wx in ((0, 1.0 - wxx1), (1, wxx1)):
            cy = yy0 + dy_cell
            cx = xx0 + dx_cell
            inside = (cy >= 0) & (cy < grid_h) & (cx >= 0) & (cx < grid_w)
            flat = (cy[inside] * grid_w + cx[inside]) * 18 + bins[inside]
            np.add.at(hist, flat, (wy * wx * magnitude)[inside])
    return hist.reshape(grid_h, grid_w, 18)


def _block_energies(energy):
    """Sums of the four 2x2 cell-energy blocks containing each cell,
    with edge replication so border cells stay normalizable."""
    padded = np.pad(energy, 1, mode="edge")
    quad = padded[:-1, :-1] + padded[:-1, 1:] + padded[1:, :-1] + padded[1:, 1:]
    return quad[:-1, :-1], quad[:-1, 1:], quad[1:, :-1], quad[1:, 1:]


def hog_features(image, cell_size=4):
    """Compute the 31-channel feature grid of an intensity image.

    Accepts (h, w) or (h, w, 3) float arrays; the grid is
    floor(h/cell_size) x floor(w/cell_size) and any leftover pixels on
    the bottom/right are ignored.
    """
    image = np.asarray(image, dtype=float)
    if image.ndim == 2:
        image = image[:, :, None]
    if image.ndim != 3:
        raise InvalidInputError(f"expected a 2D or 3D image, got shape {image.shape}")
    if cell_size < 1:
        raise InvalidInputError(f"cell size must be positive, got {cell_size}")
    grid_h = image.shape[0] // cell_size
    grid_w = image.shape[1] // cell_size
    if grid_h < 1 or grid_w < 1:
        raise InvalidInputError(
            f"image {image.shape[:2]} smaller than one {cell_size}px cell"
        )
    image = image[: grid_h * cell_size, : grid_w * cell_size]

    dx, dy = _pixel_gradients(image)
    magnitude = np.sqrt(dx * dx + dy * dy)
    bins = _orientation_bins(dx, dy)
    hist = _cell_histograms(magnitude, bins, cell_size, grid_h, grid_w)

    folded = hist[:, :, :9] + hist[:, :, 9:]
    energy = np.sum(folded * folded, axis=2)

    out = np.zeros((grid_h, grid_w, NUM_CHANNELS))
    for i, block in enumerate(_block_energies(energy)):
        norm = 1.0 / np.sqrt(block + _NORM_EPS)[:, :, None]
        signed = np.minimum(hist * norm, TRUNCATION)
        unsigned = np.minimum(folded * norm, TRUNCATION)
        out[:, :, :18] += 0.5 * signed
        out[:, :, 18:27] += 0.5 * unsigned
        out[:, :, 27 + i] = ENERGY_SCALE * np.sum(signed, axis=2)
    return out
