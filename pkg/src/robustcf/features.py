"""Patch extraction, feature channels, and windowing.

The padded patch around the target is the base image whose cyclic
shifts form the implicit training set; everything downstream operates
on its feature grid.
"""

from dataclasses import dataclass
from pathlib import Path

import numpy as np
from PIL import Image, UnidentifiedImageError

from .errors import InvalidInputError, SequenceError
from .hog import hog_features

FEATURE_KINDS = ("grayscale", "hog")


@dataclass(frozen=True)
class BoundingBox:
    """Axis-aligned box: top-left corner (x, y) and size (w, h), 0-indexed."""

    x: float
    y: float
    w: float
    h: float

    def __post_init__(self):
        if not (self.w >= 1 and self.h >= 1):
            raise InvalidInputError(
                f"box size must be at least 1x1 pixel, got {self.w}x{self.h}"
            )
        for value in (self.x, self.y, self.w, self.h):
            if not np.isfinite(value):
                raise InvalidInputError(f"box fields must be finite, got {self}")

    @property
    def center(self):
        return (self.x + self.w / 2.0, self.y + self.h / 2.0)

    def shifted(self, dx, dy):
        return BoundingBox(self.x + dx, self.y + dy, self.w, self.h)

    def with_center(self, cx, cy):
        return BoundingBox(cx - self.w / 2.0, cy - self.h / 2.0, self.w, self.h)

    def as_tuple(self):
        return (self.x, self.y, self.w, self.h)


@dataclass
class FeatureMap:
    """Multi-channel feature grid of a patch.

    data has shape (grid_h, grid_w, channels); cell_size records how
    many pixels one grid cell spans, which converts grid displacements
    back to pixel displacements.
    """

    data: np.ndarray
    cell_size: int

    def __post_init__(self):
        self.data = np.asarray(self.data, dtype=float)
        if self.data.ndim != 3:
            raise InvalidInputError(
                f"feature data must be (h, w, channels), got shape {self.data.shape}"
            )
        if self.cell_size < 1:
            raise InvalidInputError(f"cell size must be positive, got {self.cell_size}")

    @property
    def grid_h(self):
        return self.data.shape[0]

    @property
    def grid_w(self):
        return self.data.shape[1]

    @property
    def channels(self):
        return self.data.shape[2]


def _check_frame(frame):
    frame = np.asarray(frame)
    if frame.ndim == 3 and frame.shape[2] == 1:
        frame = frame[:, :, 0]
    if frame.ndim not in (2, 3):
        raise InvalidInputError(f"expected a 2D or 3-channel frame, got shape {frame.shape}")
    if frame.ndim == 3 and frame.shape[2] != 3:
        raise InvalidInputError(f"color frames must have 3 channels, got {frame.shape[2]}")
    if frame.shape[0] < 1 or frame.shape[1] < 1:
        raise InvalidInputError(f"frame dimensions must be positive, got {frame.shape}")
    return frame


def read_image(path):
    """Decode an 8-bit grayscale or color image into a numpy frame."""
    path = Path(path)
    try:
        with Image.open(path) as img:
            if img.mode == "L":
                return np.asarray(img, dtype=np.uint8)
            return np.asarray(img.convert("RGB"), dtype=np.uint8)
    except (OSError, UnidentifiedImageError, ValueError) as exc:
        raise SequenceError(f"cannot read frame {path}: {exc}") from exc


def to_grayscale(frame):
    """Single-channel float intensities (mean over color channels)."""
    frame = _check_frame(frame)
    if frame.ndim == 3:
        return np.mean(frame.astype(float), axis=2)
    return frame.astype(float)


def extract_patch(frame, box, padding):
    """Crop the padded window centered on the box, replicating edges.

    The output size is (round(padding*h), round(padding*w)) regardless
    of where the box sits; a center outside the frame is clamped inside
    rather than aborting, and out-of-frame pixels take the nearest edge
    value.
    """
    frame = _check_frame(frame)
    if padding < 1:
        raise InvalidInputError(f"padding must be >= 1, got {padding}")
    frame_h, frame_w = frame.shape[:2]
    patch_h = int(round(padding * box.h))
    patch_w = int(round(padding * box.w))
    cx, cy = box.center
    cx = min(max(cx, 0.0), frame_w - 1.0)
    cy = min(max(cy, 0.0), frame_h - 1.0)
    ys = int(np.floor(cy)) - patch_h // 2 + np.arange(patch_h)
    xs = int(np.floor(cx)) - patch_w // 2 + np.arange(patch_w)
    np.clip(ys, 0, frame_h - 1, out=ys)
    np.clip(xs, 0, frame_w - 1, out=xs)
    return frame[np.ix_(ys, xs)]


def compute_features(patch, kind="hog", cell_size=4):
    """Feature channels of a pixel patch.

    grayscale: one channel of mean-removed intensities on the [-0.5, 0.5]
    scale, one cell per pixel (cell_size is forced to 1).
    hog: the 31-channel gradient features on a
    floor(h/cell_size) x floor(w/cell_size) grid.
    """
    patch = _check_frame(patch)
    if kind not in FEATURE_KINDS:
        raise InvalidInputError(
            f"unknown feature kind {kind!r}; expected one of {FEATURE_KINDS}"
        )
    if kind == "grayscale":
        gray = to_grayscale(patch) / 255.0 - 0.5
        gray -= gray.mean()
        return FeatureMap(gray[:, :, None], cell_size=1)
    if cell_size < 1:
        raise InvalidInputError(f"cell size must be positive, got {cell_size}")
    if patch.shape[0] < cell_size or patch.shape[1] < cell_size:
        raise InvalidInputError(
            f"patch {patch.shape[:2]} smaller than one {cell_size}px cell"
        )
    return FeatureMap(hog_features(patch.astype(float) / 255.0, cell_size), cell_size)


def apply_window(feature_map, window):
    """Multiply every channel elementwise by the window taper."""
    window = np.asarray(window, dtype=float)
    if window.shape != (feature_map.grid_h, feature_map.grid_w):
        raise InvalidInputError(
            f"window shape {window.shape} does not match feature grid "
            f"{(feature_map.grid_h, feature_map.grid_w)}"
        )
    return FeatureMap(feature_map.data * window[:, :, None], feature_map.cell_size)
