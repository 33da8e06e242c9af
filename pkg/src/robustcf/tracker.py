"""Per-frame tracking state machine built on the learned filter.

A state owns the model template, the model filter, and the current box.
Each frame is processed as detect (localize via the filter response at
the previous location) followed by update (retrain at the new location
and blend into the model).  States are plain values: never share one
between threads, but independent sequences may run in parallel with
independent states.
"""

import math
from dataclasses import dataclass, field, replace
from pathlib import Path

import numpy as np

from .errors import InvalidInputError, SequenceError
from .features import (
    BoundingBox,
    FeatureMap,
    apply_window,
    compute_features,
    extract_patch,
    read_image,
)
from .kernel import gaussian_correlation
from .learner import DEFAULT_KERNEL_SIGMA, LearnerParams, train
from .spectral import cosine_window, gaussian_labels, idft2

LABEL_SIGMA_FACTOR = 1.0 / 16.0


@dataclass
class TrackerParams:
    """Full tracker configuration; defaults follow the reference setup
    (lam 1e-4, tau equal to lam, padding 1.5, Gaussian kernel on
    windowed features)."""

    learner: LearnerParams = field(default_factory=LearnerParams)
    padding: float = 1.5
    interp_factor: float = 0.02
    feature: str = "hog"
    cell_size: int = 4
    kernel_sigma: float = DEFAULT_KERNEL_SIGMA
    label_sigma: float = None  # None: sqrt(grid_h * grid_w) / 16

    def __post_init__(self):
        if self.padding < 1:
            raise InvalidInputError(f"padding must be >= 1, got {self.padding}")
        if not 0.0 <= self.interp_factor <= 1.0:
            raise InvalidInputError(
                f"interp_factor must lie in [0, 1], got {self.interp_factor}"
            )
        if self.kernel_sigma <= 0:
            raise InvalidInputError(
                f"kernel_sigma must be positive, got {self.kernel_sigma}"
            )
        if self.label_sigma is not None and self.label_sigma <= 0:
            raise InvalidInputError(
                f"label_sigma must be positive, got {self.label_sigma}"
            )
        if self.feature == "grayscale":
            self.cell_size = 1


@dataclass
class TrackerState:
    """Model template and filter for one tracked target."""

    template: FeatureMap
    alphaf: np.ndarray
    box: BoundingBox
    params: TrackerParams
    window: np.ndarray
    labels: np.ndarray


@dataclass
class TrackRecord:
    """Per-frame outputs of a tracking run."""

    box: BoundingBox
    response_peak: float
    filter_peak: float


def _clamp_into_frame(box, frame_shape):
    frame_h, frame_w = frame_shape[:2]
    cx, cy = box.center
    cx = min(max(cx, 0.0), frame_w - 1.0)
    cy = min(max(cy, 0.0), frame_h - 1.0)
    return box.with_center(cx, cy)


def _windowed_features(frame, box, params, window=None):
    patch = extract_patch(frame, box, params.padding)
    fm = compute_features(patch, params.feature, params.cell_size)
    if window is None:
        window = cosine_window(fm.grid_h, fm.grid_w)
    return apply_window(fm, window), window


def init_tracker(frame, box, params=None):
    """Build a tracker state from the first frame and its target box."""
    params = params or TrackerParams()
    frame = np.asarray(frame)
    box = _clamp_into_frame(box, frame.shape)
    fm, window = _windowed_features(frame, box, params)
    sigma = params.label_sigma
    if sigma is None:
        sigma = math.sqrt(fm.grid_h * fm.grid_w) * LABEL_SIGMA_FACTOR
    labels = gaussian_labels(fm.grid_h, fm.grid_w, sigma)
    result = train(fm.data, labels, params.learner, kernel_sigma=params.kernel_sigma)
    return TrackerState(
        template=fm,
        alphaf=result.alphaf,
        box=box,
        params=params,
        window=window,
        labels=labels,
    )


def response_map(state, candidate):
    """Filter response over all cyclic shifts of the candidate features."""
    corr = gaussian_correlation(
        state.template.data, candidate.data, state.params.kernel_sigma
    )
    return idft2(corr.k_hat * state.alphaf)


def _peak_displacement(response):
    u, v = np.unravel_index(int(np.argmax(response)), response.shape)
    grid_h, grid_w = response.shape
    du = u - grid_h if u > grid_h / 2 else u
    dv = v - grid_w if v > grid_w / 2 else v
    return du, dv, float(response[u, v])


def detect(state, frame):
    """Localize the target in a new frame.

    Returns the translated box, the response peak value, and the full
    response map.  The candidate window is taken at the previous box
    center; the peak index is unwrapped (indices past half the grid are
    negative displacements) and scaled by the feature cell size.
    """
    frame = np.asarray(frame)
    candidate, _ = _windowed_features(frame, state.box, state.params, state.window)
    response = response_map(state, candidate)
    du, dv, peak = _peak_displacement(response)
    cell = state.template.cell_size
    box = _clamp_into_frame(state.box.shifted(dv * cell, du * cell), frame.shape)
    return box, peak, response


def update_model(state, frame):
    """Retrain at the current box and blend into the model.

    Both the template and the filter move toward the newly trained pair
    by the interpolation factor; 0 freezes the model, 1 replaces it.
    """
    frame = np.asarray(frame)
    fm, _ = _windowed_features(frame, state.box, state.params, state.window)
    result = train(
        fm.data, state.labels, state.params.learner,
        kernel_sigma=state.params.kernel_sigma,
    )
    rate = state.params.interp_factor
    template = FeatureMap(
        (1.0 - rate) * state.template.data + rate * fm.data,
        state.template.cell_size,
    )
    alphaf = (1.0 - rate) * state.alphaf + rate * result.alphaf
    return replace(state, template=template, alphaf=alphaf)


def filter_peak(state):
    """Peak magnitude of the spatial-domain model filter."""
    return float(np.max(np.abs(idft2(state.alphaf))))


def _load_frame(item, index):
    if isinstance(item, (str, Path)):
        return read_image(item)
    try:
        return np.asarray(item)
    except Exception as exc:  # pragma: no cover - defensive
        raise SequenceError(f"cannot interpret frame {index + 1}: {exc}") from exc


def track_sequence(frames, init_box, params=None):
    """Track through an ordered sequence of frames (arrays or paths).

    The first frame initializes the model at init_box; every later
    frame is detect-then-update.  Each record carries the frame's box,
    the response-map peak, and the spatial filter peak of the model
    after that frame.
    """
    records = []
    state = None
    for index, item in enumerate(frames):
        frame = _load_frame(item, index)
        if state is None:
            state = init_tracker(frame, init_box, params)
            peak = float(np.max(response_map(state, state.template)))
            box = state.box
        else:
            box, peak, _ = detect(state, frame)
            state = replace(state, box=box)
            state = update_model(state, frame)
        records.append(
            TrackRecord(box=box, response_peak=peak, filter_peak=filter_peak(state))
        )
    if not records:
        raise InvalidInputError("sequence contains no frames")
    return records
