"""Benchmark protocol: ingestion, metrics, noise trials, and reports.

Implements the standard sequence evaluation: center-location-error
precision, overlap-ratio success, curve AUC, the peak-value sensitivity
statistic, and salt-and-pepper contamination runs.  Reports serialize
to JSON with per-curve CSV side files.
"""

import json
import re
import time
from dataclasses import asdict, dataclass
from pathlib import Path

import numpy as np
from PIL import Image, UnidentifiedImageError

from .errors import IngestionError, InvalidInputError, UndefinedSensitivityError
from .features import BoundingBox, read_image
from .tracker import TrackerParams, track_sequence

# Thresholds: 0..50 px step 1 for precision, 0..1 step 0.02 for success.
PRECISION_THRESHOLDS = np.arange(51, dtype=float)
SUCCESS_THRESHOLDS = np.arange(51, dtype=float) / 50.0

HEADLINE_PRECISION_PX = 20
HEADLINE_SUCCESS_INDEX = 25  # threshold 0.5

IMAGE_EXTENSIONS = (".png", ".jpg", ".jpeg", ".bmp")

SENSITIVITY_MODES = ("norm-first", "center-first")


@dataclass
class SequenceSpec:
    """Ordered frame paths with one ground-truth box per frame."""

    name: str
    frame_paths: list
    boxes: list


def _parse_gt_line(line, line_no, path):
    fields = [f for f in re.split(r"[,\s]+", line.strip()) if f]
    if len(fields) != 4:
        raise IngestionError(
            f"{path}:{line_no}: expected 4 fields x,y,w,h, got {len(fields)}"
        )
    try:
        x, y, w, h = (float(f) for f in fields)
    except ValueError as exc:
        raise IngestionError(f"{path}:{line_no}: malformed number ({exc})") from exc
    try:
        # Ground-truth files are 1-indexed; internal boxes are 0-indexed.
        return BoundingBox(x - 1.0, y - 1.0, w, h)
    except InvalidInputError as exc:
        raise IngestionError(f"{path}:{line_no}: {exc}") from exc


def load_sequence(directory, gt_path, name=None):
    """Ingest a frame directory plus its ground-truth text file."""
    directory = Path(directory)
    gt_path = Path(gt_path)
    if not directory.is_dir():
        raise IngestionError(f"sequence directory not found: {directory}")
    frame_paths = sorted(
        p for p in directory.iterdir()
        if p.is_file() and p.suffix.lower() in IMAGE_EXTENSIONS
    )
    if not frame_paths:
        raise IngestionError(f"no image frames found in {directory}")
    for path in frame_paths:
        # header-only decode; catches unreadable frames at ingestion time
        try:
            with Image.open(path) as img:
                img.size  # noqa: B018 - forces the header parse
        except (OSError, UnidentifiedImageError, ValueError) as exc:
            raise IngestionError(f"unreadable frame {path}: {exc}") from exc
    if not gt_path.is_file():
        raise IngestionError(f"ground-truth file not found: {gt_path}")
    boxes = []
    with open(gt_path, "r", encoding="ascii", errors="replace") as handle:
        for line_no, line in enumerate(handle, start=1):
            if not line.strip():
                continue
            boxes.append(_parse_gt_line(line, line_no, gt_path))
    if len(boxes) != len(frame_paths):
        raise IngestionError(
            f"{gt_path}: {len(boxes)} ground-truth lines for "
            f"{len(frame_paths)} frames in {directory}"
        )
    return SequenceSpec(
        name=name or directory.name,
        frame_paths=[str(p) for p in frame_paths],
        boxes=boxes,
    )


def cle(a, b):
    """Center location error: Euclidean distance between box centers."""
    (ax, ay), (bx, by) = a.center, b.center
    return float(np.hypot(ax - bx, ay - by))


def overlap_ratio(a, b):
    """Intersection area over union area of two boxes; 0 when disjoint."""
    ix = max(0.0, min(a.x + a.w, b.x + b.w) - max(a.x, b.x))
    iy = max(0.0, min(a.y + a.h, b.y + b.h) - max(a.y, b.y))
    inter = ix * iy
    union = a.w * a.h + b.w * b.h - inter
    return float(inter / union) if union > 0 else 0.0


def _check_series(values, what):
    values = np.asarray(values, dtype=float)
    if values.ndim != 1 or values.size == 0:
        raise InvalidInputError(f"{what} must be a non-empty 1D series")
    return values


def precision_curve(cles):
    """Fraction of frames with error strictly below each threshold."""
    cles = _check_series(cles, "center errors")
    return np.mean(cles[None, :] < PRECISION_THRESHOLDS[:, None], axis=1)


def success_curve(overlaps):
    """Fraction of frames with overlap strictly above each threshold."""
    overlaps = _check_series(overlaps, "overlap ratios")
    return np.mean(overlaps[None, :] > SUCCESS_THRESHOLDS[:, None], axis=1)


def auc(curve):
    """Mean of the success curve over its threshold grid."""
    curve = _check_series(curve, "curve")
    return float(np.mean(curve))


def sensitivity(peaks, mode="norm-first"):
    """Spread of per-frame peak values; lower means a steadier filter.

    norm-first (default): peaks are divided by their squared norm, then
    the squared deviations from the mean are summed.  center-first:
    peaks are mean-centered first and the centered values are divided by
    their own squared norm.
    """
    if mode not in SENSITIVITY_MODES:
        raise InvalidInputError(
            f"unknown sensitivity mode {mode!r}; expected one of {SENSITIVITY_MODES}"
        )
    peaks = _check_series(peaks, "peak values")
    if peaks.size < 2:
        raise InvalidInputError("sensitivity needs at least 2 peak values")
    if mode == "norm-first":
        denom = float(np.sum(peaks * peaks))
        if denom == 0.0:
            raise UndefinedSensitivityError("sensitivity undefined for all-zero peaks")
        scaled = peaks / denom
        return float(np.sum((scaled - scaled.mean()) ** 2))
    centered = peaks - peaks.mean()
    denom = float(np.sum(centered * centered))
    if denom == 0.0:
        return 0.0
    return float(np.sum((centered / denom) ** 2))


def corrupt_pixels(frame, fraction, seed):
    """Salt-and-pepper contamination of a fixed fraction of pixels.

    Selects round(fraction * pixel_count) distinct positions with a
    seeded generator and sets each (all channels) to 0 or the maximum
    intensity with equal probability.  Deterministic for a given seed.
    """
    if not 0.0 <= fraction <= 1.0:
        raise InvalidInputError(f"noise fraction must lie in [0, 1], got {fraction}")
    frame = np.asarray(frame)
    out = frame.copy()
    count = int(round(fraction * frame.shape[0] * frame.shape[1]))
    if count == 0:
        return out
    high = np.iinfo(frame.dtype).max if np.issubdtype(frame.dtype, np.integer) else 1.0
    rng = np.random.default_rng(seed)
    flat_positions = rng.choice(frame.shape[0] * frame.shape[1], size=count, replace=False)
    values = rng.integers(0, 2, size=count)
    rows, cols = np.unravel_index(flat_positions, frame.shape[:2])
    fill = np.asarray(values * high, dtype=out.dtype)
    out[rows, cols] = fill[:, None] if out.ndim == 3 else fill
    return out


@dataclass
class EvalReport:
    """Everything one evaluation run produces, JSON-serializable."""

    sequence: str
    loss: str
    noise_fraction: float
    seed: int
    n_frames: int
    boxes: list
    cle: list
    overlap: list
    precision: list
    success: list
    auc: float
    precision_at_20: float
    success_at_05: float
    filter_peaks: list
    response_peaks: list
    sensitivity_filter: float
    sensitivity_response: float
    fps: float

    def to_dict(self):
        return asdict(self)

    @classmethod
    def from_dict(cls, data):
        return cls(**data)

    def save_json(self, path):
        with open(path, "w", encoding="ascii") as handle:
            json.dump(self.to_dict(), handle, indent=2, sort_keys=True)
            handle.write("\n")

    @classmethod
    def load_json(cls, path):
        with open(path, "r", encoding="ascii") as handle:
            return cls.from_dict(json.load(handle))


def _write_curve_csv(path, thresholds, values):
    with open(path, "w", encoding="ascii") as handle:
        handle.write("threshold,value\n")
        for t, v in zip(thresholds, values):
            handle.write(f"{t!r},{v!r}\n")


def report_basename(sequence, loss, noise_fraction):
    return f"{sequence}.{loss}.{noise_fraction:.2f}"


def write_report_files(report, out_dir):
    """Emit <sequence>.<loss>.<noise>.json plus the two curve CSVs."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    base = report_basename(report.sequence, report.loss, report.noise_fraction)
    json_path = out_dir / f"{base}.json"
    report.save_json(json_path)
    precision_path = out_dir / f"{base}.precision.csv"
    success_path = out_dir / f"{base}.success.csv"
    _write_curve_csv(precision_path, PRECISION_THRESHOLDS, report.precision)
    _write_curve_csv(success_path, SUCCESS_THRESHOLDS, report.success)
    return json_path, precision_path, success_path


def _prepare_frames(spec, noise_fraction, seed):
    frames = []
    for index, item in enumerate(spec.frame_paths):
        frame = read_image(item) if isinstance(item, (str, Path)) else np.asarray(item)
        if index > 0 and noise_fraction > 0:
            # The initialization frame stays clean; each later frame gets
            # its own stream derived from (seed, frame index).
            frame = corrupt_pixels(frame, noise_fraction, seed=[seed, index])
        frames.append(frame)
    return frames


def run_eval(spec, params=None, noise_fraction=0.0, seed=0, sensitivity_mode="norm-first"):
    """Track a sequence (optionally noise-contaminated) and score it."""
    params = params or TrackerParams()
    if len(spec.frame_paths) != len(spec.boxes):
        raise InvalidInputError(
            f"{len(spec.boxes)} ground-truth boxes for {len(spec.frame_paths)} frames"
        )
    frames = _prepare_frames(spec, noise_fraction, seed)
    start = time.perf_counter()
    records = track_sequence(frames, spec.boxes[0], params)
    elapsed = time.perf_counter() - start
    cles = [cle(r.box, gt) for r, gt in zip(records, spec.boxes)]
    overlaps = [overlap_ratio(r.box, gt) for r, gt in zip(records, spec.boxes)]
    precision = precision_curve(cles)
    success = success_curve(overlaps)
    filter_peaks = [r.filter_peak for r in records]
    response_peaks = [r.response_peak for r in records]
    return EvalReport(
        sequence=spec.name,
        loss=params.learner.loss.value,
        noise_fraction=float(noise_fraction),
        seed=int(seed),
        n_frames=len(records),
        boxes=[list(r.box.as_tuple()) for r in records],
        cle=[float(v) for v in cles],
        overlap=[float(v) for v in overlaps],
        precision=[float(v) for v in precision],
        success=[float(v) for v in success],
        auc=auc(success),
        precision_at_20=float(precision[HEADLINE_PRECISION_PX]),
        success_at_05=float(success[HEADLINE_SUCCESS_INDEX]),
        filter_peaks=[float(v) for v in filter_peaks],
        response_peaks=[float(v) for v in response_peaks],
        sensitivity_filter=sensitivity(filter_peaks, sensitivity_mode),
        sensitivity_response=sensitivity(response_peaks, sensitivity_mode),
        fps=len(records) / elapsed if elapsed > 0 else float("inf"),
    )
