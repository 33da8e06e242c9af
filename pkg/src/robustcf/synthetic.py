"""Seeded synthetic scenes for self-tests and benchmarks.

Textures are smoothed uniform noise so correlation peaks are sharp but
not degenerate; everything is deterministic given the seed.
"""

from pathlib import Path

import numpy as np
from PIL import Image

from .features import BoundingBox


def _smooth(values, passes=2, width=5):
    """Separable moving-average blur (reflect padding) along both axes."""
    out = values.astype(float)
    kernel = np.ones(width) / width
    for _ in range(passes):
        for axis in (0, 1):
            moved = np.moveaxis(out, axis, 0)
            padded = np.pad(moved, [(width // 2, width // 2)] + [(0, 0)] * (moved.ndim - 1),
                            mode="reflect")
            smoothed = np.apply_along_axis(
                lambda col: np.convolve(col, kernel, mode="valid"), 0, padded
            )
            out = np.moveaxis(smoothed, 0, axis)
    return out


def texture(height, width, seed, low=30, high=225):
    """Smooth random texture scaled into [low, high], uint8."""
    rng = np.random.default_rng(seed)
    noise = _smooth(rng.uniform(0.0, 1.0, size=(height, width)))
    noise -= noise.min()
    peak = noise.max()
    if peak > 0:
        noise /= peak
    return (low + noise * (high - low)).astype(np.uint8)


def translating_sequence(
    n_frames=30,
    scene_size=(128, 128),
    target_size=(64, 64),
    start=(4, 32),
    step=(2, 0),
    seed=0,
):
    """Textured target sliding across a lower-contrast background.

    start and step are (x, y) pixel offsets of the target's top-left
    corner.  Returns (frames, ground-truth boxes); the target must stay
    inside the scene for every frame.
    """
    scene_h, scene_w = scene_size
    target_h, target_w = target_size
    background = texture(scene_h, scene_w, seed=[seed, 0], low=90, high=165)
    target = texture(target_h, target_w, seed=[seed, 1], low=10, high=245)
    frames = []
    boxes = []
    for t in range(n_frames):
        x = start[0] + t * step[0]
        y = start[1] + t * step[1]
        if x < 0 or y < 0 or x + target_w > scene_w or y + target_h > scene_h:
            raise ValueError(f"target leaves the scene at frame {t + 1}")
        frame = background.copy()
        frame[y : y + target_h, x : x + target_w] = target
        frames.append(frame)
        boxes.append(BoundingBox(float(x), float(y), float(target_w), float(target_h)))
    return frames, boxes


def static_sequence(n_frames=10, scene_size=(96, 96), target_size=(40, 40), seed=0):
    """The same scene repeated; the target never moves."""
    frames, boxes = translating_sequence(
        n_frames=1,
        scene_size=scene_size,
        target_size=target_size,
        start=((scene_size[1] - target_size[1]) // 2, (scene_size[0] - target_size[0]) // 2),
        step=(0, 0),
        seed=seed,
    )
    return [frames[0].copy() for _ in range(n_frames)], boxes * n_frames


def write_sequence(directory, frames, boxes):
    """Save frames as PNGs plus a 1-indexed ground-truth file.

    Produces the on-disk layout the harness ingests: lexicographically
    ordered images and one x,y,w,h line per frame.
    """
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    for i, frame in enumerate(frames):
        Image.fromarray(frame).save(directory / f"{i + 1:04d}.png")
    gt_path = directory / "groundtruth_rect.txt"
    with open(gt_path, "w", encoding="ascii") as handle:
        for box in boxes:
            handle.write(
                f"{box.x + 1:.0f},{box.y + 1:.0f},{box.w:.0f},{box.h:.0f}\n"
            )
    return directory, gt_path
