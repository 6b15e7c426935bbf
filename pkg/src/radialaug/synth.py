"""Synthetic labeled image datasets for demos and end-to-end checks.

Three shape classes (disk, box, cross) drawn with seeded jitter in
position, size, and intensity over a noisy background. Everything derives
from ``(seed, class index, item index)``, so a dataset tree is a pure
function of its arguments.
"""

from __future__ import annotations

from pathlib import Path

import numpy as np

from .dataset_io import LabeledDataset, load_dataset, write_image

SHAPE_CLASSES = ("box", "cross", "disk")


def _draw_shape(kind: str, size: int, rng: np.random.Generator) -> np.ndarray:
    img = rng.integers(0, 30, (size, size)).astype(np.uint8)
    fg = int(rng.integers(180, 256))
    cy = size / 2 + rng.uniform(-size / 16, size / 16)
    cx = size / 2 + rng.uniform(-size / 16, size / 16)
    yy, xx = np.mgrid[0:size, 0:size]
    if kind == "disk":
        half = size * rng.uniform(0.24, 0.34)
        mask = (yy - cy) ** 2 + (xx - cx) ** 2 <= half**2
    elif kind == "box":
        half = size * rng.uniform(0.24, 0.34)
        mask = (np.abs(yy - cy) <= half) & (np.abs(xx - cx) <= half)
    elif kind == "cross":
        half = size * rng.uniform(0.30, 0.42)
        arm = max(1.0, half / 3.5)
        mask = ((np.abs(yy - cy) <= arm) & (np.abs(xx - cx) <= half)) | (
            (np.abs(xx - cx) <= arm) & (np.abs(yy - cy) <= half)
        )
    else:
        raise ValueError(f"unknown shape class {kind!r}")
    img[mask] = fg
    return img


def shape_image(kind: str, size: int, seed: int, index: int) -> np.ndarray:
    """One jittered image of ``kind``, deterministic in (seed, kind, index)."""
    rng = np.random.default_rng([seed, SHAPE_CLASSES.index(kind), index])
    return _draw_shape(kind, size, rng)


def make_shapes_dataset(root, n_per_class: int, size: int = 28, seed: int = 0) -> LabeledDataset:
    """Write a shapes tree under ``root`` and load it back."""
    root = Path(root)
    for kind in SHAPE_CLASSES:
        d = root / kind
        d.mkdir(parents=True, exist_ok=True)
        for i in range(n_per_class):
            write_image(shape_image(kind, size, seed, i), d / f"{kind}_{i:04d}.pgm")
    return load_dataset(root)
