"""Shared test helpers."""

from __future__ import annotations

import hashlib
from pathlib import Path

import numpy as np


def rand_image(rng: np.random.Generator, rows: int, cols: int) -> np.ndarray:
    return rng.integers(0, 256, (rows, cols), dtype=np.uint8)


def tree_hash(root) -> str:
    """sha256 over every file's relative path and bytes, path-sorted."""
    root = Path(root)
    h = hashlib.sha256()
    for p in sorted(root.rglob("*")):
        if p.is_file():
            h.update(p.relative_to(root).as_posix().encode())
            h.update(b"\0")
            h.update(p.read_bytes())
            h.update(b"\0")
    return h.hexdigest()
