"""Pixel addressing, rounding, and fill rules shared by every transform.

Images are 2-D ``uint8`` numpy arrays indexed ``[row, col]``; the first
index is the row. All functions here are pure and total unless documented
otherwise.
"""

from __future__ import annotations

from typing import NamedTuple

import numpy as np

FILL_ZERO = "zero"
FILL_CLAMP = "clamp"
FILL_MODES = (FILL_ZERO, FILL_CLAMP)


class Pole(NamedTuple):
    """Pixel coordinate used as the origin of polar sampling."""

    u: int  # row index
    v: int  # col index


def require_image(img: np.ndarray) -> np.ndarray:
    """Validate that ``img`` is a non-empty 2-D uint8 array and return it."""
    if not isinstance(img, np.ndarray):
        raise TypeError(f"image must be a numpy array, got {type(img).__name__}")
    if img.ndim != 2:
        raise ValueError(f"image must be 2-D, got shape {img.shape}")
    if img.dtype != np.uint8:
        raise ValueError(f"image must be uint8, got {img.dtype}")
    if img.shape[0] < 1 or img.shape[1] < 1:
        raise ValueError(f"image must have positive dimensions, got {img.shape}")
    return img


def check_fill(fill: str) -> str:
    if fill not in FILL_MODES:
        raise ValueError(f"fill must be one of {FILL_MODES}, got {fill!r}")
    return fill


def check_pole(img: np.ndarray, pole) -> Pole:
    """Validate ``pole`` against ``img`` bounds and normalize to :class:`Pole`."""
    u, v = int(pole[0]), int(pole[1])
    rows, cols = img.shape
    if not (0 <= u < rows and 0 <= v < cols):
        raise ValueError(f"pole ({u}, {v}) outside image of shape {img.shape}")
    return Pole(u, v)


def get_pixel(img: np.ndarray, r: int, c: int) -> int:
    """Return the intensity at (r, c); raises IndexError when out of range."""
    rows, cols = img.shape
    if not (0 <= r < rows and 0 <= c < cols):
        raise IndexError(f"pixel ({r}, {c}) outside image of shape {img.shape}")
    return int(img[r, c])


def round_half_away(t):
    """Round to the nearest integer, ties away from zero.

    ``floor(t + 0.5)`` for t >= 0 and ``ceil(t - 0.5)`` for t < 0. Accepts a
    scalar or an ndarray; returns ``int`` or an int64 array accordingly.
    This single definition is used by every resampling path so that scalar
    and vectorized code round identically.
    """
    a = np.asarray(t, dtype=np.float64)
    if not np.all(np.isfinite(a)):
        raise ValueError("round_half_away requires finite input")
    out = (np.sign(a) * np.floor(np.abs(a) + 0.5)).astype(np.int64)
    if np.isscalar(t) or a.ndim == 0:
        return int(out)
    return out


def resolve_sample(img: np.ndarray, r: int, c: int, fill: str = FILL_ZERO) -> int:
    """Sample (r, c) with out-of-bounds handling; never raises.

    In bounds returns the pixel value; out of bounds returns 0 for the
    ``zero`` policy, or the value at the coordinate clamped into range for
    the ``clamp`` policy.
    """
    check_fill(fill)
    rows, cols = img.shape
    if 0 <= r < rows and 0 <= c < cols:
        return int(img[r, c])
    if fill == FILL_ZERO:
        return 0
    return int(img[min(max(r, 0), rows - 1), min(max(c, 0), cols - 1)])


def nn_resize(img: np.ndarray, out_rows: int, out_cols: int) -> np.ndarray:
    """Nearest-neighbor resize to (out_rows, out_cols).

    Source index for output cell i is ``floor((i + 0.5) * src / dst)``,
    computed in exact integer arithmetic.
    """
    require_image(img)
    if out_rows < 1 or out_cols < 1:
        raise ValueError("output dimensions must be positive")
    rows, cols = img.shape
    ri = (2 * np.arange(out_rows) + 1) * rows // (2 * out_rows)
    ci = (2 * np.arange(out_cols) + 1) * cols // (2 * out_cols)
    return img[np.ix_(ri, ci)]
