"""Affine warp baseline: translation, rotation, scaling, and shearing.

Coordinates are homogeneous (row, col, 1) vectors; the ``x`` axis in the
parameter names is the row axis and ``y`` is the column axis, matching the
offset naming used by the radial transform. Warping uses inverse (pull)
mapping with nearest-neighbor sampling: every output pixel looks up its
source coordinate through the inverted matrix, so the result has no holes.

Positive rotation turns counterclockwise in the usual display orientation
(rows increase downward): ``(r, c) -> (r cos a + c sin a, -r sin a + c cos a)``
about the configured center.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from math import cos, isfinite, sin

import numpy as np

from .raster import FILL_ZERO, check_fill, require_image, round_half_away

_DET_EPS = 1e-12


@dataclass(frozen=True)
class AffineParams:
    """One concrete warp. Scale factors must be strictly positive; the
    composed matrix must be invertible. ``center`` is the (row, col) point
    rotation/scale/shear pivot about; ``None`` means the image center,
    resolved when the warp is applied."""

    rotation: float = 0.0
    scale_x: float = 1.0
    scale_y: float = 1.0
    shear_x: float = 0.0
    shear_y: float = 0.0
    translate_r: float = 0.0
    translate_c: float = 0.0
    center: tuple[float, float] | None = None

    def __post_init__(self):
        vals = (self.rotation, self.scale_x, self.scale_y, self.shear_x,
                self.shear_y, self.translate_r, self.translate_c)
        if not all(isfinite(v) for v in vals):
            raise ValueError("affine parameters must be finite")
        if self.scale_x <= 0 or self.scale_y <= 0:
            raise ValueError("scale factors must be strictly positive")


IDENTITY = AffineParams(center=(0.0, 0.0))


def _translation(tr: float, tc: float) -> np.ndarray:
    return np.array([[1.0, 0.0, tr], [0.0, 1.0, tc], [0.0, 0.0, 1.0]])


def compose_matrix(p: AffineParams) -> np.ndarray:
    """Compose the 3x3 matrix ``T(center) @ Translate @ Rotate @ Shear @
    Scale @ T(-center)``; this order is fixed.

    Raises ValueError when ``center`` is unset or the composition is
    singular.
    """
    if p.center is None:
        raise ValueError("center must be set to compose a matrix "
                         "(affine_transform resolves None to the image center)")
    cr, cc = p.center
    rot = np.array([
        [cos(p.rotation), sin(p.rotation), 0.0],
        [-sin(p.rotation), cos(p.rotation), 0.0],
        [0.0, 0.0, 1.0],
    ])
    shear = np.array([[1.0, p.shear_x, 0.0], [p.shear_y, 1.0, 0.0], [0.0, 0.0, 1.0]])
    scale = np.diag([p.scale_x, p.scale_y, 1.0])
    m = (
        _translation(cr, cc)
        @ _translation(p.translate_r, p.translate_c)
        @ rot
        @ shear
        @ scale
        @ _translation(-cr, -cc)
    )
    a, b, c, d = m[0, 0], m[0, 1], m[1, 0], m[1, 1]
    if abs(a * d - b * c) < _DET_EPS:
        raise ValueError("composed affine matrix is singular")
    return m


def _invert_affine(m: np.ndarray) -> np.ndarray:
    # closed-form inverse of [[A, t], [0, 1]]: [[inv(A), -inv(A) t], [0, 1]]
    a, b, c, d = m[0, 0], m[0, 1], m[1, 0], m[1, 1]
    det = a * d - b * c
    if abs(det) < _DET_EPS:
        raise ValueError("affine matrix is singular")
    ia, ib, ic, id_ = d / det, -b / det, -c / det, a / det
    tr, tc = m[0, 2], m[1, 2]
    return np.array([
        [ia, ib, -(ia * tr + ib * tc)],
        [ic, id_, -(ic * tr + id_ * tc)],
        [0.0, 0.0, 1.0],
    ])


def resolve_center(img: np.ndarray, p: AffineParams) -> AffineParams:
    """Fill in ``center=None`` with the geometric center of ``img``."""
    if p.center is not None:
        return p
    rows, cols = img.shape
    return replace(p, center=((rows - 1) / 2.0, (cols - 1) / 2.0))


def affine_transform(img: np.ndarray, p: AffineParams, fill: str = FILL_ZERO) -> np.ndarray:
    """Warp ``img`` by ``p``, preserving its dimensions.

    Each output pixel (r, c) samples the source at the inverse-mapped
    coordinate, rounded half-away-from-zero; out-of-bounds samples follow
    the fill policy. Identity parameters return a byte-identical copy.
    """
    require_image(img)
    check_fill(fill)
    p = resolve_center(img, p)
    minv = _invert_affine(compose_matrix(p))
    rows, cols = img.shape
    r = np.arange(rows, dtype=np.float64)[:, None]
    c = np.arange(cols, dtype=np.float64)[None, :]
    src_r = round_half_away(minv[0, 0] * r + minv[0, 1] * c + minv[0, 2])
    src_c = round_half_away(minv[1, 0] * r + minv[1, 1] * c + minv[1, 2])
    out = img[np.clip(src_r, 0, rows - 1), np.clip(src_c, 0, cols - 1)]
    if fill == FILL_ZERO:
        inb = (src_r >= 0) & (src_r < rows) & (src_c >= 0) & (src_c < cols)
        out = np.where(inb, out, np.uint8(0))
    return out


@dataclass(frozen=True)
class AffineSampler:
    """Uniform parameter ranges plus a seed; :func:`draw_params` turns an
    index into a concrete :class:`AffineParams` deterministically."""

    rotation: tuple[float, float] = (-np.pi / 6, np.pi / 6)
    scale_x: tuple[float, float] = (0.8, 1.2)
    scale_y: tuple[float, float] = (0.8, 1.2)
    shear_x: tuple[float, float] = (-0.2, 0.2)
    shear_y: tuple[float, float] = (-0.2, 0.2)
    translate_r: tuple[float, float] = (0.0, 0.0)
    translate_c: tuple[float, float] = (0.0, 0.0)
    seed: int = 0

    def __post_init__(self):
        for name in ("rotation", "scale_x", "scale_y", "shear_x", "shear_y",
                     "translate_r", "translate_c"):
            lo, hi = getattr(self, name)
            if not (isfinite(lo) and isfinite(hi) and lo <= hi):
                raise ValueError(f"invalid range for {name}: ({lo}, {hi})")
        if self.scale_x[0] <= 0 or self.scale_y[0] <= 0:
            raise ValueError("scale ranges must stay strictly positive")

    @classmethod
    def default_for_shape(cls, shape: tuple[int, int], seed: int = 0) -> "AffineSampler":
        """Default ranges for an image of ``shape``: rotation within +/-30
        degrees, scale 0.8-1.2, shear +/-0.2, translation within +/-10% of
        each dimension."""
        rows, cols = shape
        return cls(
            translate_r=(-0.1 * rows, 0.1 * rows),
            translate_c=(-0.1 * cols, 0.1 * cols),
            seed=seed,
        )


def draw_params(sampler: AffineSampler, k: int) -> AffineParams:
    """Draw the ``k``-th parameter set from ``sampler``.

    Deterministic function of (sampler.seed, k): the stream is seeded with
    that pair, and values are drawn in a fixed field order, each uniform
    within its configured range. ``center`` is left unset.
    """
    rng = np.random.default_rng([sampler.seed, k])

    def u(lohi):
        return float(rng.uniform(lohi[0], lohi[1]))

    return AffineParams(
        rotation=u(sampler.rotation),
        scale_x=u(sampler.scale_x),
        scale_y=u(sampler.scale_y),
        shear_x=u(sampler.shear_x),
        shear_y=u(sampler.shear_y),
        translate_r=u(sampler.translate_r),
        translate_c=u(sampler.translate_c),
    )
