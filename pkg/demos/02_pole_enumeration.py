"""
Enumerating every pole
======================

One source image yields as many transforms as it has pixels. Streaming
enumeration visits the poles row-major without materializing the whole
family, so counting distinct outputs over all rows x cols poles is cheap.
"""

import numpy as np

from radialaug import RadialParams, enumerate_pole_transforms
from radialaug.radial import _offset_tables

rng = np.random.default_rng(12)
img = rng.integers(0, 256, (16, 16), dtype=np.uint8)

distinct = set()
n = 0
for out in enumerate_pole_transforms(img, RadialParams(16, 16)):
    distinct.add(out.image.tobytes())
    n += 1
print(f"16x16 source: {n} outputs, {len(distinct)} distinct")

# a constant image is pole-invariant under clamp fill: one distinct output
flat = np.full((16, 16), 99, dtype=np.uint8)
blobs = {o.image.tobytes() for o in
         enumerate_pole_transforms(flat, RadialParams(16, 16, fill="clamp"))}
print(f"constant source: {len(blobs)} distinct output")

# near the pole the grid oversamples: radius 0 hits one source pixel for
# all 16 rays, and the covered area grows slowly with radius
xh, yh = _offset_tables(16, 16)
for k in (0, 1, 3, 7, 15):
    coords = {(int(xh[m, r]), int(yh[m, r])) for m in range(16) for r in range(k + 1)}
    print(f"radii 0..{k:2d}: {len(coords):3d} distinct source offsets "
          f"(grid cells: {16 * (k + 1)})")
