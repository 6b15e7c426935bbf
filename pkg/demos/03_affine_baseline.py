"""
Affine baseline
===============

The comparison augmentation: random compositions of translation,
rotation, scale, and shear, applied by inverse mapping with
nearest-neighbor sampling. Parameters come from seeded uniform ranges,
so draw k of a seeded sampler is always the same warp.
"""

from pathlib import Path

import numpy as np

from radialaug import (
    AffineParams,
    AffineSampler,
    affine_transform,
    compose_matrix,
    draw_params,
    write_image,
)

out_dir = Path(__file__).parent / "output"
out_dir.mkdir(exist_ok=True)

# a letter-like glyph shows orientation changes clearly
img = np.full((64, 64), 20, dtype=np.uint8)
img[10:54, 14:22] = 230   # vertical stroke
img[10:18, 14:50] = 230   # top bar
img[30:38, 14:42] = 230   # middle bar
write_image(img, out_dir / "glyph.pgm")

# a fixed warp: rotate a quarter turn about the center
quarter = AffineParams(rotation=np.pi / 2)
write_image(affine_transform(img, quarter), out_dir / "glyph_quarter.pgm")
print("quarter-turn matrix:")
print(np.round(compose_matrix(AffineParams(rotation=np.pi / 2, center=(31.5, 31.5))), 3))

# seeded random draws: same (seed, k) always gives the same parameters
sampler = AffineSampler.default_for_shape(img.shape, seed=2024)
for k in range(3):
    p = draw_params(sampler, k)
    warped = affine_transform(img, p)
    write_image(warped, out_dir / f"glyph_draw{k}.pgm")
    print(f"draw {k}: rotation {p.rotation:+.3f} rad, "
          f"scale ({p.scale_x:.3f}, {p.scale_y:.3f}), "
          f"shear ({p.shear_x:+.3f}, {p.shear_y:+.3f}), "
          f"translate ({p.translate_r:+.2f}, {p.translate_c:+.2f})")

assert draw_params(sampler, 1) == draw_params(sampler, 1)
print(f"wrote {out_dir}/glyph*.pgm")
