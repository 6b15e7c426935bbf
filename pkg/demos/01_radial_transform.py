"""
Radial transform basics
=======================

Resample an image in polar coordinates around a chosen pole: ray m,
radius r of the output holds the source pixel at the pole plus the
rounded Cartesian offset of (r, angle 2*pi*m/M).
"""

from pathlib import Path

import numpy as np

from radialaug import RadialParams, radial_transform, ray_angle, radial_offsets, write_image

out_dir = Path(__file__).parent / "output"
out_dir.mkdir(exist_ok=True)

# a ring on a dark background makes the geometry easy to see
size = 96
yy, xx = np.mgrid[0:size, 0:size]
rr = np.hypot(yy - 48, xx - 48)
img = np.where(np.abs(rr - 30) < 4, 220, 25).astype(np.uint8)
write_image(img, out_dir / "ring.pgm")

# the pole at the ring's center turns the ring into a vertical band:
# every ray crosses it at the same radius
centered = radial_transform(img, (48, 48), RadialParams(rays=96, radii=96))
write_image(centered.image, out_dir / "ring_pole_center.pgm")

# an off-center pole bends the band; distances to the ring now vary by ray
offset = radial_transform(img, (30, 60), RadialParams(rays=96, radii=96))
write_image(offset.image, out_dir / "ring_pole_offset.pgm")

print("pole (48,48): ring occupies columns",
      np.nonzero(centered.image[0] > 100)[0].min(), "..",
      np.nonzero(centered.image[0] > 100)[0].max())

# column 0 is always the pole pixel, repeated down every row
assert (centered.image[:, 0] == img[48, 48]).all()
assert (offset.image[:, 0] == img[30, 60]).all()
print("column 0 repeats the pole pixel in both outputs")

# the sampling grid itself: angles step by 2*pi/M, offsets are rounded
for m in (0, 24, 48, 72):
    theta = ray_angle(m, 96)
    print(f"ray {m:2d}: angle {theta:.4f} rad, offset at r=20 ->",
          radial_offsets(20, theta))

print(f"wrote {out_dir}/ring*.pgm")
