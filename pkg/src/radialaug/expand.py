"""Seeded dataset expansion: N augmented copies of every original.

All randomness flows from one 64-bit master seed. Each augmentation gets
its own stream seed via :func:`derive_item_seed`, a fixed splitmix64-based
mix of (master_seed, source_index, augmentation_index), so results do not
depend on worker count or execution order: serial and parallel runs write
byte-identical trees.

Output layout mirrors the input classes::

    <out_root>/<class>/<source-stem>__<kind><index>_<params-digest>.pgm

plus a ``manifest.tsv`` recording every file (see ``dataset_io``).
"""

from __future__ import annotations

import hashlib
import json
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, replace
from pathlib import Path

import numpy as np

from .affine import AffineParams, AffineSampler, affine_transform, draw_params, resolve_center
from .dataset_io import (
    LabeledDataset,
    ManifestRecord,
    read_image,
    write_image,
    write_manifest,
)
from .radial import RadialParams, radial_transform
from .raster import FILL_ZERO, Pole, check_fill, require_image

KINDS = ("identity", "radial", "affine")

_MASK64 = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15


def _splitmix64(x: int) -> int:
    x = (x + _GOLDEN) & _MASK64
    x = ((x ^ (x >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    x = ((x ^ (x >> 27)) * 0x94D049BB133111EB) & _MASK64
    return x ^ (x >> 31)


def derive_item_seed(master_seed: int, source_index: int, augmentation_index: int) -> int:
    """Mix the three inputs into one 64-bit seed.

    splitmix64 applied three times, folding in one input per round;
    deterministic and independent of execution order.
    """
    s = _splitmix64(master_seed & _MASK64)
    s = _splitmix64(s ^ (source_index & _MASK64))
    s = _splitmix64(s ^ (augmentation_index & _MASK64))
    return s


def pick_pole(seed: int, shape: tuple[int, int]) -> Pole:
    """Uniform random pixel of an image of ``shape``, deterministic in ``seed``."""
    rows, cols = shape
    if rows < 1 or cols < 1:
        raise ValueError(f"shape must be positive, got {shape}")
    flat = int(np.random.default_rng(seed).integers(rows * cols))
    return Pole(*divmod(flat, cols))


class ExpansionError(RuntimeError):
    """Expansion failed; the message names the offending item."""


@dataclass(frozen=True)
class ExpansionPlan:
    """What to build: transform kind, copies per original, seed, output root.

    ``rays``/``radii`` default to each source's rows/cols. ``affine``
    supplies parameter ranges for the affine kind; its seed field is
    ignored in favor of ``master_seed``.
    """

    kind: str
    out_root: Path
    per_image: int = 100
    master_seed: int = 0
    rays: int | None = None
    radii: int | None = None
    fill: str = FILL_ZERO
    affine: AffineSampler | None = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"kind must be one of {KINDS}, got {self.kind!r}")
        if self.per_image < 1:
            raise ValueError(f"per_image must be >= 1, got {self.per_image}")
        if self.kind == "identity" and self.per_image != 1:
            raise ValueError("identity expansion requires per_image == 1")
        check_fill(self.fill)
        object.__setattr__(self, "out_root", Path(self.out_root))


def _affine_sampler_for(plan: ExpansionPlan, shape: tuple[int, int]) -> AffineSampler:
    if plan.affine is None:
        return AffineSampler.default_for_shape(shape, seed=plan.master_seed)
    return replace(plan.affine, seed=plan.master_seed)


def _augment(img: np.ndarray, plan: ExpansionPlan, source_index: int, aug_index: int):
    """Produce (augmented image, params dict) for one output."""
    if plan.kind == "identity":
        return img, {}
    if plan.kind == "radial":
        seed = derive_item_seed(plan.master_seed, source_index, aug_index)
        pole = pick_pole(seed, img.shape)
        params = RadialParams(
            rays=plan.rays or img.shape[0],
            radii=plan.radii or img.shape[1],
            fill=plan.fill,
        )
        out = radial_transform(img, pole, params).image
        return out, {
            "pole": [pole.u, pole.v],
            "rays": params.rays,
            "radii": params.radii,
            "fill": params.fill,
        }
    sampler = _affine_sampler_for(plan, img.shape)
    p = draw_params(sampler, source_index * plan.per_image + aug_index)
    p = resolve_center(img, p)
    out = affine_transform(img, p, plan.fill)
    d = asdict(p)
    d["center"] = list(p.center)
    d["fill"] = plan.fill
    return out, d


def _replay_params(kind: str, img: np.ndarray, params: dict) -> np.ndarray:
    if kind == "identity":
        return img
    if kind == "radial":
        rp = RadialParams(rays=params["rays"], radii=params["radii"], fill=params["fill"])
        return radial_transform(img, tuple(params["pole"]), rp).image
    if kind == "affine":
        d = {k: v for k, v in params.items() if k != "fill"}
        d["center"] = tuple(d["center"])
        return affine_transform(img, AffineParams(**d), params["fill"])
    raise ValueError(f"unknown transform kind {kind!r}")


def replay_record(record: ManifestRecord, source_root) -> np.ndarray:
    """Recompute the augmented image a manifest record describes."""
    img = read_image(Path(source_root) / record.source)
    return _replay_params(record.kind, img, record.params)


def _digest(params: dict) -> str:
    blob = json.dumps(params, sort_keys=True, separators=(",", ":")).encode()
    return hashlib.sha256(blob).hexdigest()[:8]


def _expand_item(dataset: LabeledDataset, plan: ExpansionPlan, source_index: int):
    class_index, relpath = dataset.items[source_index]
    cls = dataset.classes[class_index]
    path = dataset.root / relpath
    try:
        img = require_image(read_image(path))
    except Exception as e:
        raise ExpansionError(f"cannot read source {relpath}: {e}") from e
    stem = Path(relpath).stem
    records = []
    for a in range(plan.per_image):
        out, params = _augment(img, plan, source_index, a)
        name = f"{stem}__{plan.kind}{a:03d}_{_digest(params)}.pgm"
        out_rel = f"{cls}/{name}"
        try:
            write_image(out, plan.out_root / out_rel)
        except OSError as e:
            raise ExpansionError(f"cannot write {out_rel}: {e}") from e
        records.append(
            ManifestRecord(
                source=relpath,
                class_index=class_index,
                kind=plan.kind,
                params=params,
                master_seed=plan.master_seed,
                item_index=a,
                output=out_rel,
            )
        )
    return records


def expand(dataset: LabeledDataset, plan: ExpansionPlan, workers: int = 1) -> list[ManifestRecord]:
    """Write ``per_image`` augmentations of every dataset item plus a manifest.

    Returns the manifest records in (source index, augmentation index)
    order. A pure function of (dataset bytes, plan): reruns and any worker
    count produce identical trees. Raises :class:`ExpansionError` naming
    the item on decode or write failure.
    """
    stems = set()
    for ci, rel in dataset.items:
        key = (ci, Path(rel).stem)
        if key in stems:
            raise ExpansionError(f"duplicate source stem {Path(rel).stem!r} in class "
                                 f"{dataset.classes[ci]!r}; output names would collide")
        stems.add(key)
    try:
        plan.out_root.mkdir(parents=True, exist_ok=True)
        for cls in dataset.classes:
            (plan.out_root / cls).mkdir(exist_ok=True)
    except OSError as e:
        raise ExpansionError(f"cannot create output root {plan.out_root}: {e}") from e

    indices = range(len(dataset.items))
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as ex:
            per_item = list(ex.map(lambda i: _expand_item(dataset, plan, i), indices))
    else:
        per_item = [_expand_item(dataset, plan, i) for i in indices]
    records = [r for item in per_item for r in item]
    write_manifest(records, plan.out_root / "manifest.tsv")
    return records
