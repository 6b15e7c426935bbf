"""On-disk formats: images, labeled dataset trees, and expansion manifests.

Images
    Binary PGM (``P5``, maxval 255) is the native format. The writer is
    canonical -- ``P5\\n<cols> <rows>\\n255\\n`` followed by the raw pixel
    bytes, no comments -- so identical images always produce identical
    files. 8-bit grayscale PNG is also read and written through Pillow;
    PNG pixel content round-trips exactly, byte layout may vary with the
    codec version.

Dataset trees
    One subdirectory per class under a root; class names come from the
    directory names, sorted lexicographically. Items are sorted by path,
    so loading is order-deterministic.

Manifests
    Line-delimited text, one record per augmented image. The first line is
    the header ``# augment-manifest v1``; records are seven tab-separated
    fields::

        source  class_index  kind  params  master_seed  item_index  output

    ``params`` is compact JSON with sorted keys. ``source`` is relative to
    the dataset root, ``output`` relative to the expansion root, both in
    POSIX form.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from PIL import Image as PILImage

from .raster import require_image

MANIFEST_HEADER = "# augment-manifest v1"
_MANIFEST_FIELDS = 7

IMAGE_SUFFIXES = (".pgm", ".png")

_PNG_MAGIC = b"\x89PNG\r\n\x1a\n"


class DecodeError(ValueError):
    """Malformed or truncated image data."""


class UnsupportedImageError(DecodeError):
    """Recognized but unsupported image format, depth, or mode."""


class DatasetError(ValueError):
    """Dataset tree violates the expected layout."""


class ManifestError(ValueError):
    """Manifest file violates the expected format."""


def encode_pgm(img: np.ndarray) -> bytes:
    """Canonical binary PGM bytes for ``img``."""
    require_image(img)
    rows, cols = img.shape
    return b"P5\n%d %d\n255\n" % (cols, rows) + np.ascontiguousarray(img).tobytes()


def _pgm_tokens(data: bytes, count: int, path) -> tuple[list[bytes], int]:
    # header tokens are whitespace separated; '#' starts a comment to EOL
    tokens = []
    i = 0
    while len(tokens) < count:
        if i >= len(data):
            raise DecodeError(f"{path}: truncated PGM header")
        b = data[i : i + 1]
        if b == b"#":
            while i < len(data) and data[i : i + 1] not in (b"\n", b"\r"):
                i += 1
        elif b.isspace():
            i += 1
        else:
            j = i
            while j < len(data) and not data[j : j + 1].isspace() and data[j : j + 1] != b"#":
                j += 1
            tokens.append(data[i:j])
            i = j
    # exactly one whitespace byte separates the header from the raster
    if i >= len(data) or not data[i : i + 1].isspace():
        raise DecodeError(f"{path}: missing separator after PGM header")
    return tokens, i + 1


def _decode_pgm(data: bytes, path) -> np.ndarray:
    tokens, start = _pgm_tokens(data, 4, path)
    if tokens[0] != b"P5":
        raise DecodeError(f"{path}: not a binary PGM (magic {tokens[0]!r})")
    try:
        cols, rows, maxval = (int(t) for t in tokens[1:])
    except ValueError as e:
        raise DecodeError(f"{path}: non-numeric PGM header field") from e
    if cols < 1 or rows < 1:
        raise DecodeError(f"{path}: invalid PGM dimensions {cols}x{rows}")
    if maxval != 255:
        raise UnsupportedImageError(f"{path}: PGM maxval {maxval} unsupported (need 255)")
    expected = rows * cols
    raster = data[start : start + expected]
    if len(raster) != expected:
        raise DecodeError(f"{path}: PGM raster has {len(raster)} bytes, expected {expected}")
    return np.frombuffer(raster, dtype=np.uint8).reshape(rows, cols).copy()


def _decode_png(path: Path) -> np.ndarray:
    with PILImage.open(path) as im:
        if im.mode != "L":
            raise UnsupportedImageError(
                f"{path}: PNG mode {im.mode!r} unsupported (need 8-bit grayscale 'L')"
            )
        return np.asarray(im, dtype=np.uint8)


def read_image(path) -> np.ndarray:
    """Decode ``path`` into a 2-D uint8 array.

    Accepts binary PGM (maxval 255) and 8-bit grayscale PNG; anything else
    raises :class:`UnsupportedImageError`.
    """
    path = Path(path)
    data = path.read_bytes()
    if data[:2] == b"P5":
        return _decode_pgm(data, path)
    if data[:8] == _PNG_MAGIC:
        return _decode_png(path)
    raise UnsupportedImageError(f"{path}: unrecognized image format")


def write_image(img: np.ndarray, path) -> None:
    """Write ``img`` to ``path``; the suffix selects the format (.pgm or .png)."""
    require_image(img)
    path = Path(path)
    suffix = path.suffix.lower()
    if suffix == ".pgm":
        path.write_bytes(encode_pgm(img))
    elif suffix == ".png":
        PILImage.fromarray(img, mode="L").save(path, format="PNG")
    else:
        raise UnsupportedImageError(f"{path}: unsupported output suffix {suffix!r}")


@dataclass(frozen=True)
class LabeledDataset:
    """A class-per-directory image tree. ``items`` holds (class_index,
    relative POSIX path) pairs, sorted by path."""

    root: Path
    classes: list[str]
    items: list[tuple[int, str]] = field(repr=False)

    def __len__(self) -> int:
        return len(self.items)

    def item_path(self, i: int) -> Path:
        return self.root / self.items[i][1]


def load_dataset(root) -> LabeledDataset:
    """Scan ``root`` into a :class:`LabeledDataset`; deterministic ordering."""
    root = Path(root)
    if not root.is_dir():
        raise DatasetError(f"{root}: not a directory")
    classes = sorted(p.name for p in root.iterdir() if p.is_dir())
    if not classes:
        raise DatasetError(f"{root}: no class subdirectories")
    items: list[tuple[int, str]] = []
    for ci, cls in enumerate(classes):
        for p in (root / cls).iterdir():
            if p.suffix.lower() in IMAGE_SUFFIXES and p.is_file():
                items.append((ci, f"{cls}/{p.name}"))
    if not items:
        raise DatasetError(f"{root}: no images under class directories")
    items.sort(key=lambda t: t[1])
    return LabeledDataset(root=root, classes=classes, items=items)


@dataclass(frozen=True)
class ManifestRecord:
    """One augmented image: where it came from, how it was made, where it
    went. Replaying ``kind`` with ``params`` on ``source`` reproduces the
    file at ``output`` byte-exactly."""

    source: str
    class_index: int
    kind: str
    params: dict
    master_seed: int
    item_index: int
    output: str


def _params_json(params: dict) -> str:
    return json.dumps(params, sort_keys=True, separators=(",", ":"))


def write_manifest(records: list[ManifestRecord], path) -> None:
    lines = [MANIFEST_HEADER]
    for r in records:
        lines.append(
            "\t".join(
                (
                    r.source,
                    str(r.class_index),
                    r.kind,
                    _params_json(r.params),
                    str(r.master_seed),
                    str(r.item_index),
                    r.output,
                )
            )
        )
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def read_manifest(path) -> list[ManifestRecord]:
    path = Path(path)
    lines = path.read_text(encoding="utf-8").splitlines()
    if not lines or lines[0] != MANIFEST_HEADER:
        raise ManifestError(f"{path}:1: missing header {MANIFEST_HEADER!r}")
    records = []
    for n, line in enumerate(lines[1:], start=2):
        if not line:
            continue
        parts = line.split("\t")
        if len(parts) != _MANIFEST_FIELDS:
            raise ManifestError(f"{path}:{n}: expected {_MANIFEST_FIELDS} fields, got {len(parts)}")
        try:
            records.append(
                ManifestRecord(
                    source=parts[0],
                    class_index=int(parts[1]),
                    kind=parts[2],
                    params=json.loads(parts[3]),
                    master_seed=int(parts[4]),
                    item_index=int(parts[5]),
                    output=parts[6],
                )
            )
        except (ValueError, json.JSONDecodeError) as e:
            raise ManifestError(f"{path}:{n}: {e}") from e
    return records
