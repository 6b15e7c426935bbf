"""Evaluation: simple probabilistic classifiers, per-class metrics, and
multi-pole majority-vote inference.

Metrics, for a test set S with labels and one probability vector per
sample:

* per-class accuracy: the fraction of the samples whose true label is c
  that are predicted (argmax) as c. Weighted by class sizes these aggregate
  exactly to overall accuracy.
* per-class top-one confidence: the mean probability assigned to class c
  over the whole test set. Because each vector sums to 1, the per-class
  confidences sum to 1.

Argmax ties and majority-vote ties both break to the smallest class index.
The built-in models are deliberately small stand-ins that give well-defined
probabilities: nearest-centroid with softmax over negative distances, and
k-nearest-neighbor with vote fractions, both over flattened downscaled
pixels.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .dataset_io import load_dataset, read_image, read_manifest
from .expand import derive_item_seed, pick_pole
from .radial import RadialParams, radial_transform_batch
from .raster import check_pole, nn_resize, require_image


class EvalError(ValueError):
    """Evaluation inputs are unusable (empty sets, mismatched classes)."""


def features(img: np.ndarray, size: int = 8) -> np.ndarray:
    """Flattened ``size`` x ``size`` nearest-neighbor downscale in [0, 1]."""
    return nn_resize(img, size, size).astype(np.float64).ravel() / 255.0


class NearestCentroidModel:
    """Class centroids in feature space; probabilities are a softmax over
    negative distances with a fixed temperature."""

    def __init__(self, feature_size: int = 8, temperature: float = 0.1):
        if temperature <= 0:
            raise ValueError("temperature must be positive")
        self.feature_size = feature_size
        self.temperature = temperature
        self.centroids: np.ndarray | None = None

    def fit(self, images, labels, n_classes: int | None = None) -> "NearestCentroidModel":
        labels = np.asarray(labels, dtype=np.int64)
        if len(images) == 0 or len(images) != len(labels):
            raise EvalError("fit requires equal, non-zero numbers of images and labels")
        c = n_classes if n_classes is not None else int(labels.max()) + 1
        feats = np.stack([features(im, self.feature_size) for im in images])
        centroids = np.empty((c, feats.shape[1]))
        for k in range(c):
            mask = labels == k
            if not mask.any():
                raise EvalError(f"no training samples for class {k}")
            centroids[k] = feats[mask].mean(axis=0)
        self.centroids = centroids
        return self

    def predict_proba(self, img: np.ndarray) -> np.ndarray:
        if self.centroids is None:
            raise EvalError("model is not fitted")
        f = features(img, self.feature_size)
        d = np.sqrt(((self.centroids - f) ** 2).sum(axis=1))
        z = -d / self.temperature
        z -= z.max()
        e = np.exp(z)
        return e / e.sum()


class KnnModel:
    """k-nearest-neighbor; probabilities are neighbor vote fractions.
    Neighbors are chosen by a stable sort on distance, so results are a
    deterministic function of the training order."""

    def __init__(self, k: int = 5, feature_size: int = 8):
        if k < 1:
            raise ValueError("k must be >= 1")
        self.k = k
        self.feature_size = feature_size
        self._feats: np.ndarray | None = None
        self._labels: np.ndarray | None = None
        self._n_classes = 0

    def fit(self, images, labels, n_classes: int | None = None) -> "KnnModel":
        labels = np.asarray(labels, dtype=np.int64)
        if len(images) == 0 or len(images) != len(labels):
            raise EvalError("fit requires equal, non-zero numbers of images and labels")
        self._feats = np.stack([features(im, self.feature_size) for im in images])
        self._labels = labels
        self._n_classes = n_classes if n_classes is not None else int(labels.max()) + 1
        return self

    def predict_proba(self, img: np.ndarray) -> np.ndarray:
        if self._feats is None:
            raise EvalError("model is not fitted")
        f = features(img, self.feature_size)
        d = ((self._feats - f) ** 2).sum(axis=1)
        k = min(self.k, len(d))
        nearest = np.argsort(d, kind="stable")[:k]
        votes = np.bincount(self._labels[nearest], minlength=self._n_classes)
        return votes / votes.sum()


def _check_preds(preds) -> np.ndarray:
    p = np.asarray(preds, dtype=np.float64)
    if p.ndim != 2 or p.shape[0] == 0:
        raise EvalError("predictions must be a non-empty (samples, classes) array")
    return p


def accuracy_per_class(preds, labels, c: int) -> float:
    """Fraction of the class-``c`` test samples predicted as ``c``."""
    p = _check_preds(preds)
    labels = np.asarray(labels, dtype=np.int64)
    if len(labels) != p.shape[0]:
        raise EvalError("predictions and labels must have equal length")
    if labels.min() < 0 or labels.max() >= p.shape[1]:
        raise EvalError("label out of range")
    mask = labels == c
    if not mask.any():
        raise EvalError(f"no test samples of class {c}")
    hits = np.argmax(p[mask], axis=1) == c
    return float(hits.sum() / mask.sum())


def confidence_per_class(preds, c: int) -> float:
    """Mean probability assigned to class ``c`` over the whole test set."""
    p = _check_preds(preds)
    if not (0 <= c < p.shape[1]):
        raise EvalError(f"class {c} out of range")
    return float(p[:, c].mean())


def majority_label(labels) -> int:
    """Most frequent label; ties break to the smallest label."""
    labels = np.asarray(labels, dtype=np.int64)
    if labels.size == 0:
        raise EvalError("majority vote over an empty label list")
    if labels.min() < 0:
        raise EvalError("labels must be non-negative")
    return int(np.argmax(np.bincount(labels)))


def vote_labels(img, poles, params: RadialParams | None, model) -> tuple[list[int], int]:
    """Classify ``img`` by transforming it at each pole and voting.

    Returns (per-pole predicted labels, winning label). The winner is the
    most frequent label, ties to the smallest class index; it does not
    depend on the order of the poles.
    """
    require_image(img)
    if len(poles) == 0:
        raise ValueError("vote_labels requires at least one pole")
    for p in poles:
        check_pole(img, p)
    outs = radial_transform_batch(img, poles, params)
    labels = [int(np.argmax(model.predict_proba(o.image))) for o in outs]
    return labels, majority_label(labels)


@dataclass(frozen=True)
class EvalReport:
    """Per-class accuracy and confidence plus macro averages and counts.

    ``macro_confidence`` (mean of the per-class confidences) always equals
    1/C because the per-class confidences sum to 1; ``true_class_confidence``
    -- the mean probability assigned to each sample's true label -- is the
    scalar that actually varies between models, so comparisons report it.
    """

    classes: list[str]
    counts: np.ndarray = field(repr=False)
    accuracy: np.ndarray = field(repr=False)
    confidence: np.ndarray = field(repr=False)
    macro_accuracy: float = 0.0
    macro_confidence: float = 0.0
    true_class_confidence: float = 0.0

    @property
    def total(self) -> int:
        return int(self.counts.sum())

    def to_table(self) -> str:
        w = max(5, max(len(c) for c in self.classes))
        lines = [f"{'class':<{w}}  {'n':>5}  {'accuracy':>9}  {'confidence':>10}"]
        for i, name in enumerate(self.classes):
            lines.append(
                f"{name:<{w}}  {self.counts[i]:>5d}  {self.accuracy[i]:>9.4f}  "
                f"{self.confidence[i]:>10.4f}"
            )
        lines.append(
            f"{'macro':<{w}}  {self.total:>5d}  {self.macro_accuracy:>9.4f}  "
            f"{self.macro_confidence:>10.4f}"
        )
        lines.append(f"true-class confidence: {self.true_class_confidence:.4f}")
        return "\n".join(lines)


REPORT_HEADER = "# eval-report v1"


def write_report(report: EvalReport, path) -> None:
    """Line-delimited report: header, one class per line, then macro."""
    lines = [REPORT_HEADER]
    for i, name in enumerate(report.classes):
        lines.append(
            f"class\t{name}\t{int(report.counts[i])}\t{float(report.accuracy[i])!r}\t"
            f"{float(report.confidence[i])!r}"
        )
    lines.append(f"macro\t-\t{report.total}\t{report.macro_accuracy!r}\t{report.macro_confidence!r}")
    lines.append(f"true_class_confidence\t{report.true_class_confidence!r}")
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def build_report(preds, labels, classes: list[str]) -> EvalReport:
    """Assemble an :class:`EvalReport` from probability vectors and labels."""
    p = _check_preds(preds)
    labels = np.asarray(labels, dtype=np.int64)
    c = len(classes)
    if p.shape[1] != c:
        raise EvalError(f"predictions have {p.shape[1]} classes, expected {c}")
    counts = np.bincount(labels, minlength=c)
    acc = np.array([accuracy_per_class(p, labels, k) for k in range(c)])
    conf = np.array([confidence_per_class(p, k) for k in range(c)])
    return EvalReport(
        classes=list(classes),
        counts=counts,
        accuracy=acc,
        confidence=conf,
        macro_accuracy=float(acc.mean()),
        macro_confidence=float(conf.mean()),
        true_class_confidence=float(p[np.arange(len(labels)), labels].mean()),
    )


def _load_training(manifest_path: Path) -> tuple[list[np.ndarray], np.ndarray, str]:
    records = read_manifest(manifest_path)
    if not records:
        raise EvalError(f"{manifest_path}: empty training manifest")
    kinds = {r.kind for r in records}
    if len(kinds) != 1:
        raise EvalError(f"{manifest_path}: mixed transform kinds {sorted(kinds)}")
    root = manifest_path.parent
    images = [read_image(root / r.output) for r in records]
    labels = np.array([r.class_index for r in records], dtype=np.int64)
    return images, labels, kinds.pop()


def run_experiment(
    train_manifest,
    test_dir,
    model=None,
    pole_count: int = 32,
    seed: int = 0,
    workers: int = 1,
) -> EvalReport:
    """Train on an expanded dataset and evaluate on a test tree.

    The transform kind recorded in the manifest selects the inference
    path: radial-trained models classify each test image by majority vote
    over ``pole_count`` seeded random poles (the reported probability
    vector is the per-pole vote fractions, whose argmax is the vote winner
    under the same tie rule); identity- and affine-trained models classify
    test images directly. Training is single-threaded; ``workers`` > 1
    parallelizes over test samples without changing the report. Fully
    deterministic in (inputs, seed).
    """
    train_manifest = Path(train_manifest)
    test = load_dataset(test_dir)
    images, labels, kind = _load_training(train_manifest)
    n_classes = len(test.classes)
    train_classes = set(int(x) for x in labels)
    if train_classes != set(range(n_classes)):
        raise EvalError(
            f"train classes {sorted(train_classes)} do not match test classes "
            f"0..{n_classes - 1}"
        )
    if kind == "radial" and pole_count < 1:
        raise EvalError("pole_count must be >= 1 for radial evaluation")
    if model is None:
        model = NearestCentroidModel()
    model.fit(images, labels, n_classes=n_classes)

    preds = np.empty((len(test.items), n_classes))
    test_labels = np.empty(len(test.items), dtype=np.int64)

    def classify(i: int) -> None:
        ci, rel = test.items[i]
        img = read_image(test.root / rel)
        test_labels[i] = ci
        if kind == "radial":
            poles = [
                pick_pole(derive_item_seed(seed, i, t), img.shape)
                for t in range(pole_count)
            ]
            votes, _ = vote_labels(img, poles, RadialParams.for_source(img), model)
            preds[i] = np.bincount(votes, minlength=n_classes) / len(votes)
        else:
            preds[i] = model.predict_proba(img)

    if workers > 1:
        from concurrent.futures import ThreadPoolExecutor

        with ThreadPoolExecutor(max_workers=workers) as ex:
            list(ex.map(classify, range(len(test.items))))
    else:
        for i in range(len(test.items)):
            classify(i)
    return build_report(preds, test_labels, test.classes)


def format_mean_std(values, percent: bool = True) -> str:
    """Render a sample as ``mean+/-std`` (population std), optionally in %."""
    a = np.asarray(values, dtype=np.float64)
    scale = 100.0 if percent else 1.0
    return f"{a.mean() * scale:.2f}±{a.std() * scale:.2f}"


def summarize_reports(rows: dict[str, list[EvalReport]]) -> str:
    """Mean+/-std comparison table over repeated runs, one row per pipeline.

    Confidence here is the true-class confidence (see
    :class:`EvalReport`); the macro of per-class confidences is 1/C for
    every model and would not differentiate anything.
    """
    w = max(8, max(len(k) for k in rows))
    lines = [f"{'pipeline':<{w}}  {'accuracy %':>13}  {'true-class conf %':>18}"]
    for name, reports in rows.items():
        acc = format_mean_std([r.macro_accuracy for r in reports])
        conf = format_mean_std([r.true_class_confidence for r in reports])
        lines.append(f"{name:<{w}}  {acc:>13}  {conf:>18}")
    return "\n".join(lines)
