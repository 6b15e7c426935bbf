"""Command-line surface: single-image transforms, dataset expansion,
comparison montages, and evaluation runs.

Every subcommand prints its fully resolved configuration (flags plus any
derived seeds, poles, or parameters) before doing work, and is
deterministic given that printed configuration. All randomness flows from
explicit ``--seed`` flags; nothing is seeded from the clock.

Exit codes: 0 success, 2 usage or validation failure, 3 I/O or decode
failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import asdict
from pathlib import Path

import numpy as np

from .affine import AffineSampler, affine_transform, draw_params, resolve_center
from .dataset_io import DecodeError, load_dataset, read_image, write_image
from .evaluate import KnnModel, NearestCentroidModel, run_experiment, summarize_reports, write_report
from .expand import ExpansionError, ExpansionPlan, derive_item_seed, expand, pick_pole
from .radial import RadialParams, radial_transform
from .raster import FILL_MODES, check_pole, nn_resize

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_IO = 3


def _print_config(cmd: str, values: dict) -> None:
    pairs = " ".join(f"{k}={values[k]}" for k in sorted(values))
    print(f"config {cmd}: {pairs}")


def _parse_pole(text: str, img, seed: int | None):
    if text == "random":
        if seed is None:
            raise ValueError("--pole random requires --seed")
        return pick_pole(seed, img.shape)
    try:
        u, v = (int(x) for x in text.split(","))
    except ValueError as e:
        raise ValueError(f"--pole must be 'u,v' or 'random', got {text!r}") from e
    return check_pole(img, (u, v))


def cmd_transform(args) -> int:
    img = read_image(args.input)
    _print_config("transform", {
        "kind": args.kind, "input": args.input, "out": args.out,
        "fill": args.fill, "pole": args.pole, "rays": args.rays,
        "radii": args.radii, "seed": args.seed,
    })
    if args.kind == "radial":
        pole = _parse_pole(args.pole, img, args.seed)
        params = RadialParams(
            rays=args.rays or img.shape[0],
            radii=args.radii or img.shape[1],
            fill=args.fill,
        )
        print(f"resolved pole={pole.u},{pole.v} rays={params.rays} radii={params.radii}")
        out = radial_transform(img, pole, params).image
    else:
        sampler = AffineSampler.default_for_shape(img.shape, seed=args.seed or 0)
        p = resolve_center(img, draw_params(sampler, 0))
        print(f"resolved affine={json.dumps(asdict(p), sort_keys=True)}")
        out = affine_transform(img, p, args.fill)
    write_image(out, args.out)
    print(f"wrote {args.out}")
    return EXIT_OK


def cmd_expand(args) -> int:
    dataset = load_dataset(args.in_dir)
    plan = ExpansionPlan(
        kind=args.kind,
        out_root=Path(args.out_dir),
        per_image=1 if args.kind == "identity" else args.per_image,
        master_seed=args.seed,
        rays=args.rays,
        radii=args.radii,
        fill=args.fill,
    )
    _print_config("expand", {
        "kind": plan.kind, "in_dir": args.in_dir, "out_dir": args.out_dir,
        "per_image": plan.per_image, "seed": plan.master_seed,
        "rays": plan.rays, "radii": plan.radii, "fill": plan.fill,
        "workers": args.workers,
    })
    records = expand(dataset, plan, workers=args.workers)
    counts = {cls: 0 for cls in dataset.classes}
    for r in records:
        counts[dataset.classes[r.class_index]] += 1
    for cls in dataset.classes:
        print(f"class {cls}: {counts[cls]}")
    print(f"wrote {len(records)} images and manifest to {args.out_dir}")
    return EXIT_OK


def cmd_montage(args) -> int:
    if not args.inputs:
        raise ValueError("montage requires at least one input")
    _print_config("montage", {
        "inputs": ",".join(args.inputs), "out": args.out,
        "cell": args.cell, "seed": args.seed, "fill": args.fill,
    })
    cell = args.cell
    if cell < 1:
        raise ValueError("--cell must be >= 1")
    grid = np.zeros((3 * cell, len(args.inputs) * cell), dtype=np.uint8)
    for i, path in enumerate(args.inputs):
        img = read_image(path)
        pole = pick_pole(derive_item_seed(args.seed, i, 0), img.shape)
        sampler = AffineSampler.default_for_shape(img.shape, seed=args.seed)
        ap = resolve_center(img, draw_params(sampler, i))
        print(f"resolved input={i} pole={pole.u},{pole.v} "
              f"affine={json.dumps(asdict(ap), sort_keys=True)}")
        warped = affine_transform(img, ap, args.fill)
        radial = radial_transform(img, pole, RadialParams.for_source(img, args.fill)).image
        col = slice(i * cell, (i + 1) * cell)
        grid[0:cell, col] = nn_resize(img, cell, cell)
        grid[cell : 2 * cell, col] = nn_resize(warped, cell, cell)
        grid[2 * cell : 3 * cell, col] = nn_resize(radial, cell, cell)
    write_image(grid, args.out)
    print(f"wrote {args.out}")
    return EXIT_OK


def _parse_seeds(text: str) -> list[int]:
    if ".." in text:
        lo, hi = text.split("..", 1)
        return list(range(int(lo), int(hi) + 1))
    return [int(x) for x in text.split(",")]


def _make_model(args):
    if args.model == "centroid":
        return NearestCentroidModel(feature_size=args.feature_size,
                                    temperature=args.temperature)
    return KnnModel(k=args.knn_k, feature_size=args.feature_size)


def cmd_eval(args) -> int:
    manifest = Path(args.train_manifest)
    if not manifest.is_file():
        raise ValueError(f"train manifest not found: {manifest}")
    if not Path(args.test_dir).is_dir():
        raise ValueError(f"test directory not found: {args.test_dir}")
    seeds = _parse_seeds(args.seeds) if args.seeds else [args.seed]
    _print_config("eval", {
        "train_manifest": args.train_manifest, "test_dir": args.test_dir,
        "model": args.model, "poles": args.poles, "seeds": seeds,
        "knn_k": args.knn_k, "feature_size": args.feature_size,
        "temperature": args.temperature, "report": args.report,
        "workers": args.workers,
    })
    reports = []
    for s in seeds:
        report = run_experiment(
            manifest, args.test_dir, model=_make_model(args),
            pole_count=args.poles, seed=s, workers=args.workers,
        )
        reports.append(report)
        print(f"seed {s}:")
        print(report.to_table())
        if args.report:
            out = Path(args.report)
            if len(seeds) > 1:
                out = out.with_name(f"{out.stem}_seed{s}{out.suffix}")
            write_report(report, out)
            print(f"wrote {out}")
    if len(reports) > 1:
        print("aggregate over seeds:")
        print(summarize_reports({"eval": reports}))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="radialaug",
        description="Deterministic image augmentation: radial (polar) resampling, "
                    "affine baseline, dataset expansion, and evaluation.",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    t = sub.add_parser("transform", help="transform a single image")
    t.add_argument("--kind", choices=("radial", "affine"), required=True)
    t.add_argument("--input", required=True)
    t.add_argument("--out", required=True)
    t.add_argument("--fill", choices=FILL_MODES, default="zero")
    t.add_argument("--pole", default="random",
                   help="radial pole as 'u,v' or 'random' (default: random)")
    t.add_argument("--rays", type=int, default=None,
                   help="output rows; default: source rows")
    t.add_argument("--radii", type=int, default=None,
                   help="output cols; default: source cols")
    t.add_argument("--seed", type=int, default=None,
                   help="seed for random pole / affine parameters")
    t.set_defaults(func=cmd_transform)

    e = sub.add_parser("expand", help="expand a labeled dataset tree")
    e.add_argument("--kind", choices=("identity", "radial", "affine"), required=True)
    e.add_argument("--in-dir", required=True)
    e.add_argument("--out-dir", required=True)
    e.add_argument("--per-image", type=int, default=100)
    e.add_argument("--seed", type=int, default=0)
    e.add_argument("--rays", type=int, default=None)
    e.add_argument("--radii", type=int, default=None)
    e.add_argument("--fill", choices=FILL_MODES, default="zero")
    e.add_argument("--workers", type=int, default=1)
    e.set_defaults(func=cmd_expand)

    m = sub.add_parser("montage", help="original/affine/radial comparison grid")
    m.add_argument("--inputs", nargs="+", required=True)
    m.add_argument("--out", required=True)
    m.add_argument("--cell", type=int, default=64)
    m.add_argument("--seed", type=int, default=0)
    m.add_argument("--fill", choices=FILL_MODES, default="zero")
    m.set_defaults(func=cmd_montage)

    v = sub.add_parser("eval", help="train on an expansion, evaluate on a test tree")
    v.add_argument("--train-manifest", required=True)
    v.add_argument("--test-dir", required=True)
    v.add_argument("--model", choices=("centroid", "knn"), default="centroid")
    v.add_argument("--knn-k", type=int, default=5)
    v.add_argument("--feature-size", type=int, default=8)
    v.add_argument("--temperature", type=float, default=0.1)
    v.add_argument("--poles", type=int, default=32,
                   help="poles per test image for radial-trained models")
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--seeds", default=None,
                   help="multiple seeds, '1..10' or '1,2,3'; prints mean±std")
    v.add_argument("--report", default=None, help="write structured report here")
    v.add_argument("--workers", type=int, default=1,
                   help="threads for per-sample evaluation")
    v.set_defaults(func=cmd_eval)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (DecodeError, ExpansionError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_IO
    except ValueError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
