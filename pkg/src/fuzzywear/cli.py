"""Command-line interface: train, classify, edges, features, genfix.

Records are line-oriented, tab-separated text so runs diff cleanly; errors
go to stderr and any error makes the exit status nonzero.
"""

from __future__ import annotations

import argparse
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path
from typing import List, Optional, Tuple

from .classify import classify_image
from .errors import FuzzywearError, ManifestError
from .fixtures import CLASSES, write_fixture
from .image import edge_map, load_grayscale, resize_canonical, write_grayscale_png
from .pipeline import IMAGE_KINDS, PipelineConfig, image_curves
from .training import LABELS, TrainingReport, load_model, save_model, train

_DEFAULTS = PipelineConfig()


def _add_config_arguments(parser: argparse.ArgumentParser) -> None:
    group = parser.add_argument_group("pipeline configuration")
    group.add_argument(
        "--sigma-template",
        type=float,
        default=_DEFAULTS.sigma_template,
        help="zero-gradient spread for template images (default %(default)s)",
    )
    group.add_argument(
        "--sigma-photo",
        type=float,
        default=_DEFAULTS.sigma_photo,
        help="zero-gradient spread for photographs (default %(default)s)",
    )
    group.add_argument(
        "--roi-rows",
        type=int,
        nargs=3,
        default=list(_DEFAULTS.roi_rows),
        metavar=("R1", "R2", "R3"),
        help="center rows of the three scan bands (default %(default)s)",
    )
    group.add_argument(
        "--roi-half-width",
        type=int,
        default=_DEFAULTS.roi_half_width,
        help="rows scanned above and below each center (default %(default)s)",
    )
    group.add_argument(
        "--white-threshold",
        type=float,
        default=_DEFAULTS.white_threshold,
        help="edge values below this count as non-white (default %(default)s)",
    )
    group.add_argument(
        "--border-margin",
        type=int,
        default=_DEFAULTS.border_margin,
        help="columns whitened on each side of the edge map (default %(default)s)",
    )
    group.add_argument(
        "--resolution",
        type=int,
        default=_DEFAULTS.resolution,
        help="output-universe sample count for defuzzification (default %(default)s)",
    )


def _add_threads_argument(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "--threads",
        type=int,
        default=os.cpu_count() or 1,
        help="worker threads for batch work (default: available parallelism)",
    )


def _config_from_args(args) -> PipelineConfig:
    return PipelineConfig(
        sigma_template=args.sigma_template,
        sigma_photo=args.sigma_photo,
        roi_rows=tuple(args.roi_rows),
        roi_half_width=args.roi_half_width,
        white_threshold=args.white_threshold,
        border_margin=args.border_margin,
        resolution=args.resolution,
    )


def parse_manifest(path) -> List[Tuple[str, str, str]]:
    """Read a training manifest: one `path label kind` per line.

    Blank lines and #-comments are skipped; relative image paths are resolved
    against the manifest's directory.
    """
    manifest = Path(path)
    try:
        text = manifest.read_text()
    except OSError as exc:
        raise ManifestError(f"cannot read manifest {path}: {exc}") from exc
    base = manifest.parent
    entries: List[Tuple[str, str, str]] = []
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.rsplit(maxsplit=2)
        if len(parts) != 3:
            raise ManifestError(
                f"expected 'path label kind' at line {number}, got {raw!r}"
            )
        image_path, label, kind = parts
        if label not in LABELS:
            raise ManifestError(f"unknown label {label!r} at line {number}")
        if kind not in IMAGE_KINDS:
            raise ManifestError(f"unknown image kind {kind!r} at line {number}")
        resolved = Path(image_path)
        if not resolved.is_absolute():
            resolved = base / resolved
        entries.append((str(resolved), label, kind))
    if not entries:
        raise ManifestError(f"manifest {path} lists no images")
    return entries


def _format_training_report(report: TrainingReport) -> List[str]:
    lines = []
    for record in report.records:
        rows = ",".join(str(n) for n in record.valid_rows)
        lines.append(
            f"{record.source}\t{record.label}\t{record.image_kind}"
            f"\t{record.m1:.6f}\t{record.mean_val:.6f}\t{rows}"
        )
    return lines


def cmd_train(args) -> int:
    entries = parse_manifest(args.manifest)
    model, report = train(entries, _config_from_args(args), threads=args.threads)
    lines = _format_training_report(report)
    for line in lines:
        print(line)
    for source, message in report.failures:
        print(f"error: {source}: {message}", file=sys.stderr)
    save_model(model, args.output)
    if args.report:
        Path(args.report).write_text("\n".join(lines) + "\n")
    print(f"model written to {args.output}", file=sys.stderr)
    return 1 if report.failures else 0


def cmd_classify(args) -> int:
    model = load_model(args.model)
    paths = list(args.images)

    def run(path):
        return classify_image(path, model, args.kind)

    outcomes: List = [None] * len(paths)
    if args.threads > 1 and len(paths) > 1:
        with ThreadPoolExecutor(max_workers=args.threads) as pool:
            futures = [pool.submit(run, path) for path in paths]
            for i, future in enumerate(futures):
                try:
                    outcomes[i] = future.result()
                except FuzzywearError as exc:
                    outcomes[i] = exc
    else:
        for i, path in enumerate(paths):
            try:
                outcomes[i] = run(path)
            except FuzzywearError as exc:
                outcomes[i] = exc

    failures = 0
    for path, outcome in zip(paths, outcomes):
        if isinstance(outcome, FuzzywearError):
            failures += 1
            print(f"error: {path}: {outcome}", file=sys.stderr)
            continue
        flag = "yes" if outcome.indeterminate else "no"
        print(
            f"{path}\t{outcome.label}\t{outcome.score:.6f}"
            f"\t{outcome.features.m1:.6f}\t{outcome.features.mean_val:.6f}\t{flag}"
        )
    return 1 if failures else 0


def cmd_edges(args) -> int:
    config = _config_from_args(args)
    gray = resize_canonical(load_grayscale(args.image))
    edges = edge_map(gray, config.edge_config(args.kind), threads=args.threads)
    write_grayscale_png(edges, args.output)
    print(f"edge map written to {args.output}", file=sys.stderr)
    return 0


def cmd_features(args) -> int:
    config = _config_from_args(args)
    curves, vector = image_curves(args.image, args.kind, config, threads=args.threads)
    lines = [f"# image {args.image}", f"# kind {args.kind}"]
    for curve in curves:
        lines.extend(
            f"curve {curve.roi.index} {row} {col}" for row, col in curve.points
        )
    lines.append(f"m1 {vector.m1:.6f}")
    lines.append(f"mean_val {vector.mean_val:.6f}")
    lines.append("valid_rows " + " ".join(str(n) for n in vector.valid_rows))
    text = "\n".join(lines) + "\n"
    if args.output:
        Path(args.output).write_text(text)
    else:
        sys.stdout.write(text)
    return 0


def cmd_genfix(args) -> int:
    output = Path(args.output)
    truth = Path(args.truth) if args.truth else output.with_suffix(".truth.txt")
    write_fixture(args.cls, args.seed, output, truth)
    print(f"fixture written to {output} (truth: {truth})", file=sys.stderr)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fuzzywear",
        description="Classify clothing images as shirt, dress, or pants with "
        "a two-stage Mamdani fuzzy pipeline.",
    )
    commands = parser.add_subparsers(dest="command", required=True)

    p_train = commands.add_parser(
        "train", help="fit a model from a manifest of labeled images"
    )
    p_train.add_argument("manifest", help="text file of `path label kind` lines")
    p_train.add_argument("-o", "--output", required=True, help="model file to write")
    p_train.add_argument("--report", help="also write the per-image report here")
    _add_config_arguments(p_train)
    _add_threads_argument(p_train)
    p_train.set_defaults(func=cmd_train)

    p_classify = commands.add_parser(
        "classify", help="label images with a trained model"
    )
    p_classify.add_argument("model", help="model file written by `train`")
    p_classify.add_argument("images", nargs="+", help="image files to classify")
    p_classify.add_argument(
        "--kind", choices=IMAGE_KINDS, default="photo", help="input image kind"
    )
    _add_threads_argument(p_classify)
    p_classify.set_defaults(func=cmd_classify)

    p_edges = commands.add_parser(
        "edges", help="write the normalized edge map of one image as a PNG"
    )
    p_edges.add_argument("image")
    p_edges.add_argument("-o", "--output", required=True, help="PNG file to write")
    p_edges.add_argument(
        "--kind", choices=IMAGE_KINDS, default="photo", help="input image kind"
    )
    _add_config_arguments(p_edges)
    _add_threads_argument(p_edges)
    p_edges.set_defaults(func=cmd_edges)

    p_features = commands.add_parser(
        "features", help="dump the characteristic curves and features of one image"
    )
    p_features.add_argument("image")
    p_features.add_argument("-o", "--output", help="write here instead of stdout")
    p_features.add_argument(
        "--kind", choices=IMAGE_KINDS, default="photo", help="input image kind"
    )
    _add_config_arguments(p_features)
    _add_threads_argument(p_features)
    p_features.set_defaults(func=cmd_features)

    p_genfix = commands.add_parser(
        "genfix", help="generate a synthetic test silhouette with ground truth"
    )
    p_genfix.add_argument("cls", metavar="class", choices=CLASSES)
    p_genfix.add_argument("-o", "--output", required=True, help="PNG file to write")
    p_genfix.add_argument("--seed", type=int, default=0)
    p_genfix.add_argument(
        "--truth", help="ground-truth outline file (default: alongside the PNG)"
    )
    p_genfix.set_defaults(func=cmd_genfix)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except FuzzywearError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
