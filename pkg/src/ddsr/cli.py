"""Command-line interface: ``train``, ``upscale``, and ``eval`` verbs.

Exit codes: 0 success, 1 usage error, 2 processing error.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .bench import run_benchmark
from .config import load_config
from .errors import DdsrError
from .image import clamp_to_gray
from .image_io import load_image, save_image
from .model_io import load_model, save_model
from .pipeline import ModelConfig, super_resolve_layers, train_model_with_report

_IMAGE_SUFFIXES = (".png", ".pgm")


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse exits 2 on bad usage by default; the CLI contract wants 1
    def error(self, message):
        raise _UsageError(message)


def _build_parser() -> _Parser:
    parser = _Parser(prog="ddsr", description="Two-layer dictionary-based image upscaling")
    sub = parser.add_subparsers(dest="command", required=True)

    train = sub.add_parser("train", help="train a model from a directory of images")
    train.add_argument("--config", type=Path, help="flat key=value config file (optional)")
    train.add_argument("--images", type=Path, required=True, help="directory of PNG/PGM images")
    train.add_argument("--out", type=Path, required=True, help="output model path (.ddsr)")

    upscale = sub.add_parser("upscale", help="upscale one low-resolution image")
    upscale.add_argument("--model", type=Path, required=True)
    upscale.add_argument("--in", dest="input", type=Path, required=True)
    upscale.add_argument("--out", type=Path, required=True)
    upscale.add_argument(
        "--single-layer", action="store_true", help="stop after the main dictionary layer"
    )
    upscale.add_argument(
        "--dump-layers",
        type=Path,
        metavar="DIR",
        help="also write h_lf/h_mhf/h_tmp/h_rhf/h_est images (signed layers offset by +0.5)",
    )

    evaluate = sub.add_parser("eval", help="PSNR benchmark against degraded originals")
    evaluate.add_argument("--model", type=Path, required=True)
    evaluate.add_argument("--images", type=Path, required=True)
    evaluate.add_argument("--report", type=Path, required=True, help="output CSV path")
    return parser


def _find_images(directory: Path) -> list[Path]:
    if not directory.is_dir():
        raise DdsrError(f"{directory} is not a directory")
    paths = sorted(
        p for p in directory.iterdir() if p.suffix.lower() in _IMAGE_SUFFIXES and p.is_file()
    )
    if not paths:
        raise DdsrError(f"no {'/'.join(_IMAGE_SUFFIXES)} images in {directory}")
    return paths


def _cmd_train(args) -> int:
    cfg = load_config(args.config) if args.config else ModelConfig()
    paths = _find_images(args.images)
    images = [load_image(p) for p in paths]
    print(f"training on {len(images)} image(s) from {args.images}")
    model, report = train_model_with_report(images, cfg)
    save_model(model, args.out)
    print(
        f"model written to {args.out} "
        f"(MD {report.md_samples_kept}/{report.md_samples_total} patches, "
        f"RD {report.rd_samples_kept}/{report.rd_samples_total} patches)"
    )
    for name, before, after in zip(
        (p.name for p in paths), report.psnr_lf, report.psnr_tmp
    ):
        print(f"  {name}: bicubic {before:.2f} dB -> layer 1 {after:.2f} dB (training fit)")
    return 0


def _cmd_upscale(args) -> int:
    model = load_model(args.model)
    lr = load_image(args.input)
    layers = super_resolve_layers(lr, model, two_layers=not args.single_layer)
    result = (
        clamp_to_gray(layers.tmp) if args.single_layer else layers.estimate
    )
    save_image(result, args.out)
    print(f"{args.input} -> {args.out} ({result.shape[1]}x{result.shape[0]})")
    if args.dump_layers:
        out_dir = args.dump_layers
        out_dir.mkdir(parents=True, exist_ok=True)
        save_image(clamp_to_gray(layers.lf), out_dir / "h_lf.png")
        save_image(clamp_to_gray(layers.mhf + 0.5), out_dir / "h_mhf.png")
        save_image(clamp_to_gray(layers.tmp), out_dir / "h_tmp.png")
        if layers.rhf is not None:
            save_image(clamp_to_gray(layers.rhf + 0.5), out_dir / "h_rhf.png")
            save_image(layers.estimate, out_dir / "h_est.png")
        print(f"layer images written to {out_dir}")
    return 0


def _cmd_eval(args) -> int:
    model = load_model(args.model)
    paths = _find_images(args.images)
    images = [load_image(p) for p in paths]
    report = run_benchmark(model, images, [p.stem for p in paths])
    report.to_csv(args.report)
    print(report.format_table())
    print(f"report written to {args.report}")
    return 0


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except _UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        parser.print_usage(sys.stderr)
        return 1
    try:
        if args.command == "train":
            return _cmd_train(args)
        if args.command == "upscale":
            return _cmd_upscale(args)
        return _cmd_eval(args)
    except (DdsrError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def entry_point() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry_point()
