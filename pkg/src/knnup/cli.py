"""Command-line entry point: ``knnup {upsample,downsample,evaluate,bench}``.

Exit codes: 0 success, 1 usage or configuration error, 2 I/O error.
"""

from __future__ import annotations

import argparse
import csv
import json
import logging
import sys

from .bilinear import upsample_bilinear
from .harness import (
    METHODS,
    PipelineSpec,
    compare_methods,
    emit_report,
    run_pipeline,
)
from .image_core import (
    ImageFormatError,
    downsample_box,
    downsample_decimate,
    load_image,
    save_image,
)
from .knn import UpsampleConfig, upsample_knn, upsample_knn_fast
from .metrics import evaluate
from .selective import SelectiveConfig, upsample_selective

log = logging.getLogger("knnup")

EXIT_OK, EXIT_USAGE, EXIT_IO = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _k_value(text: str):
    if text == "auto":
        return "auto"
    try:
        return int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer or 'auto', got {text!r}") from None


def _factor_list(text: str) -> list[tuple[int, int]]:
    """``"2,4,5,10"`` or ``"2x3,4"`` (rows x cols) -> list of (f_y, f_x)."""
    out = []
    for part in text.split(","):
        part = part.strip().lower()
        try:
            if "x" in part:
                a, b = part.split("x")
                out.append((int(a), int(b)))
            else:
                out.append((int(part), int(part)))
        except ValueError:
            raise argparse.ArgumentTypeError(f"bad factor {part!r}") from None
    return out


def _method_list(text: str) -> list[str]:
    methods = [m.strip() for m in text.split(",") if m.strip()]
    bad = [m for m in methods if m not in METHODS]
    if bad:
        raise argparse.ArgumentTypeError(f"unknown methods {bad}; choose from {list(METHODS)}")
    return methods


def _add_selective_flags(p):
    p.add_argument("--grad-thresh", type=int, default=1)
    p.add_argument("--min-region", type=int, default=0)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="knnup", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("upsample", help="upsample one image")
    p.add_argument("--input", required=True)
    p.add_argument("--output", required=True)
    p.add_argument("--factor", type=int)
    p.add_argument("--factor-y", type=int)
    p.add_argument("--factor-x", type=int)
    p.add_argument("--k", type=_k_value, default="auto")
    p.add_argument("--method", choices=METHODS, default="knn-fast")
    _add_selective_flags(p)
    p.add_argument("--axis-aware", action="store_true")
    p.add_argument("--workers", type=int, default=1)

    p = sub.add_parser("downsample", help="downsample one image")
    p.add_argument("--input", required=True)
    p.add_argument("--output", required=True)
    p.add_argument("--factor", type=int, required=True)
    p.add_argument("--method", choices=("decimate", "box"), default="decimate")

    p = sub.add_parser("evaluate", help="compare a test image against a reference")
    p.add_argument("--reference", required=True)
    p.add_argument("--test", required=True)
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.add_argument("--out")

    p = sub.add_parser("bench", help="run the downsample/upsample/evaluate protocol")
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--corpus")
    src.add_argument("--cifar")
    p.add_argument("--limit", type=int)
    p.add_argument("--factors", type=_factor_list, default=_factor_list("2,4,5,10"))
    p.add_argument("--methods", type=_method_list, default=["knn", "bilinear"])
    p.add_argument("--k", type=_k_value, default="auto")
    _add_selective_flags(p)
    p.add_argument("--axis-aware", action="store_true")
    p.add_argument("--downsampler", choices=("decimate", "box"), default="decimate")
    p.add_argument("--repeats", type=int, default=5)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--report", required=True)
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--summary", help="write the method comparison summary as JSON here")
    return parser


def _factors(args) -> tuple[int, int]:
    if args.factor is not None:
        if args.factor_y is not None or args.factor_x is not None:
            raise UsageError("use either --factor or --factor-y/--factor-x, not both")
        return args.factor, args.factor
    if args.factor_y is None or args.factor_x is None:
        raise UsageError("--factor or both --factor-y and --factor-x are required")
    return args.factor_y, args.factor_x


def cmd_upsample(args) -> int:
    f_y, f_x = _factors(args)
    cfg = UpsampleConfig(f_y, f_x, None if args.k == "auto" else args.k, args.axis_aware)
    img = load_image(args.input)
    if args.method == "knn":
        out = upsample_knn(img, cfg, workers=args.workers)
    elif args.method == "knn-fast":
        out = upsample_knn_fast(img, cfg, workers=args.workers)
    elif args.method == "selective":
        scfg = SelectiveConfig(args.grad_thresh, args.min_region)
        out, stats = upsample_selective(img, cfg, scfg, workers=args.workers)
        log.info(
            "copied=%d interpolated=%d selectivity=%.4f",
            stats.copied_pixels, stats.interpolated_pixels, stats.selectivity,
        )
    else:
        out = upsample_bilinear(img, img.height * f_y, img.width * f_x, workers=args.workers)
    save_image(out, args.output)
    return EXIT_OK


def cmd_downsample(args) -> int:
    img = load_image(args.input)
    fn = downsample_box if args.method == "box" else downsample_decimate
    save_image(fn(img, args.factor, args.factor), args.output)
    return EXIT_OK


def cmd_evaluate(args) -> int:
    report = evaluate(load_image(args.reference), load_image(args.test)).as_dict()
    out = open(args.out, "w", newline="") if args.out else sys.stdout
    try:
        if args.format == "json":
            json.dump(report, out, indent=1)
            out.write("\n")
        else:
            w = csv.writer(out, lineterminator="\n")
            w.writerow(report.keys())
            w.writerow(["" if v is None else repr(v) for v in report.values()])
    finally:
        if out is not sys.stdout:
            out.close()
    return EXIT_OK


def cmd_bench(args) -> int:
    spec = PipelineSpec(
        corpus=[args.corpus] if args.corpus else [],
        cifar=args.cifar,
        limit=args.limit,
        factors=args.factors,
        methods=args.methods,
        k=args.k,
        axis_aware=args.axis_aware,
        selective_cfg=SelectiveConfig(args.grad_thresh, args.min_region),
        downsampler=args.downsampler,
        repeats=args.repeats,
        workers=args.workers,
    )
    rows = run_pipeline(spec)
    emit_report(rows, args.format, args.report)
    log.info("wrote %d rows to %s", len(rows), args.report)
    if "bilinear" in spec.methods and len(spec.methods) > 1:
        summary = compare_methods(rows)["summary"]
        text = json.dumps(summary, indent=1)
        if args.summary:
            with open(args.summary, "w") as fh:
                fh.write(text + "\n")
        else:
            print(text)
    return EXIT_OK


COMMANDS = {
    "upsample": cmd_upsample,
    "downsample": cmd_downsample,
    "evaluate": cmd_evaluate,
    "bench": cmd_bench,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
    )
    try:
        return COMMANDS[args.command](args)
    except (ImageFormatError, OSError) as exc:
        print(f"knnup: I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    except (UsageError, ValueError) as exc:
        print(f"knnup: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
