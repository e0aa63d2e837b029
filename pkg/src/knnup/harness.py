"""Downsample -> upsample -> evaluate pipelines and their reports."""

from __future__ import annotations

import csv
import json
import logging
import math
import statistics
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

from .bilinear import upsample_bilinear
from .image_core import (
    Image,
    downsample_box,
    downsample_decimate,
    load_cifar10_batch,
    load_image,
)
from .knn import UpsampleConfig, upsample_knn, upsample_knn_fast
from .metrics import MetricsReport, evaluate
from .selective import SelectiveConfig, upsample_selective

log = logging.getLogger(__name__)

METHODS = ("knn", "knn-fast", "selective", "bilinear")
DOWNSAMPLERS = {"decimate": downsample_decimate, "box": downsample_box}
DEFAULT_FACTORS = ((2, 2), (4, 4), (5, 5), (10, 10))
REPORT_FIELDS = (
    "image_id", "f_y", "f_x", "method",
    "mse", "rmse", "mae", "psnr_paper", "psnr_std", "ssim",
    "wall_ms", "selectivity",
)
_METRIC_FIELDS = ("mse", "rmse", "mae", "psnr_paper", "psnr_std", "ssim")
IMAGE_SUFFIXES = (".ppm", ".pnm", ".png")


@dataclass
class PipelineSpec:
    corpus: Sequence = ()
    cifar: str | Path | None = None
    limit: int | None = None
    factors: Sequence[tuple[int, int]] = DEFAULT_FACTORS
    methods: Sequence[str] = ("knn", "bilinear")
    k: int | str = "auto"
    axis_aware: bool = False
    selective_cfg: SelectiveConfig = field(default_factory=SelectiveConfig)
    downsampler: str = "decimate"
    repeats: int = 5
    workers: int = 1

    def __post_init__(self):
        self.factors = [tuple(int(v) for v in f) for f in self.factors]
        for f_y, f_x in self.factors:
            if f_y < 1 or f_x < 1:
                raise ValueError(f"factors must be positive, got ({f_y}, {f_x})")
        if self.repeats < 1:
            raise ValueError(f"repeats must be >= 1, got {self.repeats}")
        unknown = set(self.methods) - set(METHODS)
        if unknown:
            raise ValueError(f"unknown methods {sorted(unknown)}; choose from {METHODS}")
        if self.downsampler not in DOWNSAMPLERS:
            raise ValueError(f"unknown downsampler {self.downsampler!r}")
        if self.k != "auto" and (not isinstance(self.k, int) or isinstance(self.k, bool)):
            raise ValueError(f"k must be an integer or 'auto', got {self.k!r}")
        # reject the whole run before any work if some factor pair is unusable
        for f_y, f_x in self.factors:
            self.upsample_config(f_y, f_x)

    def upsample_config(self, f_y: int, f_x: int) -> UpsampleConfig:
        k = None if self.k == "auto" else self.k
        return UpsampleConfig(f_y, f_x, k, self.axis_aware)


@dataclass(frozen=True)
class BenchRow:
    image_id: str
    f_y: int
    f_x: int
    method: str
    metrics: MetricsReport
    wall_ms: float
    selectivity: float | None = None

    @property
    def key(self):
        return (self.image_id, self.f_y, self.f_x, self.method)

    def to_record(self) -> dict:
        rec = {"image_id": self.image_id, "f_y": self.f_y, "f_x": self.f_x, "method": self.method}
        rec.update(self.metrics.as_dict())
        rec["wall_ms"] = self.wall_ms
        rec["selectivity"] = self.selectivity
        return rec

    @classmethod
    def from_record(cls, rec: dict) -> "BenchRow":
        def num(v):
            return None if v is None or v == "" else float(v)

        return cls(
            image_id=str(rec["image_id"]),
            f_y=int(rec["f_y"]),
            f_x=int(rec["f_x"]),
            method=str(rec["method"]),
            metrics=MetricsReport(**{k: num(rec[k]) for k in _METRIC_FIELDS}),
            wall_ms=float(rec["wall_ms"]),
            selectivity=num(rec["selectivity"]),
        )


def iter_corpus(spec: PipelineSpec):
    """Yield ``(image_id, Image)``; unreadable entries are logged and skipped."""
    for idx, entry in enumerate(spec.corpus):
        if isinstance(entry, Image):
            yield f"img{idx:05d}", entry
            continue
        if isinstance(entry, tuple):
            yield entry
            continue
        path = Path(entry)
        if path.is_dir():
            paths = sorted(p for p in path.iterdir() if p.suffix.lower() in IMAGE_SUFFIXES)
        else:
            paths = [path]
        for p in paths:
            try:
                yield p.stem, load_image(p)
            except (OSError, ValueError) as exc:
                log.warning("skipping %s: %s", p, exc)
    if spec.cifar is not None:
        for idx, img in enumerate(load_cifar10_batch(spec.cifar, spec.limit)):
            yield f"cifar{idx:05d}", img


def _upsample(method: str, small: Image, cfg: UpsampleConfig, spec: PipelineSpec, out_hw):
    if method == "knn":
        return upsample_knn(small, cfg), None
    if method == "knn-fast":
        return upsample_knn_fast(small, cfg), None
    if method == "selective":
        out, stats = upsample_selective(small, cfg, spec.selective_cfg)
        return out, stats.selectivity
    return upsample_bilinear(small, *out_hw), None


def _process(image_id: str, img: Image, spec: PipelineSpec) -> list[BenchRow]:
    rows = []
    down = DOWNSAMPLERS[spec.downsampler]
    for f_y, f_x in spec.factors:
        cfg = spec.upsample_config(f_y, f_x)
        small = down(img, f_y, f_x)
        out_hw = (small.height * f_y, small.width * f_x)
        if out_hw != (img.height, img.width):
            log.info(
                "%s at (%d, %d): ragged size, comparing the overlapping %dx%d region",
                image_id, f_y, f_x, img.height, img.width,
            )
        for method in spec.methods:
            times = []
            for _ in range(spec.repeats):
                t0 = time.perf_counter()
                out, selectivity = _upsample(method, small, cfg, spec, out_hw)
                times.append((time.perf_counter() - t0) * 1000.0)
            out = out.crop(img.height, img.width)
            rows.append(BenchRow(
                image_id, f_y, f_x, method,
                metrics=evaluate(img, out),
                wall_ms=statistics.median(times),
                selectivity=selectivity,
            ))
    return rows


def run_pipeline(spec: PipelineSpec) -> list[BenchRow]:
    items = list(iter_corpus(spec))
    if not items:
        raise ValueError("corpus is empty")
    if spec.workers > 1:
        with ThreadPoolExecutor(max_workers=spec.workers) as pool:
            chunks = list(pool.map(lambda it: _process(it[0], it[1], spec), items))
    else:
        chunks = [_process(i, img, spec) for i, img in items]
    return sorted((r for chunk in chunks for r in chunk), key=lambda r: r.key)


# ---------------------------------------------------------------- reports

def _cell(v):
    if v is None:
        return ""
    if isinstance(v, float):
        return repr(v)
    return str(v)


def emit_report(rows: Sequence[BenchRow], fmt: str, path) -> None:
    """Write rows sorted by (image_id, f_y, f_x, method); absent values are empty/null."""
    rows = sorted(rows, key=lambda r: r.key)
    records = [r.to_record() for r in rows]
    if fmt == "csv":
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(REPORT_FIELDS)
            for rec in records:
                writer.writerow([_cell(rec[k]) for k in REPORT_FIELDS])
    elif fmt == "json":
        with open(path, "w") as fh:
            json.dump(records, fh, indent=1, allow_nan=False)
            fh.write("\n")
    else:
        raise ValueError(f"unknown report format {fmt!r}")


def load_report(path, fmt: str | None = None) -> list[BenchRow]:
    fmt = fmt or Path(path).suffix.lstrip(".").lower()
    with open(path, newline="") as fh:
        if fmt == "csv":
            records = list(csv.DictReader(fh))
        elif fmt == "json":
            records = json.load(fh)
        else:
            raise ValueError(f"unknown report format {fmt!r}")
    return [BenchRow.from_record(r) for r in records]


# ---------------------------------------------------------------- comparison

def relative_diff_pct(value: float | None, base: float | None) -> float | None:
    if value is None or base is None:
        return None
    if base == 0:
        return 0.0 if value == 0 else math.inf
    return abs(value - base) / abs(base) * 100.0


def compare_methods(
    rows: Sequence[BenchRow],
    baseline: str = "bilinear",
    metrics: Sequence[str] = ("rmse", "mae", "ssim"),
) -> dict:
    """Percent differences of each method's metrics from ``baseline`` per (image, factor).

    Returns ``{"pairs": [...], "summary": {method: {metric: {min, median, max, n}}}}``.
    """
    by_key: dict[tuple, dict[str, BenchRow]] = {}
    for r in rows:
        by_key.setdefault((r.image_id, r.f_y, r.f_x), {})[r.method] = r
    pairs = []
    collected: dict[str, dict[str, list[float]]] = {}
    for key in sorted(by_key):
        group = by_key[key]
        if baseline not in group:
            raise ValueError(f"no {baseline!r} row for {key}")
        others = [m for m in sorted(group) if m != baseline]
        if not others:
            raise ValueError(f"no method to compare against {baseline!r} for {key}")
        base = group[baseline].metrics
        for method in others:
            m = group[method].metrics
            entry = {"image_id": key[0], "f_y": key[1], "f_x": key[2],
                     "method": method, "baseline": baseline}
            for name in metrics:
                d = relative_diff_pct(getattr(m, name), getattr(base, name))
                entry[name] = d
                if d is not None:
                    collected.setdefault(method, {}).setdefault(name, []).append(d)
            pairs.append(entry)
    summary = {
        method: {
            name: {"min": min(v), "median": statistics.median(v), "max": max(v), "n": len(v)}
            for name, v in per.items()
        }
        for method, per in collected.items()
    }
    return {"pairs": pairs, "summary": summary}
