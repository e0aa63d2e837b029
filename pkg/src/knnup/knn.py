"""KNN-interpolation upsampling with independent per-axis integer factors.

Output pixel (i, j) on the copy grid (``f_y | i`` and ``f_x | j``) is the
original pixel ``(i // f_y, j // f_x)``. Every other output pixel is the
rounded mean of the original pixels whose output-grid positions
``(r * f_y, c * f_x)`` lie within Chebyshev distance ``k`` of ``(i, j)``.

Two paths are provided. :func:`upsample_knn` walks the window offsets
directly and is the reference. :func:`upsample_knn_fast` answers each
window with one summed-area-table query. Both accumulate in integers and
round once, so they agree byte for byte.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ._parallel import run_bands
from .image_core import Image, round_half_up_div

__all__ = [
    "UpsampleConfig",
    "SummedAreaTable",
    "validate_config",
    "upsample_knn",
    "upsample_knn_fast",
    "window_ranges",
]


@dataclass(frozen=True)
class UpsampleConfig:
    f_y: int
    f_x: int
    k: int | None = None
    axis_aware: bool = False

    def __post_init__(self):
        if self.k is None:
            object.__setattr__(self, "k", max(self.f_y, self.f_x))
        _check(self.f_y, self.f_x, self.k)

    @classmethod
    def square(cls, factor: int, k: int | None = None, axis_aware: bool = False):
        return cls(factor, factor, k, axis_aware)

    @property
    def radii(self) -> tuple[int, int]:
        """Effective (row, column) window radii after the axis-aware restriction."""
        if self.axis_aware and (self.f_y == 1) != (self.f_x == 1):
            if self.f_x == 1:
                return self.k, 0
            return 0, self.k
        return self.k, self.k


def _check(f_y, f_x, k):
    for name, f in (("f_y", f_y), ("f_x", f_x)):
        if int(f) != f or f < 1:
            raise ValueError(f"{name} must be an integer >= 1, got {f!r}")
    if int(k) != k or k < 1:
        raise ValueError(f"k must be an integer >= 1, got {k!r}")
    need = max(f_y, f_x) - 1
    if k < need:
        raise ValueError(
            f"k={k} is below max(f_y, f_x) - 1 = {need}; some output windows "
            "would contain no original pixel"
        )


def validate_config(cfg: UpsampleConfig, img: Image | None = None) -> None:
    """Raise ``ValueError`` naming the violated bound; return None if acceptable."""
    _check(cfg.f_y, cfg.f_x, cfg.k)
    if img is not None and not isinstance(img, Image):
        raise TypeError(f"expected Image, got {type(img).__name__}")


class SummedAreaTable:
    """Per-channel integer prefix sums of shape (H + 1, W + 1, C)."""

    def __init__(self, img: Image):
        px = img.pixels.astype(np.int64)
        h, w, c = px.shape
        table = np.zeros((h + 1, w + 1, c), dtype=np.int64)
        np.cumsum(np.cumsum(px, axis=0), axis=1, out=table[1:, 1:])
        self.table = table

    def rect_sum(self, r0, r1, c0, c1):
        """Sum over rows r0..r1 and columns c0..c1, inclusive. Arguments broadcast."""
        t = self.table
        r0 = np.asarray(r0)
        r1 = np.asarray(r1) + 1
        c0 = np.asarray(c0)
        c1 = np.asarray(c1) + 1
        return t[r1, c1] - t[r0, c1] - t[r1, c0] + t[r0, c0]


def window_ranges(n_out: int, factor: int, radius: int, n_in: int):
    """Inclusive original-index range [lo, hi] covered by each output index's window."""
    i = np.arange(n_out)
    lo = np.maximum(0, -((radius - i) // factor))
    hi = np.minimum(n_in - 1, (i + radius) // factor)
    return lo, hi


def _prepare(img: Image, cfg: UpsampleConfig):
    validate_config(cfg, img)
    h, w, c = img.shape
    out = np.empty((h * cfg.f_y, w * cfg.f_x, c), dtype=np.uint8)
    return out


def _copy_grid(out, img: Image, cfg: UpsampleConfig, lo: int, hi: int):
    first = -(-lo // cfg.f_y) * cfg.f_y
    rows = slice(first, hi, cfg.f_y)
    out[rows, ::cfg.f_x] = img.pixels[first // cfg.f_y:-(-hi // cfg.f_y)]


def upsample_knn(img: Image, cfg: UpsampleConfig, workers: int = 1) -> Image:
    """Reference path: accumulate every in-window copy-grid neighbour, offset by offset."""
    out = _prepare(img, cfg)
    h, w, c = img.shape
    f_y, f_x = cfg.f_y, cfg.f_x
    k_y, k_x = cfg.radii
    h_out, w_out = out.shape[:2]
    px = img.pixels.astype(np.int64)
    jj = np.arange(w_out)

    def band(lo, hi):
        ii = np.arange(lo, hi)
        acc = np.zeros((hi - lo, w_out, c), dtype=np.int64)
        cnt = np.zeros((hi - lo, w_out, 1), dtype=np.int64)
        for dy in range(-k_y, k_y + 1):
            y = ii + dy
            on_y = (y >= 0) & (y < h_out) & (y % f_y == 0)
            r = np.where(on_y, y // f_y, 0)
            for dx in range(-k_x, k_x + 1):
                x = jj + dx
                on_x = (x >= 0) & (x < w_out) & (x % f_x == 0)
                cidx = np.where(on_x, x // f_x, 0)
                hit = (on_y[:, None] & on_x[None, :])[:, :, None]
                acc += np.where(hit, px[r[:, None], cidx[None, :]], 0)
                cnt += hit
        out[lo:hi] = round_half_up_div(acc, cnt).astype(np.uint8)
        _copy_grid(out, img, cfg, lo, hi)

    run_bands(band, h_out, workers)
    return Image(out)


def upsample_knn_fast(img: Image, cfg: UpsampleConfig, workers: int = 1) -> Image:
    """Summed-area-table path, O(1) per output pixel."""
    out = _prepare(img, cfg)
    h, w, c = img.shape
    h_out, w_out = out.shape[:2]
    k_y, k_x = cfg.radii
    sat = SummedAreaTable(img)
    r_lo, r_hi = window_ranges(h_out, cfg.f_y, k_y, h)
    c_lo, c_hi = window_ranges(w_out, cfg.f_x, k_x, w)
    c_count = (c_hi - c_lo + 1)[None, :, None]

    def band(lo, hi):
        rl = r_lo[lo:hi, None]
        rh = r_hi[lo:hi, None]
        sums = sat.rect_sum(rl, rh, c_lo[None, :], c_hi[None, :])
        counts = (rh - rl + 1)[:, :, None] * c_count
        out[lo:hi] = round_half_up_div(sums, counts).astype(np.uint8)
        _copy_grid(out, img, cfg, lo, hi)

    run_bands(band, h_out, workers)
    return Image(out)


def knn_means_at(sat: SummedAreaTable, img_shape, cfg: UpsampleConfig, ii, jj):
    """Window means for scattered output positions ``(ii, jj)``; shape (n, C)."""
    h, w, _ = img_shape
    k_y, k_x = cfg.radii
    f_y, f_x = cfg.f_y, cfg.f_x
    r_lo = np.maximum(0, -((k_y - ii) // f_y))
    r_hi = np.minimum(h - 1, (ii + k_y) // f_y)
    c_lo = np.maximum(0, -((k_x - jj) // f_x))
    c_hi = np.minimum(w - 1, (jj + k_x) // f_x)
    sums = sat.rect_sum(r_lo, r_hi, c_lo, c_hi)
    counts = ((r_hi - r_lo + 1) * (c_hi - c_lo + 1))[:, None]
    return round_half_up_div(sums, counts).astype(np.uint8)
