"""Bilinear resampling with half-pixel-centre coordinate mapping."""

from __future__ import annotations

import numpy as np

from ._parallel import run_bands
from .image_core import Image

__all__ = ["source_coords", "upsample_bilinear"]


def source_coords(n_out: int, n_in: int):
    """Lower neighbour, upper neighbour and blend weight per output index."""
    s = (np.arange(n_out, dtype=np.float64) + 0.5) * n_in / n_out - 0.5
    s = np.clip(s, 0.0, n_in - 1)
    lo = np.floor(s).astype(np.intp)
    hi = np.minimum(lo + 1, n_in - 1)
    return lo, hi, s - lo


def upsample_bilinear(img: Image, out_h: int, out_w: int, workers: int = 1) -> Image:
    if out_h < 1 or out_w < 1:
        raise ValueError(f"output dimensions must be >= 1, got {out_h}x{out_w}")
    h, w, c = img.shape
    px = img.pixels.astype(np.float64)
    y0, y1, wy = source_coords(out_h, h)
    x0, x1, wx = source_coords(out_w, w)
    wx = wx[None, :, None]
    out = np.empty((out_h, out_w, c), dtype=np.uint8)

    def band(lo, hi):
        a, b = y0[lo:hi, None], y1[lo:hi, None]
        t = wy[lo:hi, None, None]
        top = px[a, x0] * (1 - wx) + px[a, x1] * wx
        bot = px[b, x0] * (1 - wx) + px[b, x1] * wx
        val = top * (1 - t) + bot * t
        out[lo:hi] = np.clip(np.floor(val + 0.5), 0, 255).astype(np.uint8)

    run_bands(band, out_h, workers)
    return Image(out)
