"""Deterministic synthetic test images.

The committed copies under ``tests/data`` are written by
``scripts/make_fixtures.py`` from these generators.
"""

from __future__ import annotations

import numpy as np

from .image_core import Image


def ideal_image(size: int = 128, seed: int = 7) -> Image:
    """Solid background (>= 80% of the area) with one textured patch and a flat disc.

    The patch texture is tapered towards its border and the disc edge is
    anti-aliased over a few pixels, so both objects blend into the
    background instead of ending in hard high-contrast edges.
    """
    rng = np.random.default_rng(seed)
    background = np.array([38.0, 112.0, 190.0])
    px = np.empty((size, size, 3), dtype=np.float64)
    px[:] = background
    lo, hi = size * 5 // 16, size * 11 // 16
    n = hi - lo
    yy, xx = np.mgrid[0:n, 0:n].astype(np.float64)
    texture = np.stack([
        120 + 100 * np.sin(xx / 3.0),
        90 + 80 * np.cos(yy / 4.0),
        60 + 50 * np.sin((xx + yy) / 5.0),
    ], axis=-1) + rng.integers(-25, 26, size=(n, n, 3))
    taper = np.sin(np.pi * (yy + 0.5) / n) * np.sin(np.pi * (xx + 0.5) / n)
    px[lo:hi, lo:hi] = background + (texture - background) * taper[..., None]

    gy, gx = np.mgrid[0:size, 0:size].astype(np.float64)
    dist = np.hypot(gy - size * 11 / 64, gx - size * 51 / 64)
    alpha = np.clip((size * 5 / 64 - dist) / 3.0 + 0.5, 0.0, 1.0)[..., None]
    px = px * (1 - alpha) + np.array([90.0, 150.0, 220.0]) * alpha
    return Image(np.clip(np.floor(px + 0.5), 0, 255).astype(np.uint8))


def ramp_image(size: int = 128) -> Image:
    """Slow colour ramps quantised in 3-level steps, plus a soft bump.

    Most pixels carry small gradients; plateau interiors are exactly flat.
    """
    yy, xx = np.mgrid[0:size, 0:size].astype(np.int64)
    span = size - 1
    step = 3
    r = (xx * 90 // step) // span * step + 40
    g = (yy * 100 // step) // span * step + 30
    b = ((xx + yy) * 120 // step) // (2 * span) * step + 20
    bump = 40 * np.exp(-((xx - size * 0.7) ** 2 + (yy - size * 0.3) ** 2) / (size * 2.0))
    bump = bump.astype(np.int64)
    px = np.stack([r + bump, g, b + bump // 2], axis=-1)
    return Image(np.clip(px, 0, 255).astype(np.uint8))


def structured_image(size: int = 64) -> Image:
    """Radial gradient with a checkerboard in the lower-right quadrant."""
    yy, xx = np.mgrid[0:size, 0:size].astype(np.float64)
    c = (size - 1) / 2.0
    radius = np.hypot(yy - c, xx - c) / np.hypot(c, c)
    px = np.empty((size, size, 3), dtype=np.float64)
    px[..., 0] = 255 * (1 - radius)
    px[..., 1] = 255 * radius
    px[..., 2] = 128 + 100 * np.cos(radius * 6 * np.pi)
    half = size // 2
    q = np.mgrid[0:half, 0:half]
    checker = ((q[0] // 4 + q[1] // 4) % 2) * 255.0
    px[half:, half:] = checker[..., None]
    return Image(np.clip(np.floor(px + 0.5), 0, 255).astype(np.uint8))


FIXTURES = {
    "ideal_128": ideal_image,
    "ramp_128": ramp_image,
    "structured_64": structured_image,
}
