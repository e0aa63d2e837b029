"""Full-reference image quality metrics on the normalized [0, 1] scale.

Two PSNR conventions are reported:

* ``standard``: ``20 log10(1 / rmse)``, the usual definition for [0, 1] data.
* ``paper``: ``20 log10(255 / rmse)`` with ``rmse`` still on the [0, 1]
  scale. This mixes an 8-bit peak with normalized error and therefore sits
  ``20 log10(255) ~= 48.1308 dB`` above the standard value. It exists to
  reproduce previously published numbers; do not compare it with PSNR
  figures from the wider literature.

Infinite PSNR (identical images) is represented as ``None``, as is SSIM
for images smaller than the SSIM window.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view

from .image_core import Image, NormalizedImage

__all__ = [
    "MetricsReport",
    "SsimConfig",
    "PSNR_PAPER_OFFSET",
    "mse",
    "rmse",
    "mae",
    "psnr",
    "psnr_from_rmse",
    "ssim",
    "evaluate",
]

PSNR_PAPER_OFFSET = 20.0 * math.log10(255.0)


@dataclass(frozen=True)
class SsimConfig:
    window: int = 7
    k1: float = 0.01
    k2: float = 0.03
    data_range: float = 1.0

    @property
    def c1(self) -> float:
        return (self.k1 * self.data_range) ** 2

    @property
    def c2(self) -> float:
        return (self.k2 * self.data_range) ** 2


@dataclass(frozen=True)
class MetricsReport:
    mse: float
    rmse: float
    mae: float
    psnr_paper: float | None
    psnr_std: float | None
    ssim: float | None

    def as_dict(self) -> dict:
        return asdict(self)


def _samples(x) -> np.ndarray:
    if isinstance(x, Image):
        return x.normalized().samples
    if isinstance(x, NormalizedImage):
        return x.samples
    arr = np.asarray(x, dtype=np.float64)
    return arr[:, :, None] if arr.ndim == 2 else arr


def _pair(a, b):
    a, b = _samples(a), _samples(b)
    if a.shape != b.shape:
        raise ValueError(f"shape mismatch: {a.shape} vs {b.shape}")
    return a, b


def _mean(values: np.ndarray) -> float:
    # correctly rounded sum: independent of traversal order
    return math.fsum(values.ravel().tolist()) / values.size


def mse(a, b) -> float:
    a, b = _pair(a, b)
    return _mean((a - b) ** 2)


def rmse(a, b) -> float:
    return math.sqrt(mse(a, b))


def mae(a, b) -> float:
    a, b = _pair(a, b)
    return _mean(np.abs(a - b))


def psnr_from_rmse(err: float, convention: str = "standard") -> float | None:
    if convention not in ("standard", "paper"):
        raise ValueError(f"unknown PSNR convention {convention!r}")
    if err == 0:
        return None
    peak = 255.0 if convention == "paper" else 1.0
    return 20.0 * math.log10(peak / err)


def psnr(a, b, convention: str = "standard") -> float | None:
    return psnr_from_rmse(rmse(a, b), convention)


def _window_sums(x: np.ndarray, n: int) -> np.ndarray:
    """Sums over every valid n x n window, per channel (separable)."""
    rows = sliding_window_view(x, n, axis=0).sum(axis=-1)
    return sliding_window_view(rows, n, axis=1).sum(axis=-1)


def ssim_map(a, b, cfg: SsimConfig = SsimConfig()) -> np.ndarray:
    """Per-window, per-channel SSIM over all valid window positions."""
    a, b = _pair(a, b)
    n = cfg.window
    if a.shape[0] < n or a.shape[1] < n:
        raise ValueError(f"image {a.shape[0]}x{a.shape[1]} is smaller than the {n}x{n} window")
    count = n * n
    sa, sb = _window_sums(a, n), _window_sums(b, n)
    saa, sbb, sab = _window_sums(a * a, n), _window_sums(b * b, n), _window_sums(a * b, n)
    mu_a, mu_b = sa / count, sb / count
    # sa * sb / count keeps the covariance exactly symmetric in (a, b)
    var_a = (saa - sa * sa / count) / (count - 1)
    var_b = (sbb - sb * sb / count) / (count - 1)
    cov = (sab - sa * sb / count) / (count - 1)
    c1, c2 = cfg.c1, cfg.c2
    num = (2 * mu_a * mu_b + c1) * (2 * cov + c2)
    den = (mu_a ** 2 + mu_b ** 2 + c1) * (var_a + var_b + c2)
    return num / den


def ssim(a, b, cfg: SsimConfig = SsimConfig()) -> float:
    return _mean(ssim_map(a, b, cfg))


def evaluate(a: Image, b: Image, ssim_cfg: SsimConfig = SsimConfig()) -> MetricsReport:
    if a.shape != b.shape:
        raise ValueError(f"shape mismatch: {a.shape} vs {b.shape}")
    na, nb = a.normalized(), b.normalized()
    m = mse(na, nb)
    r = math.sqrt(m)
    return MetricsReport(
        mse=m,
        rmse=r,
        mae=mae(na, nb),
        psnr_paper=psnr_from_rmse(r, "paper"),
        psnr_std=psnr_from_rmse(r, "standard"),
        ssim=ssim(na, nb, ssim_cfg) if min(a.height, a.width) >= ssim_cfg.window else None,
    )
