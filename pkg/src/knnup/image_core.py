"""Image data model, file I/O (PPM, PNG, CIFAR-10 batches) and downsamplers."""

from __future__ import annotations

import os
import re
from dataclasses import dataclass
from pathlib import Path

import numpy as np

__all__ = [
    "Image",
    "ImageFormatError",
    "NormalizedImage",
    "load_image",
    "save_image",
    "downsample_decimate",
    "downsample_box",
    "load_cifar10_batch",
    "round_half_up_div",
]

CIFAR_RECORD = 3073
CIFAR_SIDE = 32


class ImageFormatError(ValueError):
    """Raised when an image file is malformed or uses an unsupported encoding."""


def round_half_up_div(num, den):
    """Integer division rounded half up, for non-negative ``num`` and positive ``den``."""
    return (2 * num + den) // (2 * den)


@dataclass(frozen=True, eq=False)
class Image:
    """An 8-bit raster of shape (height, width, channels), channels in {1, 3}.

    ``pixels`` is stored read-only so an Image can be shared between threads.
    """

    pixels: np.ndarray

    def __post_init__(self):
        px = np.asarray(self.pixels)
        if px.ndim == 2:
            px = px[:, :, None]
        if px.ndim != 3:
            raise ValueError(f"expected a (H, W, C) array, got shape {px.shape}")
        h, w, c = px.shape
        if h < 1 or w < 1:
            raise ValueError(f"image dimensions must be >= 1, got {h}x{w}")
        if c not in (1, 3):
            raise ValueError(f"channels must be 1 or 3, got {c}")
        if px.dtype != np.uint8:
            if np.issubdtype(px.dtype, np.integer) or np.issubdtype(px.dtype, np.floating):
                if px.size and (px.min() < 0 or px.max() > 255):
                    raise ValueError("samples must lie in [0, 255]")
            px = px.astype(np.uint8)
        px = np.array(px, dtype=np.uint8, order="C", copy=True)
        px.setflags(write=False)
        object.__setattr__(self, "pixels", px)

    @classmethod
    def from_bytes(cls, height: int, width: int, channels: int, data: bytes) -> "Image":
        expected = height * width * channels
        if len(data) != expected:
            raise ValueError(f"data length {len(data)} != {height}*{width}*{channels} = {expected}")
        arr = np.frombuffer(bytes(data), dtype=np.uint8).reshape(height, width, channels)
        return cls(arr)

    @property
    def height(self) -> int:
        return self.pixels.shape[0]

    @property
    def width(self) -> int:
        return self.pixels.shape[1]

    @property
    def channels(self) -> int:
        return self.pixels.shape[2]

    @property
    def shape(self) -> tuple[int, int, int]:
        return self.pixels.shape

    @property
    def data(self) -> bytes:
        return self.pixels.tobytes()

    def __eq__(self, other):
        if not isinstance(other, Image):
            return NotImplemented
        return self.shape == other.shape and bool(np.array_equal(self.pixels, other.pixels))

    def __hash__(self):
        return hash((self.shape, self.data))

    def __repr__(self):
        return f"Image({self.height}x{self.width}x{self.channels})"

    def normalized(self) -> "NormalizedImage":
        return NormalizedImage(self.pixels.astype(np.float64) / 255.0)

    def crop(self, height: int, width: int) -> "Image":
        return Image(self.pixels[:height, :width])


@dataclass(frozen=True, eq=False)
class NormalizedImage:
    """Float samples on [0, 1], ``sample = raw / 255``."""

    samples: np.ndarray

    def __post_init__(self):
        s = np.asarray(self.samples, dtype=np.float64)
        if s.ndim == 2:
            s = s[:, :, None]
        s = s.copy()
        s.setflags(write=False)
        object.__setattr__(self, "samples", s)

    @property
    def shape(self):
        return self.samples.shape

    def to_image(self) -> Image:
        return Image(np.clip(np.floor(self.samples * 255.0 + 0.5), 0, 255).astype(np.uint8))


# ---------------------------------------------------------------- PPM

_PPM_TOKEN = re.compile(rb"\s*(?:#[^\n]*\n\s*)*(\S+)")


def _read_ppm(raw: bytes, path) -> Image:
    pos = 0
    fields = []
    for _ in range(4):
        m = _PPM_TOKEN.match(raw, pos)
        if m is None:
            raise ImageFormatError(f"{path}: truncated PPM header")
        fields.append(m.group(1))
        pos = m.end()
    magic, w, h, maxval = fields
    if magic != b"P6":
        raise ImageFormatError(f"{path}: unsupported PPM magic {magic!r} (only P6)")
    try:
        width, height, maxval = int(w), int(h), int(maxval)
    except ValueError:
        raise ImageFormatError(f"{path}: non-numeric PPM header field") from None
    if maxval != 255:
        raise ImageFormatError(f"{path}: unsupported maxval {maxval} (only 255)")
    if width < 1 or height < 1:
        raise ImageFormatError(f"{path}: invalid dimensions {width}x{height}")
    # exactly one whitespace byte separates the header from the payload
    pos += 1
    payload = raw[pos:pos + width * height * 3]
    if len(payload) != width * height * 3:
        raise ImageFormatError(
            f"{path}: truncated payload, expected {width * height * 3} bytes, got {len(payload)}"
        )
    return Image.from_bytes(height, width, 3, payload)


def _write_ppm(img: Image, path) -> None:
    px = img.pixels
    if img.channels == 1:
        px = np.repeat(px, 3, axis=2)
    header = f"P6\n{img.width} {img.height}\n255\n".encode("ascii")
    with open(path, "wb") as fh:
        fh.write(header)
        fh.write(px.tobytes())


# ---------------------------------------------------------------- PNG

def _read_png(path) -> Image:
    from PIL import Image as PILImage

    with PILImage.open(path) as im:
        mode = im.mode
        if mode not in ("L", "RGB"):
            raise ImageFormatError(
                f"{path}: unsupported PNG mode {mode!r} (need 8-bit grayscale or RGB)"
            )
        try:
            arr = np.asarray(im, dtype=np.uint8)
        except OSError as exc:
            raise ImageFormatError(f"{path}: truncated payload ({exc})") from exc
    return Image(arr)


def _write_png(img: Image, path) -> None:
    from PIL import Image as PILImage

    px = img.pixels
    if img.channels == 1:
        pil = PILImage.fromarray(px[:, :, 0], mode="L")
    else:
        pil = PILImage.fromarray(px, mode="RGB")
    pil.save(path, format="PNG")


def _kind(path) -> str:
    ext = Path(path).suffix.lower()
    if ext in (".ppm", ".pnm"):
        return "ppm"
    if ext == ".png":
        return "png"
    raise ImageFormatError(f"{path}: unsupported extension {ext!r} (use .ppm or .png)")


def load_image(path: str | os.PathLike) -> Image:
    """Read a P6 PPM or an 8-bit PNG. The format is sniffed from the file's magic bytes."""
    with open(path, "rb") as fh:
        raw = fh.read()
    if raw[:2] == b"P6" or raw[:1] == b"P":
        return _read_ppm(raw, path)
    if raw[:8] == b"\x89PNG\r\n\x1a\n":
        return _read_png(path)
    raise ImageFormatError(f"{path}: unrecognised file signature")


def save_image(img: Image, path: str | os.PathLike) -> None:
    """Write ``img``; the extension picks PPM (gray expanded to R=G=B) or PNG."""
    kind = _kind(path)
    if kind == "ppm":
        _write_ppm(img, path)
    else:
        _write_png(img, path)


# ---------------------------------------------------------------- downsampling

def downsample_decimate(img: Image, f_y: int, f_x: int) -> Image:
    if f_y < 1 or f_x < 1:
        raise ValueError(f"factors must be >= 1, got ({f_y}, {f_x})")
    return Image(img.pixels[::f_y, ::f_x])


def downsample_box(img: Image, f_y: int, f_x: int) -> Image:
    """Block mean over f_y x f_x tiles; partial tiles at the borders average what exists."""
    if f_y < 1 or f_x < 1:
        raise ValueError(f"factors must be >= 1, got ({f_y}, {f_x})")
    px = img.pixels.astype(np.int64)
    h, w, _ = px.shape
    rows = np.arange(0, h, f_y)
    cols = np.arange(0, w, f_x)
    sums = np.add.reduceat(np.add.reduceat(px, rows, axis=0), cols, axis=1)
    rcount = np.minimum(rows + f_y, h) - rows
    ccount = np.minimum(cols + f_x, w) - cols
    counts = (rcount[:, None] * ccount[None, :])[:, :, None]
    return Image(round_half_up_div(sums, counts).astype(np.uint8))


# ---------------------------------------------------------------- CIFAR-10

def load_cifar10_batch(path: str | os.PathLike, limit: int | None = None) -> list[Image]:
    """Read a CIFAR-10 binary batch (``data_batch_N.bin``); labels are discarded."""
    raw = np.fromfile(path, dtype=np.uint8)
    if raw.size == 0 or raw.size % CIFAR_RECORD:
        raise ImageFormatError(
            f"{path}: size {raw.size} is not a positive multiple of {CIFAR_RECORD}"
        )
    records = raw.reshape(-1, CIFAR_RECORD)
    if limit is not None:
        records = records[:limit]
    planes = records[:, 1:].reshape(-1, 3, CIFAR_SIDE, CIFAR_SIDE)
    return [Image(p.transpose(1, 2, 0)) for p in planes]
